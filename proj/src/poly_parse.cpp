#include "martinet/poly_parse.hpp"

#include <cctype>

namespace martinet {

namespace {

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars)
        : s_(text), vars_(vars) {}

    Poly run() {
        int arity = static_cast<int>(vars_.size());
        if (arity < 1 || arity > 3)
            throw ParseError("parse_poly: 1 to 3 variables required", 0);
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError("unexpected trailing input", pos_);
        return p;
    }

private:
    int arity() const { return static_cast<int>(vars_.size()); }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) { ++pos_; return true; }
        return false;
    }

    Poly expr() {
        skip_ws();
        bool negate = false;
        if (accept('-')) negate = true;
        else accept('+');
        Poly p = term();
        if (negate) p = neg(p);
        for (;;) {
            if (accept('+')) p = add(p, term());
            else if (accept('-')) p = sub(p, term());
            else break;
        }
        return p;
    }

    Poly term() {
        Poly p = factor();
        while (accept('*')) p = mul(p, factor());
        return p;
    }

    Poly factor() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            size_t open = pos_;
            ++pos_;
            Poly p = expr();
            if (!accept(')')) throw ParseError("missing ')'", pos_);
            if (peek('^'))
                throw ParseError("exponent on parenthesized group unsupported", pos_);
            (void)open;
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return rational_factor();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return variable_factor();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Poly rational_factor() {
        size_t start = pos_;
        std::string num = digits();
        if (num.empty()) throw ParseError("expected number", start);
        std::string text = num;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            skip_ws();
            std::string den = digits();
            if (den.empty()) throw ParseError("expected denominator digits", pos_);
            if (den.find_first_not_of('0') == std::string::npos)
                throw ParseError("zero denominator", pos_);
            text += "/" + den;
        }
        return Poly::constant(arity(), Rational::parse(text));
    }

    std::string digits() {
        std::string out;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            out += s_[pos_++];
        return out;
    }

    Poly variable_factor() {
        size_t start = pos_;
        std::string name;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            name += s_[pos_++];
        int index = -1;
        for (size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) { index = static_cast<int>(i); break; }
        if (index < 0) throw ParseError("unknown variable '" + name + "'", start);
        int power = 1;
        if (accept('^')) {
            skip_ws();
            std::string d = digits();
            if (d.empty()) throw ParseError("expected exponent digits", pos_);
            if (d.size() > 4) throw ParseError("exponent too large", pos_);
            power = std::stoi(d);
        }
        return Poly::variable(arity(), index, power);
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    size_t pos_ = 0;
};

std::string monomial_str(const Expo& e, const std::vector<std::string>& vars) {
    std::string out;
    for (size_t i = 0; i < vars.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += vars[i];
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
    return out;
}

} // namespace

Poly parse_poly(const std::string& text, const std::vector<std::string>& vars) {
    return Parser(text, vars).run();
}

std::string print_poly(const Poly& p, const std::vector<std::string>& vars) {
    if (static_cast<int>(vars.size()) != p.arity())
        throw std::invalid_argument("print_poly: variable count mismatch");
    if (p.is_zero()) return "0";
    std::string out;
    // highest monomial first
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        Rational a = c;
        if (out.empty()) {
            if (a.sign() < 0) { out += "-"; a = -a; }
        } else {
            out += a.sign() < 0 ? " - " : " + ";
            if (a.sign() < 0) a = -a;
        }
        std::string m = monomial_str(e, vars);
        if (m.empty()) out += a.str();
        else if (a.is_one()) out += m;
        else out += a.str() + "*" + m;
    }
    return out;
}

std::vector<std::string> default_vars(int arity) {
    switch (arity) {
        case 1: return {"t"};
        case 2: return {"x", "y"};
        case 3: return {"x1", "x2", "x3"};
    }
    throw std::invalid_argument("default_vars: arity must be 1..3");
}

} // namespace martinet
