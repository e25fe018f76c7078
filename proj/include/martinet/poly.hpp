#ifndef MARTINET_POLY_HPP
#define MARTINET_POLY_HPP

#include "martinet/rational.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace martinet {

/// Exponent vector for up to 3 variables; entries past the arity stay 0.
using Expo = std::array<int, 3>;

inline int total_degree(const Expo& e) { return e[0] + e[1] + e[2]; }

/// Graded lexicographic order, x1 most significant in the tie-break.
struct GrlexLess {
    bool operator()(const Expo& a, const Expo& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        for (int i = 0; i < 3; ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

/// Exact multivariate polynomial with rational coefficients in 1..3 variables.
/// No stored coefficient is zero; equality is term-map equality.
class Poly {
public:
    using TermMap = std::map<Expo, Rational, GrlexLess>;

    explicit Poly(int arity = 2) : arity_(check_arity(arity)) {}

    static Poly zero(int arity) { return Poly(arity); }
    static Poly constant(int arity, const Rational& c) {
        Poly p(arity);
        p.add_term({0, 0, 0}, c);
        return p;
    }
    static Poly variable(int arity, int index, int power = 1) {
        if (index < 0 || index >= arity) throw std::out_of_range("Poly::variable: index out of range");
        Poly p(arity);
        Expo e{0, 0, 0};
        e[index] = power;
        p.add_term(e, Rational(1));
        return p;
    }

    int arity() const { return arity_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Expo{0, 0, 0});
    }
    Rational constant_value() const {
        auto it = terms_.find({0, 0, 0});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }
    int degree_in(int var) const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }
    bool depends_on(int var) const {
        for (const auto& [e, c] : terms_)
            if (e[var] != 0) return true;
        return false;
    }

    /// Leading term in graded-lex order. Undefined on the zero polynomial.
    const std::pair<const Expo, Rational>& leading() const {
        if (terms_.empty()) throw std::domain_error("Poly::leading: zero polynomial");
        return *terms_.rbegin();
    }

    void add_term(const Expo& e, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    static int check_arity(int n) {
        if (n < 1 || n > 3) throw std::invalid_argument("Poly: arity must be 1..3");
        return n;
    }
    int arity_;
    TermMap terms_;
};

enum class PolyOp { Add, Sub, Mul };

Poly add(const Poly& p, const Poly& q);
Poly sub(const Poly& p, const Poly& q);
Poly mul(const Poly& p, const Poly& q);
Poly neg(const Poly& p);
Poly scale(const Poly& p, const Rational& c);
Poly arith(const Poly& p, const Poly& q, PolyOp op);

inline Poly operator+(const Poly& p, const Poly& q) { return add(p, q); }
inline Poly operator-(const Poly& p, const Poly& q) { return sub(p, q); }
inline Poly operator*(const Poly& p, const Poly& q) { return mul(p, q); }
inline Poly operator-(const Poly& p) { return neg(p); }

/// Exact formal partial derivative with respect to variable `var`.
Poly partial(const Poly& p, int var);

/// Result of exact division: either the quotient, or the remainder witness.
struct ExactDivision {
    std::optional<Poly> quotient;
    Poly remainder; // zero iff quotient holds
    bool ok() const { return quotient.has_value(); }
};

/// Exact polynomial division p / q. On failure the remainder field holds a
/// nonzero witness that cannot be reduced by the leading term of q.
ExactDivision exact_divide(const Poly& p, const Poly& q);

Rational eval(const Poly& p, const std::vector<Rational>& point);
double eval(const Poly& p, const std::vector<double>& point);

/// Polynomial vector field: `arity` components, each a Poly in `arity` variables.
struct PolyVectorField {
    int arity;
    std::vector<Poly> comp;

    PolyVectorField() : arity(2) {}
    explicit PolyVectorField(std::vector<Poly> components)
        : arity(static_cast<int>(components.size())), comp(std::move(components)) {
        for (const auto& c : comp)
            if (c.arity() != arity)
                throw std::invalid_argument("PolyVectorField: component arity mismatch");
    }
};

/// Directional derivative X(f) = sum_i X_i * df/dx_i.
Poly directional(const PolyVectorField& X, const Poly& f);

/// Lie bracket [X, Y], component j = X(Y_j) - Y(X_j).
PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y);

/// Divergence sum_i dX_i/dx_i.
Poly divergence(const PolyVectorField& X);

std::vector<double> eval(const PolyVectorField& X, const std::vector<double>& point);
std::vector<Rational> eval(const PolyVectorField& X, const std::vector<Rational>& point);

/// Polynomial map between affine spaces; components live in the domain variables.
struct PolyMap {
    int domain_arity;
    std::vector<Poly> comp; // one Poly per codomain coordinate

    PolyMap(int domain, std::vector<Poly> components)
        : domain_arity(domain), comp(std::move(components)) {
        for (const auto& c : comp)
            if (c.arity() != domain_arity)
                throw std::invalid_argument("PolyMap: component arity mismatch");
    }
    int codomain_arity() const { return static_cast<int>(comp.size()); }
};

/// Composition p ∘ sigma, exact.
Poly pullback(const Poly& p, const PolyMap& sigma);

} // namespace martinet

#endif
