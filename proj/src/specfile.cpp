#include "martinet/specfile.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace martinet {

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    bool eof() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    void skip_ws_and_comments(bool skip_newlines) {
        while (!eof()) {
            char c = s[pos];
            if (c == ' ' || c == '\t' || c == '\r') { ++pos; continue; }
            if (c == '#') {
                while (!eof() && s[pos] != '\n') ++pos;
                continue;
            }
            if (c == '\n' && skip_newlines) { ++pos; continue; }
            break;
        }
    }
};

TomlValue parse_value(Cursor& c);

TomlValue parse_array(Cursor& c) {
    ++c.pos; // '['
    TomlValue::Array items;
    for (;;) {
        c.skip_ws_and_comments(true);
        if (c.eof()) throw SpecError("unterminated array");
        if (c.peek() == ']') { ++c.pos; break; }
        items.push_back(parse_value(c));
        c.skip_ws_and_comments(true);
        if (!c.eof() && c.peek() == ',') { ++c.pos; continue; }
        if (!c.eof() && c.peek() == ']') { ++c.pos; break; }
        if (c.eof()) throw SpecError("unterminated array");
        throw SpecError("expected ',' or ']' in array");
    }
    return TomlValue(std::move(items));
}

TomlValue parse_value(Cursor& c) {
    c.skip_ws_and_comments(true);
    if (c.eof()) throw SpecError("missing value");
    char ch = c.peek();
    if (ch == '[') return parse_array(c);
    if (ch == '"') {
        ++c.pos;
        std::string out;
        while (!c.eof() && c.peek() != '"') {
            if (c.peek() == '\\' && c.pos + 1 < c.s.size()) {
                ++c.pos;
                char e = c.s[c.pos];
                if (e == 'n') out += '\n';
                else if (e == 't') out += '\t';
                else out += e;
                ++c.pos;
                continue;
            }
            out += c.s[c.pos++];
        }
        if (c.eof()) throw SpecError("unterminated string");
        ++c.pos;
        return TomlValue(std::move(out));
    }
    // bare token: bool or number
    std::string tok;
    while (!c.eof()) {
        char t = c.peek();
        if (t == ',' || t == ']' || t == '\n' || t == '#' || t == ' ' || t == '\t' || t == '\r')
            break;
        tok += t;
        ++c.pos;
    }
    if (tok == "true") return TomlValue(true);
    if (tok == "false") return TomlValue(false);
    try {
        size_t used = 0;
        double d = std::stod(tok, &used);
        if (used != tok.size()) throw SpecError("bad number '" + tok + "'");
        return TomlValue(d);
    } catch (const std::invalid_argument&) {
        throw SpecError("bad value '" + tok + "'");
    }
}

} // namespace

SpecFile SpecFile::parse(const std::string& text) {
    SpecFile out;
    out.raw_ = text;
    Cursor c{text};
    std::string current = "";
    while (true) {
        c.skip_ws_and_comments(true);
        if (c.eof()) break;
        if (c.peek() == '[') {
            ++c.pos;
            std::string name;
            while (!c.eof() && c.peek() != ']') name += c.s[c.pos++];
            if (c.eof()) throw SpecError("unterminated section header");
            ++c.pos;
            current = name;
            out.sections_[current];
            continue;
        }
        // key = value
        std::string key;
        while (!c.eof() && (std::isalnum(static_cast<unsigned char>(c.peek())) ||
                            c.peek() == '_' || c.peek() == '-'))
            key += c.s[c.pos++];
        if (key.empty()) throw SpecError("expected a key at byte " + std::to_string(c.pos));
        c.skip_ws_and_comments(false);
        if (c.eof() || c.peek() != '=') throw SpecError("expected '=' after key '" + key + "'");
        ++c.pos;
        TomlValue v = parse_value(c);
        out.sections_[current][key] = std::move(v);
    }
    return out;
}

SpecFile SpecFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool SpecFile::has(const std::string& s, const std::string& k) const {
    auto it = sections_.find(s);
    return it != sections_.end() && it->second.count(k) > 0;
}

const TomlValue& SpecFile::get(const std::string& s, const std::string& k) const {
    auto it = sections_.find(s);
    if (it == sections_.end()) throw SpecError("missing section [" + s + "]");
    auto jt = it->second.find(k);
    if (jt == it->second.end()) throw SpecError("missing key '" + k + "' in [" + s + "]");
    return jt->second;
}

const std::map<std::string, TomlValue>& SpecFile::section(const std::string& s) const {
    auto it = sections_.find(s);
    if (it == sections_.end()) throw SpecError("missing section [" + s + "]");
    return it->second;
}

} // namespace martinet
