#ifndef MARTINET_SPECFILE_HPP
#define MARTINET_SPECFILE_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace martinet {

class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Value in the TOML-like spec format: string, number, bool, or array.
class TomlValue {
public:
    using Array = std::vector<TomlValue>;
    TomlValue() : v_(false) {}
    explicit TomlValue(std::string s) : v_(std::move(s)) {}
    explicit TomlValue(double d) : v_(d) {}
    explicit TomlValue(bool b) : v_(b) {}
    explicit TomlValue(Array a) : v_(std::move(a)) {}

    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_number() const { return std::holds_alternative<double>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_array() const { return std::holds_alternative<Array>(v_); }

    const std::string& as_string() const {
        if (!is_string()) throw SpecError("expected a string value");
        return std::get<std::string>(v_);
    }
    double as_number() const {
        if (!is_number()) throw SpecError("expected a numeric value");
        return std::get<double>(v_);
    }
    bool as_bool() const {
        if (!is_bool()) throw SpecError("expected a boolean value");
        return std::get<bool>(v_);
    }
    const Array& as_array() const {
        if (!is_array()) throw SpecError("expected an array value");
        return std::get<Array>(v_);
    }
    /// numbers and quoted numerics both read as double
    double number_or_string() const {
        if (is_number()) return as_number();
        return std::stod(as_string());
    }

private:
    std::variant<std::string, double, bool, Array> v_;
};

/// Minimal TOML-like config: [section] headers, key = value lines, values are
/// quoted strings, numbers, booleans, or (nested) single- or multi-line arrays.
/// '#' starts a comment.
class SpecFile {
public:
    static SpecFile parse(const std::string& text);
    static SpecFile load(const std::string& path);

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }
    bool has(const std::string& s, const std::string& k) const;
    const TomlValue& get(const std::string& s, const std::string& k) const;
    const std::map<std::string, TomlValue>& section(const std::string& s) const;
    const std::string& raw_text() const { return raw_; }

private:
    std::map<std::string, std::map<std::string, TomlValue>> sections_;
    std::string raw_;
};

} // namespace martinet

#endif
