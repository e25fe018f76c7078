#include "martinet/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace martinet {

namespace {

void emit_string(const std::string& s, std::string& out) {
    out += '"';
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

void emit(const nlohmann::json& j, std::string& out) {
    using value_t = nlohmann::json::value_t;
    switch (j.type()) {
        case value_t::null: out += "null"; break;
        case value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case value_t::number_integer: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%" PRId64, j.get<int64_t>());
            out += buf;
            break;
        }
        case value_t::number_unsigned: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%" PRIu64, j.get<uint64_t>());
            out += buf;
            break;
        }
        case value_t::number_float: {
            double d = j.get<double>();
            if (!std::isfinite(d)) { out += "null"; break; }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", d);
            out += buf;
            break;
        }
        case value_t::string: emit_string(j.get<std::string>(), out); break;
        case value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ',';
                first = false;
                emit(item, out);
            }
            out += ']';
            break;
        }
        case value_t::object: {
            // nlohmann::json objects iterate in sorted key order (std::map)
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                emit_string(it.key(), out);
                out += ':';
                emit(it.value(), out);
            }
            out += '}';
            break;
        }
        default: out += "null";
    }
}

} // namespace

std::string emit_report(const nlohmann::json& j) {
    std::string out;
    emit(j, out);
    out += '\n';
    return out;
}

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

} // namespace martinet
