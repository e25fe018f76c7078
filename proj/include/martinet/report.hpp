#ifndef MARTINET_REPORT_HPP
#define MARTINET_REPORT_HPP

#include <json.hpp>

#include <cstdint>
#include <string>

namespace martinet {

/// Canonical JSON bytes: object keys sorted, floats printed with 17
/// significant digits, newline-terminated. Byte-identical for equal inputs.
std::string emit_report(const nlohmann::json& j);

/// FNV-1a 64-bit, as a fixed-width hex string.
std::string fnv1a_hex(const std::string& data);

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace martinet

#endif
