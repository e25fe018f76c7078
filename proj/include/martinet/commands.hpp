#ifndef MARTINET_COMMANDS_HPP
#define MARTINET_COMMANDS_HPP

#include "martinet/distribution.hpp"
#include "martinet/planar.hpp"
#include "martinet/specfile.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace martinet {

struct CliOptions {
    unsigned long seed = 12345;
    std::optional<double> tol;
    std::optional<int> max_depth;
    std::optional<int> returns;
    std::string csv_dir = ".";
    std::string csv_prefix = "out";
};

/// Builders from the TOML-like spec format.
DistributionSpec build_distribution(const SpecFile& spec);
PlanarField build_planar(const SpecFile& spec);

/// Dispatches one CLI command and returns the full report (version, input
/// hash, command, results, warnings). Writes CSV artifacts for trace/reach.
nlohmann::json run_command(const std::string& command, const SpecFile& spec,
                           const CliOptions& opts);

} // namespace martinet

#endif
