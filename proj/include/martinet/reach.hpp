#ifndef MARTINET_REACH_HPP
#define MARTINET_REACH_HPP

#include "martinet/distribution.hpp"
#include "martinet/flow.hpp"

#include <array>
#include <string>
#include <vector>

namespace martinet {

/// Declared Sigma^1_tr-type branch curve: common zero set of the generators,
/// with user-declared restart directions, one per adjacent sheet.
struct DeclaredCurve {
    std::vector<Poly> generators;                   // arity-3 polynomials
    std::vector<std::array<double, 3>> sheet_dirs;  // offsets into the sheets
    double snap_tol = 1e-5;
};

struct ReachOptions {
    double tol = 1e-10;
    double field_floor = 1e-7;   // |Z| below this counts as a singular stall
    double restart_eps = 1e-4;   // offset used when restarting on a sheet
    int max_branches = 64;
    std::vector<DeclaredCurve> sigma1tr;
    std::vector<std::array<Rational, 3>> singular_candidates; // exact Sigma^0 candidates
};

struct ReachVertex {
    std::array<double, 3> x{0, 0, 0};
    std::string kind; // root | sigma0 | sigma1tr | flagged
};

struct ReachEdge {
    int from_vertex = 0;
    int to_vertex = -1; // -1: terminal (budget cut or flagged end)
    std::vector<std::array<double, 3>> polyline;
    double length = 0.0;
    std::string termination; // budget | vertex | singular_stall | flagged:...
};

struct ReachTree {
    std::vector<ReachVertex> vertices; // vertex 0 is the root
    std::vector<ReachEdge> edges;
    double total_length = 0.0;
    bool truncated = false; // max_branches hit or unresolved branching
    std::vector<std::string> flags;
};

/// Finite tree of characteristic trajectory segments from x0 on Sigma with
/// total per-path length budget L: follows the characteristic field both ways,
/// branches at declared Sigma^1_tr curves (per sheet) and at singular points
/// of Z along saddle eigenvector directions.
ReachTree reachable_set(const DistributionSpec& spec, const MartinetData& md,
                        const std::array<double, 3>& x0, double budget,
                        const ReachOptions& opts = {});

} // namespace martinet

#endif
