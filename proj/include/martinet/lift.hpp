#ifndef MARTINET_LIFT_HPP
#define MARTINET_LIFT_HPP

#include "martinet/distribution.hpp"
#include "martinet/flow.hpp"

#include <array>
#include <vector>

namespace martinet {

/// Piecewise-constant control: column j applies on [j/N, (j+1)/N].
struct Control {
    std::vector<std::array<double, 2>> u;
    int segments() const { return static_cast<int>(u.size()); }
    static Control constant(std::array<double, 2> value, int n) {
        Control c;
        c.u.assign(n, value);
        return c;
    }
};

/// Cotangent lift (gamma, p) of a controlled horizontal path.
struct Lift {
    std::vector<double> times;
    std::vector<std::array<double, 3>> gamma;
    std::vector<std::array<double, 3>> p;
    std::vector<double> p_norm;
    double length = 0.0;       // Euclidean length of gamma
    double max_pX1 = 0.0;      // max_t |p . X1(gamma)|
    double max_pX2 = 0.0;
    double max_p_norm = 0.0;
    double lipschitz_C = 0.0;  // measured along gamma
    double gronwall_bound = 0.0; // 2 exp(C * length)
    bool singular = false;     // p stayed orthogonal to the distribution
};

/// Integrates the coupled (gamma, p) system
///   gamma' = sum_i u_i X^i(gamma),  p' = -sum_i u_i p . dX^i(gamma).
/// Rejects p0 not orthogonal to Delta at x0 or not of unit norm.
Lift abnormal_lift(const DistributionSpec& spec, const Control& control,
                   const std::array<double, 3>& x0, const std::array<double, 3>& p0,
                   double tol = 1e-10);

struct StokesResult {
    std::vector<double> I; // I_0 (initial arc) then one per section
    double mean = 0.0;
    double stdev = 0.0;
    double rel_stdev = 0.0;
};

/// Transports the arc alpha(s) = base + s * dir (s in [0,1]), lifted with the
/// unit annihilator covector, along the characteristic field through the given
/// sections, and evaluates the action integral I_k = int beta^k . d(alpha^k)
/// after each transition. beta_scale multiplies the initial covector.
StokesResult stokes_action(const DistributionSpec& spec, const std::array<double, 3>& arc_base,
                           const std::array<double, 3>& arc_dir,
                           const std::vector<Section>& sections, int quad_points = 41,
                           double tol = 1e-10, double beta_scale = 1.0);

struct EndpointRank {
    std::array<double, 3> sigma{0, 0, 0}; // singular values, descending
    int rank = 0;
    std::array<double, 3> endpoint{0, 0, 0};
};

/// Finite-difference Jacobian of the end-point map over piecewise-constant
/// controls (3 x 2N), ranked by singular values: rank = #{sigma_i / sigma_1 > tol_rank}.
EndpointRank endpoint_rank(const DistributionSpec& spec, const std::array<double, 3>& x0,
                           const Control& control, double h_fd = 1e-4,
                           double tol_rank = 1e-6, double tol = 1e-12);

} // namespace martinet

#endif
