#ifndef MARTINET_RK45_HPP
#define MARTINET_RK45_HPP

#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace martinet {

using Rhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 2000000;
};

/// One accepted step with endpoint derivatives, enough for cubic Hermite
/// interpolation inside [t0, t1].
struct StepInfo {
    double t0, t1;
    const std::vector<double>& y0;
    const std::vector<double>& y1;
    const std::vector<double>& f0;
    const std::vector<double>& f1;
};

std::vector<double> hermite_interpolate(const StepInfo& s, double t);

/// Bisection on a scalar functional of the Hermite interpolant; the bracket
/// [s.t0, s.t1] must contain a sign change. Time tolerance 1e-10.
double hermite_bisect(const StepInfo& s, const std::function<double(const std::vector<double>&)>& g);

struct OdeStatus {
    enum class Kind { ReachedLimit, ObserverStop, StepUnderflow, MaxSteps };
    Kind kind = Kind::ReachedLimit;
    double t = 0.0;
    long steps = 0;
};

/// Adaptive embedded Dormand-Prince 4(5). Integrates forward from t0 to
/// t_limit. The observer sees every accepted step and may request a stop at a
/// time inside the step; the driver then re-integrates the step to land on the
/// stop time exactly. On return, y holds the final state.
OdeStatus rk45_integrate(const Rhs& rhs, double t0, std::vector<double>& y, double t_limit,
                         const OdeOptions& opts,
                         const std::function<std::optional<double>(const StepInfo&)>& observer = {});

} // namespace martinet

#endif
