#ifndef MARTINET_FLOW_HPP
#define MARTINET_FLOW_HPP

#include "martinet/poly.hpp"
#include "martinet/rk45.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace martinet {

/// Length metric: Euclidean, or the degenerate planar model
/// ds^2 = (d(u^alpha))^2 + (d(u^beta))^2.
struct MetricSpec {
    enum class Kind { Euclidean, HP };
    Kind kind = Kind::Euclidean;
    std::array<int, 2> alpha{1, 0};
    std::array<int, 2> beta{0, 1};

    static MetricSpec euclidean() { return {}; }
    static MetricSpec hp(std::array<int, 2> a, std::array<int, 2> b) {
        return MetricSpec{Kind::HP, a, b};
    }
    std::string tag() const;
};

/// Time-sampled integral curve with cumulative metric lengths.
struct Trajectory {
    int dim = 2;
    std::vector<double> times;
    std::vector<std::array<double, 3>> points;
    std::vector<std::array<double, 3>> velocities; // field values at the samples
    std::vector<double> cum_length;
    std::string metric_tag = "euclidean";
    bool flagged = false; // partial result (singular stall / step underflow / budget)
    std::vector<std::string> flags;

    std::array<double, 3> endpoint() const { return points.back(); }
    double length() const { return cum_length.empty() ? 0.0 : cum_length.back(); }
    size_t size() const { return times.size(); }
};

struct StopSpec {
    std::optional<double> time;                       // pseudo-time horizon
    std::optional<double> length;                     // metric length budget
    std::optional<std::array<std::array<double, 2>, 3>> box; // region-exit bounds
    double field_floor = 0.0;                         // stop when |f| drops below
    static StopSpec at_time(double T) { StopSpec s; s.time = T; return s; }
    static StopSpec at_length(double L) { StopSpec s; s.length = L; return s; }
};

/// Adaptive RK45 integration of a polynomial field with the selected metric
/// accumulated as arc length. `direction` multiplies the field.
Trajectory integrate_field(const PolyVectorField& field, const std::vector<double>& x0,
                           int direction, const StopSpec& stop, double tol,
                           const MetricSpec& metric = MetricSpec::euclidean());

/// Oriented parametrized segment lambda(s) = base + s * dir, s in [0,1], with a
/// crossing functional g(x) = normal . (x - base).
struct Section {
    int dim = 2;
    std::array<double, 3> base{0, 0, 0};
    std::array<double, 3> dir{1, 0, 0};
    std::array<double, 3> normal{0, 1, 0};
    bool bounded = true; // restrict crossings to s in (0, 1]; planes are unbounded

    static Section segment2d(std::array<double, 2> a, std::array<double, 2> b);
    static Section plane3d(std::array<double, 3> base, std::array<double, 3> normal,
                           std::array<double, 3> dir);

    double g(const std::array<double, 3>& x) const;
    double s_of(const std::array<double, 3>& x) const;
    std::array<double, 3> at(double s) const;
    /// Arc length of lambda([0,s]) under the metric (Simpson quadrature).
    double arc_length(double s, const MetricSpec& metric) const;
};

struct Crossing {
    double t = 0;
    double s = 0;
    std::array<double, 3> x{0, 0, 0};
    double cum_length = 0;
    int direction = 0;   // sign of normal . velocity at the crossing
    bool tangential = false;
};

/// All transversal crossings of a stored trajectory with a section, ordered in
/// time, refined to 1e-10 in time on the cubic Hermite interpolant.
std::vector<Crossing> section_crossings(const Trajectory& traj, const Section& sec);

struct FlowBudget {
    double max_time = 1e4;
    double max_length = 1e4;
};

/// First return to the section from lambda(s0). Throws std::domain_error for
/// s0 outside (0,1] and std::runtime_error when no return occurs in budget.
double poincare_map(const PolyVectorField& field, const Section& sec, double s0, double tol,
                    int direction = 1, const FlowBudget& budget = {},
                    const MetricSpec& metric = MetricSpec::euclidean());

struct MonodromicResult {
    std::vector<double> lengths;   // cumulative length at each return
    std::vector<double> s_values;  // section parameter at each return
    double fit_exponent = 0.0;     // slope of log L_k vs log k over [K/10, K]
    bool complete = true;
};

/// Integrates one trajectory from lambda(r0) through K returns to the section,
/// recording cumulative lengths and the power-law fit exponent.
MonodromicResult monodromic_length_experiment(const PolyVectorField& field, const Section& sec,
                                              double r0, int returns, double tol,
                                              int direction = 1,
                                              const MetricSpec& metric = MetricSpec::euclidean());

struct TransitionSample {
    double s = 0;        // parameter on the first section
    double d = 0;        // metric arc distance from the section base
    double length = 0;   // metric length of the leaf to the second section
    double ualpha_p = 0; // u^alpha at the start point
    double ualpha_diff = 0; // u^alpha(p) - u^alpha(phi(p))
};

struct TransitionReport {
    std::vector<TransitionSample> samples; // sorted by d
    int length_violations = 0;   // pairs d(p) < d(q) with length(p) > K length(q)
    int monotonicity_violations = 0; // u^alpha difference not monotone/constant
    double K_required = 1.0;
    double K_empirical = 1.0;    // max length(p)/length(q) over pairs d(p)<d(q)
    bool ualpha_diff_constant = false;
};

/// Transition-map length comparison between two sections. With K_required = 1
/// this is the regular-configuration check; larger K_required allows the
/// saddle configuration, where the empirical K is reported.
TransitionReport transition_monotonicity_check(const PolyVectorField& field,
                                               const Section& sec1, const Section& sec2,
                                               const MetricSpec& metric, int n_samples,
                                               unsigned seed, double K_required, double tol,
                                               std::pair<double, double> s_range = {0.05, 0.95});

} // namespace martinet

#endif
