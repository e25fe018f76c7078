#ifndef MARTINET_PLANAR_HPP
#define MARTINET_PLANAR_HPP

#include "martinet/poly.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace martinet {

/// Planar polynomial vector field A d/dx + B d/dy.
struct PlanarField {
    Poly A{2};
    Poly B{2};
};

enum class SingClass { Saddle, Node, FocusOrCenterLinear, NonElementary, Regular };

std::string to_string(SingClass c);

/// det < 0 => Saddle. Both eigenvalue real parts zero (det = 0, or det > 0
/// with trace = 0) => NonElementary.
struct SingularityReport {
    std::array<Rational, 2> point{Rational(0), Rational(0)};
    Rational det{0};
    Rational trace{0};
    Rational discriminant{0}; // trace^2 - 4 det
    SingClass cls = SingClass::Regular;
    bool elementary() const { return cls == SingClass::Saddle || cls == SingClass::Node ||
                                     (cls == SingClass::FocusOrCenterLinear); }
};

SingularityReport jacobian_classify(const PlanarField& Z, const std::array<Rational, 2>& p);

/// One chart of the point blow-up at `center`: chart 1 maps (u,v) -> (u, u v),
/// chart 2 maps (u,v) -> (u v, v), both after translating the center to 0.
struct BlowUpChart {
    int chart = 1;                   // 1 or 2
    std::array<Rational, 2> center{Rational(0), Rational(0)};
    PolyMap map{2, {Poly(2), Poly(2)}};
    PlanarField pulled_back;         // before dividing by the divisor power
    PlanarField strict;              // pulled_back / divisor^r
    int divisor_exponent = 0;        // r, maximal
    bool dicritical = false;         // strict transform transverse to the divisor
    int divisor_var() const { return chart == 1 ? 0 : 1; }
};

std::pair<BlowUpChart, BlowUpChart> blow_up_point(const PlanarField& Z,
                                                  const std::array<Rational, 2>& p);

struct ResolutionNode {
    PlanarField field;                         // strict transform in this chart
    std::optional<BlowUpChart> chart;          // empty at the root
    int depth = 0;
    std::vector<SingularityReport> singularities; // points this node is responsible for
    std::vector<std::string> flags;
    std::vector<std::unique_ptr<ResolutionNode>> children;
    bool all_elementary = true;    // over this node's own singularity list
    bool only_saddles = true;      // elementary singularities here are all saddles
};

struct ResolutionTree {
    PlanarField input;
    int monomial_alpha = 0; // x^alpha y^beta factored out of the input
    int monomial_beta = 0;
    std::unique_ptr<ResolutionNode> root;
    int depth = 0;
    bool depth_cap_hit = false;
    bool irrational_points = false;
    /// every leaf ends with elementary-only singularities
    bool resolved = false;
    /// every leaf singularity is a saddle (or there are none)
    bool leaves_all_saddles = false;
};

/// Recursively blows up non-elementary singularities. Singular-point discovery
/// is restricted to user-supplied points, axis intersections at the root, and
/// divisor points after blow-ups (rational roots only; irrational divisor
/// singularities are reported, not blown up).
ResolutionTree resolve(const PlanarField& Z, int max_depth,
                       const std::vector<std::array<Rational, 2>>& candidates = {});

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    int n = 64; // n x n cell-centered samples per axis, divisor excluded
};

struct DivergenceMembership {
    enum class Kind { Witness, NumericBound, Fail };
    Kind kind = Kind::Fail;
    Poly f{2}, g{2};        // witness: div Z = f A + g B exactly
    double residual = 0.0;  // least-squares residual when no exact witness
    double K_estimate = 0.0; // grid estimate of max |div Z| / (|A|+|B|)
    std::string reason;
};

/// Solves div Z = f A + g B over unknown coefficients of f, g up to degree
/// maxDeg, exactly. Fail when div Z is nonzero at a known common zero of
/// (A, B) (origin, axis candidates); otherwise falls back to a numeric bound.
DivergenceMembership divergence_membership(const PlanarField& Z, int max_deg);

struct FinalSingularityReport {
    int alpha = 0, beta = 0;       // maximal monomial x^alpha y^beta dividing Z
    PlanarField reduced;           // Z / (x^alpha y^beta)
    DivergenceMembership membership;
    bool tangency_x_ok = true;     // x | reduced.A when alpha != 0
    bool tangency_y_ok = true;     // y | reduced.B when beta != 0
    std::optional<SingularityReport> origin;
    bool identity_checked = false; // (alpha+1) dA~/dx(0) + (beta+1) dB~/dy(0) = 0
    bool identity_ok = false;
    bool saddle_confirmed = false;
    std::vector<std::string> findings;
};

FinalSingularityReport final_singularity_check(const PlanarField& Z, int membership_max_deg = 4);

struct HpCompareResult {
    double k_est = 0.0;
    double K_est = 0.0;
    int samples = 0;
    int skipped = 0; // grid points where du^alpha, du^beta were dependent
};

/// Bi-Lipschitz bounds of the pulled-back Euclidean metric of
///   pi = (u^alpha, g2 + u^beta + h2, g3 + u^beta + h3)
/// against ds^2 = (du^alpha)^2 + (du^beta)^2 over a punctured grid.
/// Preconditions: u^alpha | u^beta, u^alpha | g_i, dg_i ^ d(u^alpha) = 0,
/// u^beta | h_i.
HpCompareResult hp_metric_compare(const std::array<int, 2>& alpha,
                                  const std::array<int, 2>& beta,
                                  const Poly& g2, const Poly& g3,
                                  const Poly& h2, const Poly& h3,
                                  const GridSpec& grid);

} // namespace martinet

#endif
