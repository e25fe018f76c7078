#ifndef MARTINET_DISTRIBUTION_HPP
#define MARTINET_DISTRIBUTION_HPP

#include "martinet/poly.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace martinet {

/// Rank-2 distribution on R^3: either a polynomial 1-form delta = c1 dx1 +
/// c2 dx2 + c3 dx3, or a pair of polynomial vector fields (X1, X2).
struct DistributionSpec {
    enum class Mode { OneForm, Pair };
    Mode mode = Mode::OneForm;
    std::string name;
    std::array<Poly, 3> delta{Poly(3), Poly(3), Poly(3)}; // OneForm mode
    PolyVectorField X1, X2;                               // Pair mode

    static DistributionSpec one_form(std::string name, std::array<Poly, 3> coeffs);
    static DistributionSpec pair(std::string name, PolyVectorField X1, PolyVectorField X2);
};

/// h_raw is the delta ^ d(delta) coefficient (OneForm) or det[X1|X2|[X1,X2]]
/// (Pair); h is its squarefree, unit-normalized reduction.
struct MartinetData {
    Poly h_raw{3};
    Poly h{3};
    std::array<Poly, 3> gradient{Poly(3), Poly(3), Poly(3)};
};

MartinetData martinet_function(const DistributionSpec& spec);

/// Generating pair for the distribution. Identity in Pair mode; in OneForm
/// mode solves delta(X) = 0 on coordinate fields, which requires some delta
/// coefficient to be a nonzero constant (unit).
std::pair<PolyVectorField, PolyVectorField> generating_pair(const DistributionSpec& spec);

/// The annihilating 1-form: delta itself in OneForm mode, X1 x X2 in Pair mode.
std::array<Poly, 3> annihilator_form(const DistributionSpec& spec);

/// Characteristic field Z = X1(h) X2 - X2(h) X1. Tangent to {h = 0}; in fact
/// Z(h) == 0 identically by antisymmetry.
PolyVectorField characteristic_field(const DistributionSpec& spec, const MartinetData& md);

/// Generators of the tangency/singularity locus S inside Sigma.
struct TangencyLocus {
    std::vector<Poly> tangency_system;  // {h, X1(h), X2(h)}
    std::vector<Poly> singular_system;  // {h, dh/dx1, dh/dx2, dh/dx3}
    bool tangency_provably_empty = false;  // some generator is a nonzero constant
    bool singular_provably_empty = false;
    struct CandidateReport {
        std::vector<Rational> point;
        bool on_tangency_system = false;
        bool on_singular_system = false;
    };
    std::vector<CandidateReport> candidates;
};

TangencyLocus tangency_locus(const DistributionSpec& spec, const MartinetData& md,
                             const std::vector<std::vector<Rational>>& candidate_points = {});

enum class PointClass { OffSigma, Sigma2, Sigma1_tr, Sigma1_tan, Sigma0_candidate };

std::string to_string(PointClass c);

struct PointDiagnostics {
    PointClass cls = PointClass::Sigma0_candidate;
    Rational h_value{0};
    std::array<Rational, 3> grad_h{Rational(0), Rational(0), Rational(0)};
    Rational X1h{0}, X2h{0};
    std::array<Rational, 3> Z_value{Rational(0), Rational(0), Rational(0)};
    std::optional<Rational> delta_of_tangent;
};

PointDiagnostics classify_point(const DistributionSpec& spec, const MartinetData& md,
                                const std::vector<Rational>& point,
                                const std::optional<std::array<Rational, 3>>& stratum_tangent = {});

struct HormanderResult {
    int rank = 0;
    int achieved_depth = 0; // bracket length at which the rank was reached
};

/// Rank at `point` of iterated brackets of the generating pair up to the given
/// bracket length (depth <= 6); short-circuits once rank 3 is reached.
HormanderResult hormander_check(const DistributionSpec& spec,
                                const std::vector<Rational>& point, int depth);

} // namespace martinet

#endif
