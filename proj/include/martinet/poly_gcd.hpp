#ifndef MARTINET_POLY_GCD_HPP
#define MARTINET_POLY_GCD_HPP

#include "martinet/poly.hpp"

#include <stdexcept>
#include <vector>

namespace martinet {

/// Raised when a squarefree/gcd request exceeds the supported total degree.
class DegreeCapError : public std::runtime_error {
public:
    explicit DegreeCapError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kSquarefreeDegreeCap = 12;

/// Multiplies by the unique positive rational giving coprime integer
/// coefficients with a positive graded-lex leading coefficient.
Poly normalize_unit(const Poly& p);

/// Multivariate gcd over Q by recursive subresultant pseudo-remainder
/// sequences; result is unit-normalized. gcd(0, q) = normalize(q).
Poly poly_gcd(const Poly& a, const Poly& b);

/// Squarefree part of p (repeated factors removed, unit-normalized).
/// Throws DegreeCapError above total degree kSquarefreeDegreeCap and
/// std::domain_error on zero input.
Poly squarefree(const Poly& p);

// -- univariate layer (used by divisor-point discovery) --

/// Dense univariate polynomial, coefficient of t^i at index i.
using UniPoly = std::vector<Rational>;

UniPoly uni_from_poly(const Poly& p, int var);
UniPoly uni_trim(UniPoly p);
int uni_degree(const UniPoly& p); // -1 for zero
Rational uni_eval(const UniPoly& p, const Rational& x);
UniPoly uni_derivative(const UniPoly& p);
UniPoly uni_gcd(UniPoly a, UniPoly b); // monic result
/// Deflates by (t - root); the division must be exact.
UniPoly uni_deflate(const UniPoly& p, const Rational& root);

/// Number of distinct real roots of p (Sturm's theorem over the whole line).
int sturm_real_root_count(const UniPoly& p);

struct UniRootSearch {
    std::vector<Rational> roots;  // distinct rational roots found
    bool complete = true;         // false when factor enumeration hit its cap
    int irrational_real_roots = 0; // distinct real roots that are not rational
};

/// Finds all rational roots (exact) and counts remaining real roots by Sturm.
/// Constant-term factor enumeration is capped; `complete` reports whether the
/// enumeration was exhaustive.
UniRootSearch uni_rational_roots(const UniPoly& p);

} // namespace martinet

#endif
