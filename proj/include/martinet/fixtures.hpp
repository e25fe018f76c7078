#ifndef MARTINET_FIXTURES_HPP
#define MARTINET_FIXTURES_HPP

#include "martinet/distribution.hpp"
#include "martinet/planar.hpp"
#include "martinet/poly_parse.hpp"

namespace martinet::fixtures {

inline Poly p3(const std::string& s) { return parse_poly(s, {"x1", "x2", "x3"}); }
inline Poly p2(const std::string& s) { return parse_poly(s, {"x", "y"}); }

/// delta = dx3 - x1^2 dx2 (A = x1^2); Sigma = {x1 = 0}.
inline DistributionSpec martinet() {
    return DistributionSpec::one_form("martinet", {p3("0"), p3("-x1^2"), p3("1")});
}

inline DistributionSpec martinet_pair() {
    return DistributionSpec::pair(
        "martinet_pair",
        PolyVectorField({p3("1"), p3("0"), p3("0")}),
        PolyVectorField({p3("0"), p3("1"), p3("x1^2")}));
}

/// delta = dx3 - (x1 dx2 - x2 dx1)/2; h is a unit, Sigma empty.
inline DistributionSpec heisenberg() {
    return DistributionSpec::one_form("heisenberg", {p3("1/2*x2"), p3("-1/2*x1"), p3("1")});
}

/// A = x1^2*x2; Sigma = {x1*x2 = 0}, two sheets crossing along the x3-axis.
inline DistributionSpec twoplanes() {
    return DistributionSpec::pair(
        "twoplanes",
        PolyVectorField({p3("1"), p3("0"), p3("0")}),
        PolyVectorField({p3("0"), p3("1"), p3("x1^2*x2")}));
}

/// A = x1*(x2^2 - x3^2); Sigma = {x2^2 = x3^2} with the x1-axis tangent to Delta.
inline DistributionSpec tangential() {
    return DistributionSpec::pair(
        "tangential",
        PolyVectorField({p3("1"), p3("0"), p3("0")}),
        PolyVectorField({p3("0"), p3("1"), p3("x1*x2^2 - x1*x3^2")}));
}

/// Planar focus (-y + x(x^2+y^2)) d/dx + (x + y(x^2+y^2)) d/dy.
inline PlanarField focus2d() {
    return PlanarField{p2("-y + x^3 + x*y^2"), p2("x + x^2*y + y^3")};
}

inline PlanarField focus2d_reversed() {
    return PlanarField{p2("y - x^3 - x*y^2"), p2("-x - x^2*y - y^3")};
}

} // namespace martinet::fixtures

#endif
