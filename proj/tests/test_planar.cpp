#include "martinet/fixtures.hpp"
#include "martinet/planar.hpp"
#include "martinet/poly_parse.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace martinet;
using fixtures::p2;

namespace {

std::array<Rational, 2> origin2{Rational(0), Rational(0)};

PlanarField field(const std::string& a, const std::string& b) {
    return PlanarField{p2(a), p2(b)};
}

} // namespace

TEST_CASE("jacobian classification") {
    auto saddle = jacobian_classify(field("x", "-y"), origin2);
    CHECK(saddle.cls == SingClass::Saddle);
    CHECK(saddle.det == Rational(-1));

    auto center = jacobian_classify(field("-y", "x"), origin2);
    CHECK(center.cls == SingClass::NonElementary);
    CHECK(center.det == Rational(1));
    CHECK(center.trace == Rational(0));

    auto node = jacobian_classify(field("x", "y"), origin2);
    CHECK(node.cls == SingClass::Node);
    CHECK(node.det == Rational(1));
    CHECK(node.trace == Rational(2));

    auto focus = jacobian_classify(field("x - y", "x + y"), origin2);
    CHECK(focus.cls == SingClass::FocusOrCenterLinear);

    auto regular = jacobian_classify(field("1", "y"), origin2);
    CHECK(regular.cls == SingClass::Regular);
}

TEST_CASE("eigenvalue roots reproduce class labels: 500 random matrices") {
    std::mt19937_64 rng(321);
    std::uniform_int_distribution<long> c(-9, 9);
    std::uniform_int_distribution<unsigned long> d(1, 3);
    for (int i = 0; i < 500; ++i) {
        Rational a(c(rng), d(rng)), b(c(rng), d(rng)), e(c(rng), d(rng)), f(c(rng), d(rng));
        Poly A = add(scale(p2("x"), a), scale(p2("y"), b));
        Poly B = add(scale(p2("x"), e), scale(p2("y"), f));
        if (A.is_zero() && B.is_zero()) continue;
        auto rep = jacobian_classify(PlanarField{A, B}, origin2);
        if (rep.cls == SingClass::Regular) continue;
        // roots of lambda^2 - tr lambda + det, discriminant kept exact
        Rational tr = a + f;
        Rational det = a * f - b * e;
        Rational disc = tr * tr - Rational(4) * det;
        if (det.sign() < 0) {
            CHECK(rep.cls == SingClass::Saddle);
            double sq = std::sqrt(disc.to_double());
            double l1 = (tr.to_double() - sq) / 2, l2 = (tr.to_double() + sq) / 2;
            CHECK(l1 * l2 < 0); // real eigenvalues of opposite signs
        } else if (det.is_zero() || tr.is_zero()) {
            CHECK(rep.cls == SingClass::NonElementary);
        } else if (disc.sign() >= 0) {
            CHECK(rep.cls == SingClass::Node);
            double sq = std::sqrt(disc.to_double());
            double l1 = (tr.to_double() - sq) / 2, l2 = (tr.to_double() + sq) / 2;
            CHECK(l1 * l2 >= 0); // real eigenvalues of one sign
        } else {
            CHECK(rep.cls == SingClass::FocusOrCenterLinear);
        }
    }
}

TEST_CASE("blow-up of the radial field") {
    auto [c1, c2] = blow_up_point(field("x", "y"), origin2);
    CHECK(c1.pulled_back.A == p2("x")); // u in chart coordinates
    CHECK(c1.pulled_back.B.is_zero());
    CHECK(c1.divisor_exponent == 1);
    CHECK(c1.strict.A == p2("1"));
    CHECK(c1.strict.B.is_zero());
    CHECK(c1.dicritical);
    CHECK(c2.divisor_exponent == 1);
    CHECK(c2.dicritical);
}

TEST_CASE("blow-up of x d/dx + 2y d/dy") {
    auto [c1, c2] = blow_up_point(field("x", "2*y"), origin2);
    CHECK(c1.strict.A == p2("x"));
    CHECK(c1.strict.B == p2("y"));
    CHECK(c1.divisor_exponent == 0);
    CHECK(!c1.dicritical);
    auto rep = jacobian_classify(c1.strict, origin2);
    CHECK(rep.cls == SingClass::Node);
}

TEST_CASE("blow-up of the degenerate oscillator y d/dx - x^3 d/dy") {
    auto [c1, c2] = blow_up_point(field("y", "-x^3"), origin2);
    CHECK(c1.strict.A == p2("x*y"));
    CHECK(c1.strict.B == p2("-x^2 - y^2"));
    CHECK(c1.divisor_exponent == 0);
    CHECK(!c1.dicritical);
    auto rep = jacobian_classify(c1.strict, origin2);
    CHECK(rep.cls == SingClass::NonElementary);
    CHECK_THROWS_AS(blow_up_point(field("1", "y"), origin2), std::invalid_argument);
}

TEST_CASE("blow-up centered off the origin") {
    PlanarField Z = field("x - 1", "-y - 2"); // saddle at (1, -2)
    std::array<Rational, 2> c{Rational(1), Rational(-2)};
    auto [c1, c2] = blow_up_point(Z, c);
    CHECK(c1.center == c);
    std::vector<Rational> at0{Rational(0), Rational(5)};
    CHECK(eval(c1.map.comp[0], at0) == Rational(1));
    CHECK(eval(c1.map.comp[1], at0) == Rational(-2));
}

TEST_CASE("divisor invariance: non-dicritical strict transforms vanish on the divisor") {
    for (auto Z : {field("x", "2*y"), field("y", "-x^3"), field("x^2 - y^2", "x*y")}) {
        auto [c1, c2] = blow_up_point(Z, origin2);
        for (const auto& chart : {c1, c2}) {
            if (chart.dicritical) continue;
            int dvar = chart.divisor_var();
            const Poly& along = dvar == 0 ? chart.strict.A : chart.strict.B;
            Poly restricted(2);
            for (const auto& [e, coef] : along.terms())
                if (e[dvar] == 0) restricted.add_term(e, coef);
            CHECK(restricted.is_zero());
        }
    }
}

TEST_CASE("chart consistency on the overlap") {
    // push the chart-1 strict transform through (u,v) -> (1/v, uv) and compare
    // directions with the chart-2 strict transform at 50 points per field
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> dist(0.2, 1.5);
    for (auto Z : {field("x", "2*y"), field("y", "-x^3"), field("x^2 - y^2", "x*y"),
                   field("x*y", "y^2 - x^3")}) {
        auto [c1, c2] = blow_up_point(Z, origin2);
        int checked = 0;
        while (checked < 50) {
            double u = dist(rng), v = dist(rng);
            std::vector<double> pc1{u, v};
            double w1a = eval(c1.strict.A, pc1), w1b = eval(c1.strict.B, pc1);
            std::vector<double> pc2{1.0 / v, u * v};
            double w2a = eval(c2.strict.A, pc2), w2b = eval(c2.strict.B, pc2);
            double pa = -1.0 / (v * v) * w1b;        // D tau row 1
            double pb = v * w1a + u * w1b;           // D tau row 2
            double cross = pa * w2b - pb * w2a;
            double scale = std::sqrt((pa * pa + pb * pb) * (w2a * w2a + w2b * w2b));
            if (scale < 1e-12) continue;
            CHECK(std::fabs(cross) <= 1e-9 * scale);
            ++checked;
        }
    }
}

TEST_CASE("resolve: saddle needs no blow-up") {
    ResolutionTree tree = resolve(field("x", "-y"), 8);
    CHECK(tree.depth == 0);
    CHECK(tree.resolved);
    CHECK(tree.leaves_all_saddles);
    REQUIRE(tree.root->singularities.size() == 1);
    CHECK(tree.root->singularities[0].cls == SingClass::Saddle);
}

TEST_CASE("resolve: monomial factor removed first") {
    ResolutionTree tree = resolve(field("x^2*y", "-x*y^2"), 8);
    CHECK(tree.monomial_alpha == 1);
    CHECK(tree.monomial_beta == 1);
    CHECK(tree.depth == 0);
    CHECK(tree.resolved);
    CHECK(tree.leaves_all_saddles);
    REQUIRE(tree.root->singularities.size() == 1);
    CHECK(tree.root->singularities[0].cls == SingClass::Saddle);
}

TEST_CASE("resolve: degenerate oscillator resolves by depth 4") {
    ResolutionTree tree = resolve(field("y", "-x^3"), 4);
    CHECK(tree.resolved);
    CHECK(!tree.depth_cap_hit);
    CHECK(tree.depth >= 2);
    bool found = false;
    std::function<void(const ResolutionNode&)> walk = [&](const ResolutionNode& n) {
        if (n.children.empty() && n.only_saddles && !n.singularities.empty()) found = true;
        for (const auto& c : n.children) walk(*c);
    };
    walk(*tree.root);
    CHECK(found);
}

TEST_CASE("resolve: depth cap flags the tree") {
    ResolutionTree tree = resolve(field("y", "-x^3"), 1);
    CHECK(tree.depth_cap_hit);
    CHECK(!tree.resolved);
}

TEST_CASE("resolve on (monomial)x(saddle) forms terminates at depth 0") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> e(0, 2);
    for (int i = 0; i < 20; ++i) {
        int a = e(rng), b = e(rng);
        Poly mono(2);
        mono.add_term({a, b, 0}, Rational(1));
        PlanarField Z{mul(mono, p2("x")), mul(mono, p2("-y"))};
        ResolutionTree tree = resolve(Z, 8);
        CHECK(tree.depth == 0);
        CHECK(tree.monomial_alpha == a);
        CHECK(tree.monomial_beta == b);
        CHECK(tree.leaves_all_saddles);
    }
}

TEST_CASE("divergence membership: focus2d witness") {
    auto m = divergence_membership(fixtures::focus2d(), 1);
    REQUIRE(m.kind == DivergenceMembership::Kind::Witness);
    CHECK(m.f == p2("-4*y"));
    CHECK(m.g == p2("4*x"));
    PlanarField Z = fixtures::focus2d();
    Poly div = divergence(PolyVectorField({Z.A, Z.B}));
    CHECK(sub(div, add(mul(m.f, Z.A), mul(m.g, Z.B))).is_zero());
}

TEST_CASE("divergence membership: hamiltonian field has witness (0,0)") {
    Poly H = p2("x^2*y - y^3 + x^4");
    PlanarField Z{partial(H, 1), neg(partial(H, 0))};
    auto m = divergence_membership(Z, 2);
    REQUIRE(m.kind == DivergenceMembership::Kind::Witness);
    CHECK(m.f.is_zero());
    CHECK(m.g.is_zero());
}

TEST_CASE("divergence membership: radial field fails at the origin") {
    auto m = divergence_membership(field("x", "y"), 3);
    CHECK(m.kind == DivergenceMembership::Kind::Fail);
}

TEST_CASE("divergence membership: numeric bound fallback") {
    // div = 2x + 2y vanishes at the origin but is not in (x^2, y^2) at low degree
    auto m = divergence_membership(field("x^2", "y^2"), 3);
    CHECK(m.kind == DivergenceMembership::Kind::NumericBound);
    CHECK(m.residual > 1e-6);
    CHECK(m.K_estimate > 10.0);
}

TEST_CASE("witness identity holds whenever a witness is returned") {
    std::mt19937_64 rng(91);
    std::uniform_int_distribution<long> c(-3, 3);
    std::uniform_int_distribution<int> e(0, 2);
    int done = 0;
    while (done < 20) {
        Poly A(2), B(2);
        for (int t = 0; t < 3; ++t) {
            A.add_term({e(rng), e(rng), 0}, Rational(c(rng)));
            B.add_term({e(rng), e(rng), 0}, Rational(c(rng)));
        }
        if (A.is_zero() || B.is_zero()) continue;
        PlanarField Z{A, B};
        auto m = divergence_membership(Z, 4);
        if (m.kind != DivergenceMembership::Kind::Witness) continue;
        Poly div = divergence(PolyVectorField({Z.A, Z.B}));
        CHECK(sub(div, add(mul(m.f, Z.A), mul(m.g, Z.B))).is_zero());
        ++done;
    }
}

TEST_CASE("final singularity check: tangent saddle passes everything") {
    auto rep = final_singularity_check(field("x^2*y", "-x*y^2"));
    CHECK(rep.alpha == 1);
    CHECK(rep.beta == 1);
    CHECK(rep.membership.kind == DivergenceMembership::Kind::Witness);
    CHECK(rep.tangency_x_ok);
    CHECK(rep.tangency_y_ok);
    CHECK(rep.identity_checked);
    CHECK(rep.identity_ok);
    REQUIRE(rep.origin.has_value());
    CHECK(rep.origin->cls == SingClass::Saddle);
    CHECK(rep.saddle_confirmed);
    CHECK(rep.findings.empty());
}

TEST_CASE("final singularity check: hypothesis violations reported") {
    auto rep = final_singularity_check(field("x", "y"));
    CHECK(rep.membership.kind == DivergenceMembership::Kind::Fail);
    REQUIRE(!rep.findings.empty());
    CHECK(rep.findings[0].find("hypothesis (i) violated") != std::string::npos);
    CHECK(!rep.saddle_confirmed);

    auto rep2 = final_singularity_check(field("x^2", "y^2"));
    CHECK(rep2.membership.kind == DivergenceMembership::Kind::NumericBound);
    CHECK(!rep2.saddle_confirmed);
    CHECK(!rep2.identity_checked);
}

TEST_CASE("hp metric: trivial instance is exactly (1, 2)") {
    GridSpec grid;
    grid.n = 64;
    auto res = hp_metric_compare({1, 0}, {1, 1}, Poly(2), Poly(2), Poly(2), Poly(2), grid);
    CHECK(res.k_est == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.K_est == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("hp metric: nontrivial instance stable under refinement") {
    Poly g2 = p2("x^2*y^2"); // (u1 u2)^2
    GridSpec g64;
    g64.n = 64;
    GridSpec g128;
    g128.n = 128;
    auto a = hp_metric_compare({1, 1}, {2, 3}, g2, Poly(2), Poly(2), Poly(2), g64);
    auto b = hp_metric_compare({1, 1}, {2, 3}, g2, Poly(2), Poly(2), Poly(2), g128);
    CHECK(a.k_est > 0);
    CHECK(a.K_est < 1e6);
    CHECK(std::fabs(a.k_est - b.k_est) / b.k_est < 0.05);
    CHECK(std::fabs(a.K_est - b.K_est) / b.K_est < 0.05);
}

TEST_CASE("hp metric: divisibility preconditions enforced") {
    GridSpec grid;
    CHECK_THROWS_AS(hp_metric_compare({1, 1}, {1, 0}, Poly(2), Poly(2), Poly(2), Poly(2), grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(hp_metric_compare({1, 0}, {1, 1}, p2("x*y"), Poly(2), Poly(2), Poly(2), grid),
                    std::invalid_argument);
}
