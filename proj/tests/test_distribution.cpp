#include "martinet/distribution.hpp"
#include "martinet/fixtures.hpp"
#include "martinet/poly_parse.hpp"

#include <doctest.h>

#include <random>

using namespace martinet;
using fixtures::p3;

namespace {

Rational rr(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<unsigned long> den(1, 4);
    return Rational(num(rng), den(rng));
}

} // namespace

TEST_CASE("martinet fixture h") {
    auto spec = fixtures::martinet();
    MartinetData md = martinet_function(spec);
    CHECK(md.h_raw == p3("-2*x1"));
    CHECK(md.h == p3("x1"));
    CHECK(md.gradient[0] == p3("1"));
    CHECK(md.gradient[1].is_zero());
}

TEST_CASE("heisenberg fixture: unit h, empty Sigma") {
    auto spec = fixtures::heisenberg();
    MartinetData md = martinet_function(spec);
    CHECK(md.h_raw == p3("-1"));
    CHECK(md.h.is_constant());
    CHECK(!md.h.is_zero());
}

TEST_CASE("twoplanes fixture via bracket determinant") {
    auto spec = fixtures::twoplanes();
    MartinetData md = martinet_function(spec);
    CHECK(md.h_raw == p3("2*x1*x2"));
    CHECK(md.h == p3("x1*x2"));
}

TEST_CASE("one-form and pair modes agree on the martinet distribution") {
    MartinetData a = martinet_function(fixtures::martinet());
    MartinetData b = martinet_function(fixtures::martinet_pair());
    CHECK(a.h == b.h); // unit-normalized reductions are canonical
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        std::vector<Rational> p{rr(rng), rr(rng), rr(rng)};
        CHECK(eval(a.h, p) == eval(b.h, p));
    }
}

TEST_CASE("characteristic fields of the fixtures") {
    {
        auto spec = fixtures::martinet();
        MartinetData md = martinet_function(spec);
        PolyVectorField Z = characteristic_field(spec, md);
        CHECK(Z.comp[0].is_zero());
        CHECK(Z.comp[1] == p3("1"));
        CHECK(Z.comp[2] == p3("x1^2"));
    }
    {
        auto spec = fixtures::twoplanes();
        MartinetData md = martinet_function(spec);
        PolyVectorField Z = characteristic_field(spec, md);
        CHECK(Z.comp[0] == p3("-x1"));
        CHECK(Z.comp[1] == p3("x2"));
        CHECK(Z.comp[2] == p3("x1^2*x2^2"));
    }
    {
        auto spec = fixtures::tangential();
        MartinetData md = martinet_function(spec);
        CHECK(md.h == p3("x2^2 - x3^2"));
        PolyVectorField Z = characteristic_field(spec, md);
        CHECK(Z.comp[0] == p3("-2*x2 + 2*x1*x2^2*x3 - 2*x1*x3^3"));
        CHECK(Z.comp[1].is_zero());
        CHECK(Z.comp[2].is_zero());
    }
}

TEST_CASE("Z(h) vanishes identically (tangency to Sigma)") {
    for (auto spec : {fixtures::martinet(), fixtures::twoplanes(), fixtures::tangential()}) {
        MartinetData md = martinet_function(spec);
        PolyVectorField Z = characteristic_field(spec, md);
        CHECK(directional(Z, md.h).is_zero());
    }
}

TEST_CASE("Z(h) vanishes at random Sigma points per fixture") {
    std::mt19937_64 rng(2024);
    {
        auto spec = fixtures::martinet();
        MartinetData md = martinet_function(spec);
        Poly zh = directional(characteristic_field(spec, md), md.h);
        for (int i = 0; i < 100; ++i) {
            std::vector<Rational> p{Rational(0), rr(rng), rr(rng)};
            REQUIRE(eval(md.h, p).is_zero());
            CHECK(eval(zh, p).is_zero());
        }
    }
    {
        auto spec = fixtures::twoplanes();
        MartinetData md = martinet_function(spec);
        Poly zh = directional(characteristic_field(spec, md), md.h);
        for (int i = 0; i < 50; ++i) {
            std::vector<Rational> p{Rational(0), rr(rng), rr(rng)};
            std::vector<Rational> q{rr(rng), Rational(0), rr(rng)};
            CHECK(eval(zh, p).is_zero());
            CHECK(eval(zh, q).is_zero());
        }
    }
    {
        auto spec = fixtures::tangential();
        MartinetData md = martinet_function(spec);
        Poly zh = directional(characteristic_field(spec, md), md.h);
        for (int i = 0; i < 100; ++i) {
            Rational a = rr(rng), b = rr(rng);
            std::vector<Rational> p{a, b, b};
            REQUIRE(eval(md.h, p).is_zero());
            CHECK(eval(zh, p).is_zero());
        }
    }
}

TEST_CASE("tangency locus per fixture") {
    {
        auto spec = fixtures::martinet();
        MartinetData md = martinet_function(spec);
        TangencyLocus tl = tangency_locus(spec, md);
        CHECK(tl.tangency_provably_empty);  // X1(h) = 1
        CHECK(tl.singular_provably_empty);  // dh/dx1 = 1
    }
    {
        auto spec = fixtures::twoplanes();
        MartinetData md = martinet_function(spec);
        std::vector<std::vector<Rational>> pts{{Rational(0), Rational(0), Rational(5)},
                                               {Rational(1), Rational(0), Rational(0)}};
        TangencyLocus tl = tangency_locus(spec, md, pts);
        CHECK(!tl.singular_provably_empty);
        CHECK(tl.candidates[0].on_singular_system); // x3-axis = Sing(Sigma)
        CHECK(tl.candidates[0].on_tangency_system);
        CHECK(!tl.candidates[1].on_singular_system);
    }
    {
        auto spec = fixtures::tangential();
        MartinetData md = martinet_function(spec);
        std::vector<std::vector<Rational>> pts{{Rational(7), Rational(0), Rational(0)}};
        TangencyLocus tl = tangency_locus(spec, md, pts);
        CHECK(tl.candidates[0].on_singular_system); // the x1-axis
    }
}

TEST_CASE("classify_point examples") {
    {
        auto spec = fixtures::martinet();
        MartinetData md = martinet_function(spec);
        auto d = classify_point(spec, md, {Rational(0), Rational(1), Rational(0)});
        CHECK(d.cls == PointClass::Sigma2);
        auto off = classify_point(spec, md, {Rational(1), Rational(0), Rational(0)});
        CHECK(off.cls == PointClass::OffSigma);
    }
    {
        auto spec = fixtures::twoplanes();
        MartinetData md = martinet_function(spec);
        std::array<Rational, 3> T{Rational(0), Rational(0), Rational(1)};
        auto d = classify_point(spec, md, {Rational(0), Rational(0), Rational(1)}, T);
        CHECK(d.cls == PointClass::Sigma1_tr);
        auto noT = classify_point(spec, md, {Rational(0), Rational(0), Rational(1)});
        CHECK(noT.cls == PointClass::Sigma0_candidate);
    }
    {
        auto spec = fixtures::tangential();
        MartinetData md = martinet_function(spec);
        std::array<Rational, 3> T{Rational(1), Rational(0), Rational(0)};
        auto d = classify_point(spec, md, {Rational(1), Rational(0), Rational(0)}, T);
        CHECK(d.cls == PointClass::Sigma1_tan);
    }
}

TEST_CASE("classify_point is invariant under scaling delta") {
    auto spec = fixtures::martinet();
    DistributionSpec scaled = DistributionSpec::one_form(
        "martinet_scaled", {scale(spec.delta[0], Rational(7)), scale(spec.delta[1], Rational(7)),
                            scale(spec.delta[2], Rational(7))});
    MartinetData md1 = martinet_function(spec);
    MartinetData md2 = martinet_function(scaled);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        std::vector<Rational> p{rr(rng), rr(rng), rr(rng)};
        std::optional<std::array<Rational, 3>> T;
        CHECK(classify_point(spec, md1, p, T).cls == classify_point(scaled, md2, p, T).cls);
    }
    for (int i = 0; i < 100; ++i) {
        std::vector<Rational> p{Rational(0), rr(rng), rr(rng)};
        CHECK(classify_point(spec, md1, p).cls == PointClass::Sigma2);
    }
}

TEST_CASE("hormander depths") {
    std::vector<Rational> origin{Rational(0), Rational(0), Rational(0)};
    {
        auto r = hormander_check(fixtures::martinet(), origin, 6);
        CHECK(r.rank == 3);
        CHECK(r.achieved_depth == 3);
    }
    {
        auto r = hormander_check(fixtures::heisenberg(), origin, 6);
        CHECK(r.rank == 3);
        CHECK(r.achieved_depth == 2);
    }
    {
        auto r = hormander_check(fixtures::tangential(), origin, 6);
        CHECK(r.rank == 3);
        CHECK(r.achieved_depth == 4);
    }
    CHECK_THROWS_AS(hormander_check(fixtures::martinet(), origin, 7), std::invalid_argument);
}

TEST_CASE("one-form conversion failure without unit coefficient") {
    DistributionSpec bad = DistributionSpec::one_form("bad", {p3("x1"), p3("x2"), p3("x3")});
    CHECK_THROWS_AS(generating_pair(bad), std::domain_error);
}
