#include "martinet/fixtures.hpp"
#include "martinet/lift.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace martinet;

TEST_CASE("martinet abnormal lift along the singular line") {
    auto spec = fixtures::martinet();
    Control u = Control::constant({0.0, 1.0}, 8);
    Lift lift = abnormal_lift(spec, u, {0, 0, 0}, {0, 0, 1});
    CHECK(lift.singular);
    CHECK(lift.max_pX1 < 1e-10);
    CHECK(lift.max_pX2 < 1e-10);
    for (double n : lift.p_norm) CHECK(n == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lift.gamma.back()[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lift.length == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("martinet lift along x1 is not singular") {
    auto spec = fixtures::martinet();
    Control u = Control::constant({1.0, 0.0}, 8);
    Lift lift = abnormal_lift(spec, u, {0, 0, 0}, {0, 0, 1});
    CHECK(!lift.singular);
    // p . X2 = p3 x1^2 = t^2 along the path
    CHECK(lift.max_pX2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(lift.max_pX1 < 1e-10);
}

TEST_CASE("zero control gives a constant lift") {
    auto spec = fixtures::martinet();
    Control u = Control::constant({0.0, 0.0}, 4);
    Lift lift = abnormal_lift(spec, u, {0, 0, 0}, {0, 0, 1});
    CHECK(lift.length == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(lift.max_p_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lift.singular);
}

TEST_CASE("lift preconditions") {
    auto spec = fixtures::martinet();
    Control u = Control::constant({0.0, 1.0}, 4);
    CHECK_THROWS_AS(abnormal_lift(spec, u, {0, 0, 0}, {1, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(abnormal_lift(spec, u, {0, 0, 0}, {0, 0, 2}), std::invalid_argument);
}

TEST_CASE("gronwall bound on random bounded controls") {
    auto spec = fixtures::martinet();
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Control u;
        for (int seg = 0; seg < 8; ++seg) u.u.push_back({dist(rng), dist(rng)});
        Lift lift = abnormal_lift(spec, u, {0, 0, 0}, {0, 0, 1});
        CHECK(lift.max_p_norm <= lift.gronwall_bound * (1 + 1e-9));
    }
}

TEST_CASE("stokes action is preserved across sections") {
    auto spec = fixtures::martinet();
    std::vector<Section> sections{
        Section::plane3d({0, 1, 0}, {0, 1, 0}, {0, 0, 1}),
        Section::plane3d({0, 2, 0}, {0, 1, 0}, {0, 0, 1}),
        Section::plane3d({0, 3, 0}, {0, 1, 0}, {0, 0, 1})};
    StokesResult res = stokes_action(spec, {0, 0, 0}, {0, 0, 1}, sections);
    REQUIRE(res.I.size() == 4);
    for (double v : res.I) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(res.rel_stdev < 1e-6);

    // linearity: scaling the covector scales every action value
    StokesResult scaled = stokes_action(spec, {0, 0, 0}, {0, 0, 1}, sections, 41, 1e-10, 2.5);
    for (size_t k = 0; k < scaled.I.size(); ++k)
        CHECK(scaled.I[k] == doctest::Approx(2.5 * res.I[k]).epsilon(1e-8));
}

TEST_CASE("endpoint rank detects the singular abnormal control") {
    auto spec = fixtures::martinet();
    {
        EndpointRank er = endpoint_rank(spec, {0, 0, 0}, Control::constant({0, 1}, 16));
        CHECK(er.rank == 2);
        CHECK(er.sigma[2] / er.sigma[0] < 1e-6);
        CHECK(er.endpoint[1] == doctest::Approx(1.0).epsilon(1e-9));
    }
    {
        EndpointRank er = endpoint_rank(spec, {0, 0, 0}, Control::constant({1, 1}, 16));
        CHECK(er.rank == 3);
        CHECK(er.sigma[2] / er.sigma[0] > 1e-3);
    }
    {
        EndpointRank er = endpoint_rank(spec, {0, 0, 0}, Control::constant({0, 0}, 16));
        CHECK(er.rank == 2);
        CHECK(er.sigma[2] / er.sigma[0] < 1e-6);
    }
    CHECK_THROWS_AS(endpoint_rank(spec, {0, 0, 0}, Control::constant({0, 1}, 65)),
                    std::invalid_argument);
}
