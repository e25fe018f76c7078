#include "martinet/fixtures.hpp"
#include "martinet/poly_parse.hpp"
#include "martinet/reach.hpp"

#include <doctest.h>

#include <cmath>

using namespace martinet;
using fixtures::p3;

TEST_CASE("martinet reachable set: one segment pair") {
    auto spec = fixtures::martinet();
    MartinetData md = martinet_function(spec);
    ReachTree tree = reachable_set(spec, md, {0, 0, 0}, 1.0);
    REQUIRE(tree.vertices.size() == 1);
    CHECK(tree.vertices[0].kind == "root");
    REQUIRE(tree.edges.size() == 2);
    CHECK(tree.total_length == doctest::Approx(2.0).epsilon(1e-6));
    bool plus = false, minus = false;
    for (const auto& e : tree.edges) {
        CHECK(e.termination == "length");
        auto end = e.polyline.back();
        CHECK(std::fabs(end[0]) < 1e-9);
        CHECK(std::fabs(end[2]) < 1e-9);
        if (std::fabs(end[1] - 1.0) < 1e-6) plus = true;
        if (std::fabs(end[1] + 1.0) < 1e-6) minus = true;
        // the edge stays on Sigma = {x1 = 0}
        for (const auto& p : e.polyline) CHECK(std::fabs(p[0]) < 1e-9);
    }
    CHECK(plus);
    CHECK(minus);
}

TEST_CASE("zero budget gives the root only") {
    auto spec = fixtures::martinet();
    MartinetData md = martinet_function(spec);
    ReachTree tree = reachable_set(spec, md, {0, 0, 0}, 0.0);
    CHECK(tree.vertices.size() == 1);
    CHECK(tree.edges.empty());
}

TEST_CASE("x0 off Sigma is rejected") {
    auto spec = fixtures::martinet();
    MartinetData md = martinet_function(spec);
    CHECK_THROWS_AS(reachable_set(spec, md, {1, 0, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("twoplanes: branch at the crossing axis per declared sheets") {
    auto spec = fixtures::twoplanes();
    MartinetData md = martinet_function(spec);
    ReachOptions opts;
    DeclaredCurve gamma;
    gamma.generators = {p3("x1"), p3("x2")};
    gamma.sheet_dirs = {{0, 1, 0}, {0, -1, 0}, {1, 0, 0}, {-1, 0, 0}};
    opts.sigma1tr.push_back(gamma);
    ReachTree tree = reachable_set(spec, md, {1, 0, 0}, 3.0, opts);

    REQUIRE(tree.vertices.size() == 2);
    CHECK(tree.vertices[0].kind == "root");
    CHECK(tree.vertices[1].kind == "sigma1tr");
    // the branch vertex snaps onto the x3-axis
    CHECK(std::fabs(tree.vertices[1].x[0]) < 1e-6);
    CHECK(std::fabs(tree.vertices[1].x[1]) < 1e-6);

    // root pair + three continuations (the fourth sheet retraces the arrival)
    CHECK(tree.edges.size() == 5);
    int to_vertex = 0;
    for (const auto& e : tree.edges)
        if (e.to_vertex == 1) ++to_vertex;
    CHECK(to_vertex == 1);

    // the inbound edge has length about 1 (from x1=1 to the axis)
    double inbound = 0;
    for (const auto& e : tree.edges)
        if (e.to_vertex == 1) inbound = e.length;
    CHECK(inbound == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("unresolved stall becomes a flagged vertex") {
    auto spec = fixtures::twoplanes();
    MartinetData md = martinet_function(spec);
    // no declared curves, no candidates: the trajectory into the axis stalls
    ReachTree tree = reachable_set(spec, md, {1, 0, 0}, 3.0);
    bool flagged = false;
    for (const auto& v : tree.vertices)
        if (v.kind == "flagged") flagged = true;
    CHECK(flagged);
    CHECK(tree.truncated);
}
