#include "martinet/poly.hpp"
#include "martinet/poly_parse.hpp"

#include <doctest.h>

#include <random>

using namespace martinet;

namespace {

const std::vector<std::string> V3{"x1", "x2", "x3"};
const std::vector<std::string> V2{"x", "y"};

Poly P3(const std::string& s) { return parse_poly(s, V3); }
Poly P2(const std::string& s) { return parse_poly(s, V2); }

Poly random_poly(std::mt19937_64& rng, int arity, int max_deg, int terms) {
    std::uniform_int_distribution<int> e(0, max_deg);
    std::uniform_int_distribution<long> c(-6, 6);
    std::uniform_int_distribution<unsigned long> d(1, 3);
    Poly p(arity);
    for (int i = 0; i < terms; ++i) {
        Expo expo{0, 0, 0};
        for (int k = 0; k < arity; ++k) expo[k] = e(rng);
        p.add_term(expo, Rational(c(rng), d(rng)));
    }
    return p;
}

PolyVectorField random_field(std::mt19937_64& rng, int arity, int max_deg) {
    std::vector<Poly> comp;
    for (int i = 0; i < arity; ++i) comp.push_back(random_poly(rng, arity, max_deg, 4));
    return PolyVectorField(comp);
}

} // namespace

TEST_CASE("rational basics") {
    Rational a(3, 6);
    CHECK(a.numerator() == 1);
    CHECK(a.denominator() == 2);
    CHECK(Rational::parse("-3/2").str() == "-3/2");
    CHECK(Rational::parse("0.25").str() == "1/4");
    CHECK(Rational::parse("-0.5") == Rational(-1, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("parse collects terms") {
    Poly p = P3("x1^2*x2 - 3/2*x3");
    REQUIRE(p.terms().size() == 2);
    CHECK(p.terms().at({2, 1, 0}) == Rational(1));
    CHECK(p.terms().at({0, 0, 1}) == Rational(-3, 2));
}

TEST_CASE("parse zero") {
    CHECK(P3("0").is_zero());
    CHECK(P3("x1 - x1").is_zero());
}

TEST_CASE("parenthesized exponent is rejected") {
    CHECK_THROWS_AS(P2("(x+y)^2"), ParseError);
    CHECK_THROWS_AS(P2("z"), ParseError);       // unknown variable
    CHECK_THROWS_AS(P2("x**2"), ParseError);    // malformed
    try {
        P2("x + $");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("arith examples") {
    CHECK(mul(P3("x1"), P3("x1")) == P3("x1^2"));
    Poly p = P3("x1^3*x2 - 2*x3");
    CHECK(add(p, P3("0")) == p);
    CHECK(mul(P2("x - y"), P2("x + y")) == P2("x^2 - y^2"));
    CHECK_THROWS_AS(add(P2("x"), P3("x1")), std::invalid_argument);
}

TEST_CASE("partial derivatives") {
    CHECK(partial(P3("x1^2*x2"), 0) == P3("2*x1*x2"));
    CHECK(partial(P3("x1^2*x2"), 2).is_zero());
    CHECK(partial(P3("x2^2 - x3^2"), 1) == P3("2*x2"));
    CHECK_THROWS_AS(partial(P3("x1"), 3), std::out_of_range);
}

TEST_CASE("directional derivative") {
    PolyVectorField X({P3("1"), P3("0"), P3("0")});
    CHECK(directional(X, P3("x1*x2")) == P3("x2"));
    PolyVectorField Y({P3("0"), P3("1"), P3("x1^2")});
    CHECK(directional(Y, P3("x1")).is_zero());
    PolyVectorField saddle({P2("x"), P2("-y")});
    CHECK(directional(saddle, P2("x*y")).is_zero());
}

TEST_CASE("lie bracket examples") {
    PolyVectorField X({P3("1"), P3("0"), P3("0")});
    PolyVectorField Y({P3("0"), P3("1"), P3("x1^2")});
    PolyVectorField B = lie_bracket(X, Y);
    CHECK(B.comp[0].is_zero());
    CHECK(B.comp[1].is_zero());
    CHECK(B.comp[2] == P3("2*x1"));
    PolyVectorField BB = lie_bracket(X, X);
    CHECK(BB.comp[0].is_zero());
    CHECK(BB.comp[2].is_zero());
    PolyVectorField W({P3("0"), P3("0"), P3("2*x1")});
    CHECK(lie_bracket(X, W).comp[2] == P3("2"));
}

TEST_CASE("divergence examples") {
    CHECK(divergence(PolyVectorField({P2("x"), P2("y")})) == P2("2"));
    Poly d = divergence(PolyVectorField({P2("-y + x^3 + x*y^2"), P2("x + x^2*y + y^3")}));
    CHECK(d == P2("4*x^2 + 4*y^2"));
    // Hamiltonian field has zero divergence
    Poly H = P2("x^3*y - 2*x*y^2 + y^4");
    CHECK(divergence(PolyVectorField({partial(H, 1), neg(partial(H, 0))})).is_zero());
}

TEST_CASE("exact divide") {
    auto d = exact_divide(P2("x^2*y"), P2("x"));
    REQUIRE(d.ok());
    CHECK(*d.quotient == P2("x*y"));
    auto nd = exact_divide(P2("x^2 + y"), P2("x"));
    CHECK(!nd.ok());
    CHECK(!nd.remainder.is_zero());
    auto z = exact_divide(P2("0"), P2("x^2 - y"));
    REQUIRE(z.ok());
    CHECK(z.quotient->is_zero());
    CHECK_THROWS_AS(exact_divide(P2("x"), P2("0")), std::domain_error);
}

TEST_CASE("pullback") {
    PolyMap sigma(2, {P2("x"), P2("x*y")});
    CHECK(pullback(P2("x*y"), sigma) == P2("x^2*y"));
    PolyMap id(2, {P2("x"), P2("y")});
    CHECK(pullback(P2("x"), id) == P2("x"));
    PolyMap tau(2, {P2("x*y"), P2("y")});
    CHECK(pullback(P2("x^2 - y^2"), tau) == P2("x^2*y^2 - y^2"));
}

TEST_CASE("eval") {
    CHECK(eval(P3("x1*x2"), std::vector<Rational>{Rational(1), Rational(2), Rational(0)}) ==
          Rational(2));
    Poly p = P3("x1^2*x2 - 3/2*x3 + 7");
    CHECK(eval(p, std::vector<Rational>{Rational(0), Rational(0), Rational(0)}) ==
          p.constant_value());
    CHECK(eval(P2("x^2 + y^2"), std::vector<Rational>{Rational(3), Rational(4)}) == Rational(25));
    CHECK(eval(P2("x^2 + y^2"), std::vector<double>{3.0, 4.0}) == doctest::Approx(25.0));
}

TEST_CASE("ring axioms on random polys") {
    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 500; ++i) {
        Poly a = random_poly(rng, 3, 3, 3);
        Poly b = random_poly(rng, 3, 3, 3);
        Poly c = random_poly(rng, 3, 3, 3);
        CHECK(add(a, b) == add(b, a));
        CHECK(mul(a, mul(b, c)) == mul(mul(a, b), c));
        CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
    }
}

TEST_CASE("mixed partials commute") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 500; ++i) {
        Poly a = random_poly(rng, 3, 4, 5);
        for (int u = 0; u < 3; ++u)
            for (int v = u + 1; v < 3; ++v)
                CHECK(partial(partial(a, u), v) == partial(partial(a, v), u));
    }
}

TEST_CASE("jacobi identity on random cubic fields") {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 100; ++i) {
        PolyVectorField X = random_field(rng, 3, 3);
        PolyVectorField Y = random_field(rng, 3, 3);
        PolyVectorField W = random_field(rng, 3, 3);
        PolyVectorField j1 = lie_bracket(lie_bracket(X, Y), W);
        PolyVectorField j2 = lie_bracket(lie_bracket(Y, W), X);
        PolyVectorField j3 = lie_bracket(lie_bracket(W, X), Y);
        for (int m = 0; m < 3; ++m)
            CHECK(add(add(j1.comp[m], j2.comp[m]), j3.comp[m]).is_zero());
    }
}

TEST_CASE("parse . print round trip") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        Poly a = random_poly(rng, 3, 4, 4);
        std::string s = print_poly(a, V3);
        CHECK(parse_poly(s, V3) == a);
    }
    CHECK(print_poly(P3("0"), V3) == "0");
    CHECK(print_poly(P3("x1^2*x2 - 3/2*x3"), V3) == "x1^2*x2 - 3/2*x3");
}

TEST_CASE("exact_divide inverts multiplication") {
    std::mt19937_64 rng(1234);
    int done = 0;
    while (done < 200) {
        Poly p = random_poly(rng, 2, 3, 3);
        Poly q = random_poly(rng, 2, 3, 3);
        if (q.is_zero()) continue;
        auto d = exact_divide(mul(p, q), q);
        REQUIRE(d.ok());
        CHECK(*d.quotient == p);
        ++done;
    }
}
