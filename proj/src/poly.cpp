#include "martinet/poly.hpp"

namespace martinet {

namespace {

void require_same_arity(const Poly& p, const Poly& q) {
    if (p.arity() != q.arity())
        throw std::invalid_argument("Poly: arity mismatch");
}

} // namespace

Poly add(const Poly& p, const Poly& q) {
    require_same_arity(p, q);
    Poly r = p;
    for (const auto& [e, c] : q.terms()) r.add_term(e, c);
    return r;
}

Poly sub(const Poly& p, const Poly& q) {
    require_same_arity(p, q);
    Poly r = p;
    for (const auto& [e, c] : q.terms()) r.add_term(e, -c);
    return r;
}

Poly mul(const Poly& p, const Poly& q) {
    require_same_arity(p, q);
    Poly r(p.arity());
    for (const auto& [ep, cp] : p.terms())
        for (const auto& [eq, cq] : q.terms())
            r.add_term({ep[0] + eq[0], ep[1] + eq[1], ep[2] + eq[2]}, cp * cq);
    return r;
}

Poly neg(const Poly& p) {
    Poly r(p.arity());
    for (const auto& [e, c] : p.terms()) r.add_term(e, -c);
    return r;
}

Poly scale(const Poly& p, const Rational& k) {
    Poly r(p.arity());
    if (k.is_zero()) return r;
    for (const auto& [e, c] : p.terms()) r.add_term(e, c * k);
    return r;
}

Poly arith(const Poly& p, const Poly& q, PolyOp op) {
    switch (op) {
        case PolyOp::Add: return add(p, q);
        case PolyOp::Sub: return sub(p, q);
        case PolyOp::Mul: return mul(p, q);
    }
    throw std::logic_error("arith: bad op");
}

Poly partial(const Poly& p, int var) {
    if (var < 0 || var >= p.arity())
        throw std::out_of_range("partial: variable index out of range");
    Poly r(p.arity());
    for (const auto& [e, c] : p.terms()) {
        if (e[var] == 0) continue;
        Expo d = e;
        d[var] -= 1;
        r.add_term(d, c * Rational(e[var]));
    }
    return r;
}

ExactDivision exact_divide(const Poly& p, const Poly& q) {
    require_same_arity(p, q);
    if (q.is_zero()) throw std::domain_error("exact_divide: division by zero polynomial");
    Poly rem = p;
    Poly quot(p.arity());
    const auto& [lq, cq] = q.leading();
    while (!rem.is_zero()) {
        const auto& [lr, cr] = rem.leading();
        Expo d;
        bool divides = true;
        for (int i = 0; i < 3; ++i) {
            d[i] = lr[i] - lq[i];
            if (d[i] < 0) divides = false;
        }
        if (!divides) return ExactDivision{std::nullopt, rem};
        Rational cd = cr / cq;
        Poly t(p.arity());
        t.add_term(d, cd);
        quot = add(quot, t);
        rem = sub(rem, mul(t, q));
    }
    return ExactDivision{quot, Poly::zero(p.arity())};
}

namespace {

// Horner evaluation: recurse on the highest variable still present.
template <typename T>
T eval_impl(const Poly& p, const std::vector<T>& point, T zero, T one);

template <typename T>
T eval_terms(const std::vector<std::pair<Expo, T>>& terms, const std::vector<T>& point,
             int var, T zero) {
    if (terms.empty()) return zero;
    if (var < 0) {
        T acc = zero;
        for (const auto& [e, c] : terms) acc += c;
        return acc;
    }
    // bucket by exponent of `var`, Horner over descending exponent
    std::map<int, std::vector<std::pair<Expo, T>>> buckets;
    for (auto [e, c] : terms) {
        int k = e[var];
        e[var] = 0;
        buckets[k].push_back({e, c});
    }
    T acc = zero;
    int prev = -1;
    for (auto it = buckets.rbegin(); it != buckets.rend(); ++it) {
        if (prev >= 0)
            for (int i = 0; i < prev - it->first; ++i) acc *= point[var];
        acc += eval_terms(it->second, point, var - 1, zero);
        prev = it->first;
    }
    for (int i = 0; i < prev; ++i) acc *= point[var];
    return acc;
}

} // namespace

Rational eval(const Poly& p, const std::vector<Rational>& point) {
    if (static_cast<int>(point.size()) != p.arity())
        throw std::invalid_argument("eval: point dimension mismatch");
    std::vector<std::pair<Expo, Rational>> terms(p.terms().begin(), p.terms().end());
    return eval_terms(terms, point, p.arity() - 1, Rational(0));
}

double eval(const Poly& p, const std::vector<double>& point) {
    if (static_cast<int>(point.size()) != p.arity())
        throw std::invalid_argument("eval: point dimension mismatch");
    std::vector<std::pair<Expo, double>> terms;
    terms.reserve(p.terms().size());
    for (const auto& [e, c] : p.terms()) terms.push_back({e, c.to_double()});
    return eval_terms(terms, point, p.arity() - 1, 0.0);
}

Poly directional(const PolyVectorField& X, const Poly& f) {
    if (X.arity != f.arity())
        throw std::invalid_argument("directional: arity mismatch");
    Poly r(f.arity());
    for (int i = 0; i < X.arity; ++i)
        r = add(r, mul(X.comp[i], partial(f, i)));
    return r;
}

PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y) {
    if (X.arity != Y.arity)
        throw std::invalid_argument("lie_bracket: arity mismatch");
    std::vector<Poly> comp;
    comp.reserve(X.arity);
    for (int j = 0; j < X.arity; ++j)
        comp.push_back(sub(directional(X, Y.comp[j]), directional(Y, X.comp[j])));
    return PolyVectorField(std::move(comp));
}

Poly divergence(const PolyVectorField& X) {
    Poly r(X.arity);
    for (int i = 0; i < X.arity; ++i)
        r = add(r, partial(X.comp[i], i));
    return r;
}

std::vector<double> eval(const PolyVectorField& X, const std::vector<double>& point) {
    std::vector<double> v(X.arity);
    for (int i = 0; i < X.arity; ++i) v[i] = eval(X.comp[i], point);
    return v;
}

std::vector<Rational> eval(const PolyVectorField& X, const std::vector<Rational>& point) {
    std::vector<Rational> v(X.arity);
    for (int i = 0; i < X.arity; ++i) v[i] = eval(X.comp[i], point);
    return v;
}

Poly pullback(const Poly& p, const PolyMap& sigma) {
    if (p.arity() != sigma.codomain_arity())
        throw std::invalid_argument("pullback: arity does not match codomain");
    const int n = sigma.domain_arity;
    // cache powers of each component as needed
    std::vector<std::vector<Poly>> powers(sigma.comp.size());
    auto power = [&](int i, int k) -> const Poly& {
        auto& tbl = powers[i];
        if (tbl.empty()) tbl.push_back(Poly::constant(n, Rational(1)));
        while (static_cast<int>(tbl.size()) <= k)
            tbl.push_back(mul(tbl.back(), sigma.comp[i]));
        return tbl[k];
    };
    Poly r(n);
    for (const auto& [e, c] : p.terms()) {
        Poly t = Poly::constant(n, c);
        for (int i = 0; i < p.arity(); ++i)
            if (e[i] > 0) t = mul(t, power(i, e[i]));
        r = add(r, t);
    }
    return r;
}

} // namespace martinet
