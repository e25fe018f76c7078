#include "martinet/poly_gcd.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace martinet {

namespace {

// ---- univariate-in-one-variable view with Poly coefficients ----

using UniView = std::map<int, Poly>; // degree in the main var -> coefficient

UniView to_uni(const Poly& p, int k) {
    UniView out;
    for (const auto& [e, c] : p.terms()) {
        Expo r = e;
        int d = r[k];
        r[k] = 0;
        auto it = out.find(d);
        if (it == out.end()) {
            Poly coeff(p.arity());
            coeff.add_term(r, c);
            out.emplace(d, std::move(coeff));
        } else {
            it->second.add_term(r, c);
        }
    }
    return out;
}

int deg_in(const UniView& u) { return u.empty() ? -1 : u.rbegin()->first; }

const Poly& lead_coeff(const UniView& u) { return u.rbegin()->second; }

Poly shift_mul(const Poly& p, int k, int power) {
    Poly r(p.arity());
    for (const auto& [e, c] : p.terms()) {
        Expo d = e;
        d[k] += power;
        r.add_term(d, c);
    }
    return r;
}

int highest_var(const Poly& p) {
    for (int k = p.arity() - 1; k >= 0; --k)
        if (p.depends_on(k)) return k;
    return -1;
}

Poly must_divide(const Poly& a, const Poly& b) {
    auto d = exact_divide(a, b);
    assert(d.ok() && "subresultant division must be exact");
    if (!d.ok()) throw std::logic_error("poly_gcd: inexact subresultant division");
    return *d.quotient;
}

Poly poly_pow(const Poly& base, int e) {
    Poly r = Poly::constant(base.arity(), Rational(1));
    for (int i = 0; i < e; ++i) r = mul(r, base);
    return r;
}

// content w.r.t. variable k: gcd of the k-coefficients
Poly content_in(const Poly& p, int k) {
    Poly c = Poly::zero(p.arity());
    for (const auto& [d, coeff] : to_uni(p, k)) {
        c = poly_gcd(c, coeff);
        if (c.is_constant() && !c.is_zero()) break;
    }
    return c;
}

// pseudo-remainder of A by B in variable k: lc(B)^(degA-degB+1) * A mod B
Poly prem(const Poly& A, const Poly& B, int k) {
    UniView b = to_uni(B, k);
    int dB = deg_in(b);
    Poly lB = lead_coeff(b);
    Poly R = A;
    int e = to_uni(A, k).rbegin()->first - dB + 1;
    for (;;) {
        if (R.is_zero()) break;
        UniView r = to_uni(R, k);
        int dR = deg_in(r);
        if (dR < dB) break;
        Poly lR = lead_coeff(r);
        R = sub(mul(lB, R), shift_mul(mul(lR, B), k, dR - dB));
        --e;
    }
    for (int i = 0; i < e; ++i) R = mul(lB, R);
    return R;
}

Poly one_like(const Poly& p) { return Poly::constant(p.arity(), Rational(1)); }

} // namespace

Poly normalize_unit(const Poly& p) {
    if (p.is_zero()) return p;
    // rational content: gcd of numerators / lcm of denominators
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& [e, c] : p.terms()) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.numerator().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.denominator().get_mpz_t());
    }
    mpq_class content(num_gcd, den_lcm);
    content.canonicalize();
    Rational unit = Rational(content);
    if (p.leading().second.sign() < 0) unit = -unit;
    Poly r(p.arity());
    for (const auto& [e, c] : p.terms()) r.add_term(e, c / unit);
    return r;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.arity() != b.arity()) throw std::invalid_argument("poly_gcd: arity mismatch");
    if (a.is_zero()) return normalize_unit(b);
    if (b.is_zero()) return normalize_unit(a);
    if (a.is_constant() || b.is_constant()) return one_like(a);

    int k = std::max(highest_var(a), highest_var(b));
    Poly ca = content_in(a, k);
    Poly cb = content_in(b, k);
    Poly cont_gcd = poly_gcd(ca, cb);
    Poly A = must_divide(a, ca);
    Poly B = must_divide(b, cb);

    if (to_uni(A, k).rbegin()->first < to_uni(B, k).rbegin()->first) std::swap(A, B);

    // subresultant pseudo-remainder sequence on the primitive parts
    Poly g = one_like(a), h = one_like(a);
    Poly pp_gcd = one_like(a);
    for (;;) {
        UniView ua = to_uni(A, k), ub = to_uni(B, k);
        int dA = deg_in(ua), dB = deg_in(ub);
        if (dB == 0) { pp_gcd = one_like(a); break; }
        int d = dA - dB;
        Poly R = prem(A, B, k);
        if (R.is_zero()) {
            Poly cB = content_in(B, k);
            pp_gcd = must_divide(B, cB);
            break;
        }
        A = B;
        B = must_divide(R, mul(g, poly_pow(h, d)));
        g = lead_coeff(to_uni(A, k));
        if (d == 1) h = g;
        else if (d > 1) h = must_divide(poly_pow(g, d), poly_pow(h, d - 1));
    }
    return normalize_unit(mul(cont_gcd, pp_gcd));
}

namespace {

Poly squarefree_core(const Poly& p) {
    if (p.is_constant()) return Poly::constant(p.arity(), Rational(1));
    int k = highest_var(p);
    Poly cont = content_in(p, k);
    Poly w = must_divide(p, cont);
    // w is primitive in x_k, so every factor of w involves x_k
    Poly g = poly_gcd(w, partial(w, k));
    Poly w_sf = must_divide(w, g);
    return mul(squarefree_core(cont), w_sf);
}

} // namespace

Poly squarefree(const Poly& p) {
    if (p.is_zero()) throw std::domain_error("squarefree: zero input");
    if (p.degree() > kSquarefreeDegreeCap)
        throw DegreeCapError("squarefree: total degree " + std::to_string(p.degree()) +
                             " exceeds cap " + std::to_string(kSquarefreeDegreeCap));
    return normalize_unit(squarefree_core(p));
}

// ---- univariate layer ----

UniPoly uni_trim(UniPoly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}

int uni_degree(const UniPoly& p) { return static_cast<int>(p.size()) - 1; }

UniPoly uni_from_poly(const Poly& p, int var) {
    for (int i = 0; i < p.arity(); ++i)
        if (i != var && p.depends_on(i))
            throw std::invalid_argument("uni_from_poly: polynomial is not univariate in the given variable");
    UniPoly out(static_cast<size_t>(p.degree_in(var)) + 1, Rational(0));
    if (p.is_zero()) return {};
    for (const auto& [e, c] : p.terms()) out[e[var]] = c;
    return uni_trim(std::move(out));
}

Rational uni_eval(const UniPoly& p, const Rational& x) {
    Rational acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

UniPoly uni_derivative(const UniPoly& p) {
    if (p.size() <= 1) return {};
    UniPoly d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rational(static_cast<long>(i));
    return d;
}

namespace {

UniPoly uni_rem(UniPoly a, const UniPoly& b) {
    int db = uni_degree(b);
    while (uni_degree(a) >= db) {
        Rational f = a.back() / b.back();
        int shift = uni_degree(a) - db;
        for (int i = 0; i <= db; ++i) a[i + shift] -= f * b[i];
        a = uni_trim(std::move(a));
    }
    return a;
}

UniPoly uni_monic(UniPoly p) {
    if (p.empty()) return p;
    Rational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

int sign_at_infinity(const UniPoly& p, int direction) {
    // direction +1: t -> +inf, -1: t -> -inf
    if (p.empty()) return 0;
    int s = p.back().sign();
    if (direction < 0 && uni_degree(p) % 2 == 1) s = -s;
    return s;
}

} // namespace

UniPoly uni_gcd(UniPoly a, UniPoly b) {
    a = uni_trim(std::move(a));
    b = uni_trim(std::move(b));
    while (!b.empty()) {
        UniPoly r = uni_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return uni_monic(std::move(a));
}

UniPoly uni_deflate(const UniPoly& p, const Rational& root) {
    // synthetic division by (t - root)
    if (p.size() < 2) throw std::invalid_argument("uni_deflate: degree too small");
    UniPoly q(p.size() - 1);
    Rational carry = p.back();
    for (int i = static_cast<int>(p.size()) - 2; i >= 0; --i) {
        q[i] = carry;
        carry = p[i] + carry * root;
    }
    if (!carry.is_zero()) throw std::invalid_argument("uni_deflate: not a root");
    return uni_trim(std::move(q));
}

int sturm_real_root_count(const UniPoly& p_in) {
    UniPoly p = uni_trim(p_in);
    if (p.empty() || uni_degree(p) == 0) return 0;
    p = uni_monic(std::move(p));
    UniPoly g = uni_gcd(p, uni_derivative(p));
    if (uni_degree(g) > 0) {
        // divide out repeated factors so the chain counts distinct roots
        UniPoly q(p.size() - g.size() + 1, Rational(0));
        UniPoly rem = p;
        int dg = uni_degree(g);
        while (uni_degree(rem) >= dg) {
            Rational f = rem.back() / g.back();
            int shift = uni_degree(rem) - dg;
            q[shift] = f;
            for (int i = 0; i <= dg; ++i) rem[i + shift] -= f * g[i];
            rem = uni_trim(std::move(rem));
        }
        p = uni_trim(std::move(q));
        if (uni_degree(p) <= 0) return 0;
    }
    std::vector<UniPoly> chain{p, uni_derivative(p)};
    while (!chain.back().empty() && uni_degree(chain.back()) > 0) {
        UniPoly r = uni_rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    auto variations = [&](int direction) {
        int v = 0, prev = 0;
        for (const auto& q : chain) {
            int s = sign_at_infinity(q, direction);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++v;
            prev = s;
        }
        return v;
    };
    return variations(-1) - variations(+1);
}

namespace {

// divisors of |z| via trial division; probable-prime cofactors are kept exact
struct DivisorSet {
    std::vector<mpz_class> divisors;
    bool complete = true;
};

DivisorSet divisors_of(mpz_class z) {
    DivisorSet out;
    z = abs(z);
    if (z == 0) { out.divisors = {1}; return out; }
    std::vector<std::pair<mpz_class, int>> factors;
    mpz_class d = 2;
    while (d * d <= z && d < 1000000) {
        if (z % d == 0) {
            int e = 0;
            while (z % d == 0) { z /= d; ++e; }
            factors.push_back({d, e});
        }
        d += (d == 2) ? 1 : 2;
    }
    if (z > 1) {
        factors.push_back({z, 1});
        if (mpz_probab_prime_p(z.get_mpz_t(), 25) == 0) out.complete = false;
    }
    out.divisors.push_back(1);
    for (const auto& [pz, e] : factors) {
        size_t n = out.divisors.size();
        mpz_class pw = 1;
        for (int i = 1; i <= e; ++i) {
            pw *= pz;
            for (size_t j = 0; j < n; ++j) {
                out.divisors.push_back(out.divisors[j] * pw);
                if (out.divisors.size() > 4096) { out.complete = false; return out; }
            }
        }
    }
    return out;
}

} // namespace

UniRootSearch uni_rational_roots(const UniPoly& p_in) {
    UniRootSearch out;
    UniPoly p = uni_trim(p_in);
    if (p.empty() || uni_degree(p) == 0) return out;
    // root at zero
    while (!p.empty() && p.front().is_zero()) {
        if (out.roots.empty() || !(out.roots.back() == Rational(0)))
            out.roots.push_back(Rational(0));
        p.erase(p.begin());
    }
    p = uni_trim(std::move(p));
    if (uni_degree(p) >= 1) {
        // clear denominators to integer coefficients
        mpz_class den_lcm = 1;
        for (const auto& c : p) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.denominator().get_mpz_t());
        std::vector<mpz_class> ic(p.size());
        for (size_t i = 0; i < p.size(); ++i)
            ic[i] = p[i].numerator() * (den_lcm / p[i].denominator());
        DivisorSet num_div = divisors_of(ic.front());
        DivisorSet den_div = divisors_of(ic.back());
        out.complete = num_div.complete && den_div.complete;
        for (const auto& nu : num_div.divisors) {
            for (const auto& de : den_div.divisors) {
                for (int s = -1; s <= 1; s += 2) {
                    mpq_class cand(s * nu, de);
                    cand.canonicalize();
                    Rational r{cand};
                    if (uni_eval(p, r).is_zero()) {
                        if (std::find(out.roots.begin(), out.roots.end(), r) == out.roots.end())
                            out.roots.push_back(r);
                        while (uni_degree(p) >= 1 && uni_eval(p, r).is_zero())
                            p = uni_deflate(p, r);
                    }
                }
            }
            if (uni_degree(p) < 1) break;
        }
    }
    out.irrational_real_roots = sturm_real_root_count(p);
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

} // namespace martinet
