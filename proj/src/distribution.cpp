#include "martinet/distribution.hpp"

#include "martinet/poly_gcd.hpp"

#include <stdexcept>

namespace martinet {

DistributionSpec DistributionSpec::one_form(std::string name, std::array<Poly, 3> coeffs) {
    DistributionSpec s;
    s.mode = Mode::OneForm;
    s.name = std::move(name);
    s.delta = std::move(coeffs);
    for (const auto& c : s.delta)
        if (c.arity() != 3) throw std::invalid_argument("DistributionSpec: delta coefficients must have arity 3");
    return s;
}

DistributionSpec DistributionSpec::pair(std::string name, PolyVectorField X1, PolyVectorField X2) {
    DistributionSpec s;
    s.mode = Mode::Pair;
    s.name = std::move(name);
    if (X1.arity != 3 || X2.arity != 3)
        throw std::invalid_argument("DistributionSpec: pair fields must have arity 3");
    s.X1 = std::move(X1);
    s.X2 = std::move(X2);
    return s;
}

namespace {

Poly det3(const std::array<std::array<Poly, 3>, 3>& m) {
    // columns m[0], m[1], m[2]
    Poly r(3);
    r = add(r, mul(m[0][0], sub(mul(m[1][1], m[2][2]), mul(m[1][2], m[2][1]))));
    r = sub(r, mul(m[1][0], sub(mul(m[0][1], m[2][2]), mul(m[0][2], m[2][1]))));
    r = add(r, mul(m[2][0], sub(mul(m[0][1], m[1][2]), mul(m[0][2], m[1][1]))));
    return r;
}

} // namespace

MartinetData martinet_function(const DistributionSpec& spec) {
    MartinetData md;
    if (spec.mode == DistributionSpec::Mode::OneForm) {
        const auto& c = spec.delta;
        // delta ^ d(delta) = <c, curl c> dx1^dx2^dx3
        Poly curl1 = sub(partial(c[2], 1), partial(c[1], 2));
        Poly curl2 = sub(partial(c[0], 2), partial(c[2], 0));
        Poly curl3 = sub(partial(c[1], 0), partial(c[0], 1));
        md.h_raw = add(add(mul(c[0], curl1), mul(c[1], curl2)), mul(c[2], curl3));
    } else {
        PolyVectorField bracket = lie_bracket(spec.X1, spec.X2);
        std::array<std::array<Poly, 3>, 3> cols{
            std::array<Poly, 3>{spec.X1.comp[0], spec.X1.comp[1], spec.X1.comp[2]},
            std::array<Poly, 3>{spec.X2.comp[0], spec.X2.comp[1], spec.X2.comp[2]},
            std::array<Poly, 3>{bracket.comp[0], bracket.comp[1], bracket.comp[2]}};
        md.h_raw = det3(cols);
    }
    if (md.h_raw.is_zero())
        throw std::domain_error("martinet_function: delta ^ d(delta) vanishes identically "
                                "(distribution is integrable, no Martinet surface)");
    md.h = squarefree(md.h_raw);
    for (int i = 0; i < 3; ++i) md.gradient[i] = partial(md.h, i);
    return md;
}

std::pair<PolyVectorField, PolyVectorField> generating_pair(const DistributionSpec& spec) {
    if (spec.mode == DistributionSpec::Mode::Pair) return {spec.X1, spec.X2};
    const auto& c = spec.delta;
    int unit = -1;
    for (int i = 0; i < 3; ++i)
        if (c[i].is_constant() && !c[i].is_zero()) { unit = i; break; }
    if (unit < 0)
        throw std::domain_error("generating_pair: no delta coefficient is a nonzero constant; "
                                "cannot solve delta(X)=0 on coordinate fields");
    Rational cu = c[unit].constant_value();
    std::vector<PolyVectorField> out;
    for (int j = 0; j < 3; ++j) {
        if (j == unit) continue;
        std::vector<Poly> comp{Poly::zero(3), Poly::zero(3), Poly::zero(3)};
        comp[j] = Poly::constant(3, Rational(1));
        comp[unit] = scale(c[j], Rational(-1) / cu);
        out.push_back(PolyVectorField(std::move(comp)));
    }
    return {out[0], out[1]};
}

std::array<Poly, 3> annihilator_form(const DistributionSpec& spec) {
    if (spec.mode == DistributionSpec::Mode::OneForm) return spec.delta;
    const auto& a = spec.X1.comp;
    const auto& b = spec.X2.comp;
    return {sub(mul(a[1], b[2]), mul(a[2], b[1])),
            sub(mul(a[2], b[0]), mul(a[0], b[2])),
            sub(mul(a[0], b[1]), mul(a[1], b[0]))};
}

PolyVectorField characteristic_field(const DistributionSpec& spec, const MartinetData& md) {
    auto [X1, X2] = generating_pair(spec);
    Poly x1h = directional(X1, md.h);
    Poly x2h = directional(X2, md.h);
    std::vector<Poly> comp;
    comp.reserve(3);
    for (int i = 0; i < 3; ++i)
        comp.push_back(sub(mul(x1h, X2.comp[i]), mul(x2h, X1.comp[i])));
    return PolyVectorField(std::move(comp));
}

TangencyLocus tangency_locus(const DistributionSpec& spec, const MartinetData& md,
                             const std::vector<std::vector<Rational>>& candidate_points) {
    auto [X1, X2] = generating_pair(spec);
    TangencyLocus out;
    out.tangency_system = {md.h, directional(X1, md.h), directional(X2, md.h)};
    out.singular_system = {md.h, md.gradient[0], md.gradient[1], md.gradient[2]};
    auto provably_empty = [](const std::vector<Poly>& sys) {
        for (const auto& p : sys)
            if (p.is_constant() && !p.is_zero()) return true;
        return false;
    };
    out.tangency_provably_empty = provably_empty(out.tangency_system);
    out.singular_provably_empty = provably_empty(out.singular_system);
    for (const auto& pt : candidate_points) {
        TangencyLocus::CandidateReport rep;
        rep.point = pt;
        auto vanishes = [&](const std::vector<Poly>& sys) {
            for (const auto& p : sys)
                if (!eval(p, pt).is_zero()) return false;
            return true;
        };
        rep.on_tangency_system = vanishes(out.tangency_system);
        rep.on_singular_system = vanishes(out.singular_system);
        out.candidates.push_back(std::move(rep));
    }
    return out;
}

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::OffSigma: return "OffSigma";
        case PointClass::Sigma2: return "Sigma2";
        case PointClass::Sigma1_tr: return "Sigma1_tr";
        case PointClass::Sigma1_tan: return "Sigma1_tan";
        case PointClass::Sigma0_candidate: return "Sigma0_candidate";
    }
    return "?";
}

PointDiagnostics classify_point(const DistributionSpec& spec, const MartinetData& md,
                                const std::vector<Rational>& point,
                                const std::optional<std::array<Rational, 3>>& stratum_tangent) {
    if (point.size() != 3) throw std::invalid_argument("classify_point: need a 3-dimensional point");
    PointDiagnostics d;
    d.h_value = eval(md.h, point);
    for (int i = 0; i < 3; ++i) d.grad_h[i] = eval(md.gradient[i], point);
    auto [X1, X2] = generating_pair(spec);
    d.X1h = eval(directional(X1, md.h), point);
    d.X2h = eval(directional(X2, md.h), point);
    PolyVectorField Z = characteristic_field(spec, md);
    auto zv = eval(Z, point);
    for (int i = 0; i < 3; ++i) d.Z_value[i] = zv[i];

    if (!d.h_value.is_zero()) {
        d.cls = PointClass::OffSigma;
        return d;
    }
    bool grad_nonzero = !(d.grad_h[0].is_zero() && d.grad_h[1].is_zero() && d.grad_h[2].is_zero());
    bool xh_nonzero = !(d.X1h.is_zero() && d.X2h.is_zero());
    if (grad_nonzero && xh_nonzero) {
        d.cls = PointClass::Sigma2;
        return d;
    }
    // p lies in S; stratum dimension needs a user-supplied tangent direction
    if (stratum_tangent) {
        auto ann = annihilator_form(spec);
        Rational dt(0);
        for (int i = 0; i < 3; ++i) dt += eval(ann[i], point) * (*stratum_tangent)[i];
        d.delta_of_tangent = dt;
        d.cls = dt.is_zero() ? PointClass::Sigma1_tan : PointClass::Sigma1_tr;
        return d;
    }
    d.cls = PointClass::Sigma0_candidate;
    return d;
}

namespace {

int rational_rank3(const std::vector<std::array<Rational, 3>>& rows) {
    std::vector<std::array<Rational, 3>> m = rows;
    int rank = 0;
    for (int col = 0; col < 3 && rank < static_cast<int>(m.size()); ++col) {
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(m.size()); ++r)
            if (!m[r][col].is_zero()) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = 0; r < static_cast<int>(m.size()); ++r) {
            if (r == rank || m[r][col].is_zero()) continue;
            Rational f = m[r][col] / m[rank][col];
            for (int c = 0; c < 3; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

} // namespace

HormanderResult hormander_check(const DistributionSpec& spec,
                                const std::vector<Rational>& point, int depth) {
    if (depth < 1 || depth > 6)
        throw std::invalid_argument("hormander_check: depth must be in 1..6");
    auto [X1, X2] = generating_pair(spec);
    std::vector<PolyVectorField> current{X1, X2};
    std::vector<std::array<Rational, 3>> vectors;
    HormanderResult res;
    for (int level = 1; level <= depth; ++level) {
        if (level > 1) {
            std::vector<PolyVectorField> next;
            next.reserve(current.size() * 2);
            for (const auto& W : current) {
                next.push_back(lie_bracket(X1, W));
                next.push_back(lie_bracket(X2, W));
            }
            current = std::move(next);
        }
        for (const auto& W : current) {
            auto v = eval(W, point);
            vectors.push_back({v[0], v[1], v[2]});
        }
        int rank = rational_rank3(vectors);
        if (rank > res.rank) {
            res.rank = rank;
            res.achieved_depth = level;
        }
        if (res.rank == 3) return res;
    }
    return res;
}

} // namespace martinet
