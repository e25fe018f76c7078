#include "martinet/planar.hpp"

#include "martinet/poly_gcd.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace martinet {

std::string to_string(SingClass c) {
    switch (c) {
        case SingClass::Saddle: return "Saddle";
        case SingClass::Node: return "Node";
        case SingClass::FocusOrCenterLinear: return "FocusOrCenterLinear";
        case SingClass::NonElementary: return "NonElementary";
        case SingClass::Regular: return "Regular";
    }
    return "?";
}

SingularityReport jacobian_classify(const PlanarField& Z, const std::array<Rational, 2>& p) {
    SingularityReport rep;
    rep.point = p;
    std::vector<Rational> pt{p[0], p[1]};
    Rational a = eval(Z.A, pt), b = eval(Z.B, pt);
    if (!a.is_zero() || !b.is_zero()) {
        rep.cls = SingClass::Regular;
        return rep;
    }
    Rational ax = eval(partial(Z.A, 0), pt), ay = eval(partial(Z.A, 1), pt);
    Rational bx = eval(partial(Z.B, 0), pt), by = eval(partial(Z.B, 1), pt);
    rep.det = ax * by - ay * bx;
    rep.trace = ax + by;
    rep.discriminant = rep.trace * rep.trace - Rational(4) * rep.det;
    if (rep.det.sign() < 0) rep.cls = SingClass::Saddle;
    else if (rep.det.is_zero()) rep.cls = SingClass::NonElementary;
    else if (rep.trace.is_zero()) rep.cls = SingClass::NonElementary; // center-type
    else if (rep.discriminant.sign() >= 0) rep.cls = SingClass::Node;
    else rep.cls = SingClass::FocusOrCenterLinear;
    return rep;
}

namespace {

Poly translate(const Poly& p, const std::array<Rational, 2>& c) {
    if (c[0].is_zero() && c[1].is_zero()) return p;
    Poly x = add(Poly::variable(2, 0), Poly::constant(2, c[0]));
    Poly y = add(Poly::variable(2, 1), Poly::constant(2, c[1]));
    return pullback(p, PolyMap(2, {x, y}));
}

int max_power_dividing(const Poly& p, int var) {
    if (p.is_zero()) return -1; // divisible by any power
    int k = 0;
    for (const auto& [e, c] : p.terms()) {
        if (k == 0 && e[var] == 0) return 0;
        k = (k == 0) ? e[var] : std::min(k, e[var]);
    }
    return k;
}

Poly divide_power(const Poly& p, int var, int k) {
    if (k == 0 || p.is_zero()) return p;
    Poly r(p.arity());
    for (const auto& [e, c] : p.terms()) {
        Expo d = e;
        d[var] -= k;
        if (d[var] < 0) throw std::logic_error("divide_power: not divisible");
        r.add_term(d, c);
    }
    return r;
}

Poly restrict_var_to_zero(const Poly& p, int var) {
    Poly r(p.arity());
    for (const auto& [e, c] : p.terms())
        if (e[var] == 0) r.add_term(e, c);
    return r;
}

BlowUpChart make_chart(const PlanarField& Z, const std::array<Rational, 2>& p, int chart) {
    BlowUpChart out;
    out.chart = chart;
    out.center = p;
    Poly u = Poly::variable(2, 0), v = Poly::variable(2, 1);
    Poly A0 = translate(Z.A, p);
    Poly B0 = translate(Z.B, p);
    int dvar = (chart == 1) ? 0 : 1;
    PolyMap sigma = (chart == 1) ? PolyMap(2, {u, mul(u, v)}) : PolyMap(2, {mul(u, v), v});
    // full map back to original coordinates, with the translation
    out.map = PolyMap(2, {add(sigma.comp[0], Poly::constant(2, p[0])),
                          add(sigma.comp[1], Poly::constant(2, p[1]))});
    Poly Apb = pullback(A0, sigma);
    Poly Bpb = pullback(B0, sigma);
    if (chart == 1) {
        // udot = A(u, uv), vdot = (B(u, uv) - v A(u, uv)) / u
        Poly num = sub(Bpb, mul(v, Apb));
        out.pulled_back = PlanarField{Apb, divide_power(num, 0, 1)};
    } else {
        // udot = (A(uv, v) - u B(uv, v)) / v, vdot = B(uv, v)
        Poly num = sub(Apb, mul(u, Bpb));
        out.pulled_back = PlanarField{divide_power(num, 1, 1), Bpb};
    }
    int ka = max_power_dividing(out.pulled_back.A, dvar);
    int kb = max_power_dividing(out.pulled_back.B, dvar);
    int r;
    if (ka < 0 && kb < 0) r = 0;
    else if (ka < 0) r = kb;
    else if (kb < 0) r = ka;
    else r = std::min(ka, kb);
    out.divisor_exponent = r;
    out.strict = PlanarField{divide_power(out.pulled_back.A, dvar, r),
                             divide_power(out.pulled_back.B, dvar, r)};
    // non-dicritical iff the divisor-direction component vanishes on the divisor
    const Poly& along = (chart == 1) ? out.strict.A : out.strict.B;
    out.dicritical = !restrict_var_to_zero(along, dvar).is_zero();
    return out;
}

} // namespace

std::pair<BlowUpChart, BlowUpChart> blow_up_point(const PlanarField& Z,
                                                  const std::array<Rational, 2>& p) {
    std::vector<Rational> pt{p[0], p[1]};
    if (!eval(Z.A, pt).is_zero() || !eval(Z.B, pt).is_zero())
        throw std::invalid_argument("blow_up_point: Z does not vanish at the center");
    return {make_chart(Z, p, 1), make_chart(Z, p, 2)};
}

namespace {

struct DivisorScan {
    std::vector<Rational> roots; // rational common roots along the divisor
    bool irrational = false;
    bool incomplete = false;
};

// common zeros of the strict transform restricted to the divisor {x_dvar = 0},
// as values of the other coordinate
DivisorScan scan_divisor(const PlanarField& strict, int dvar) {
    DivisorScan out;
    int other = 1 - dvar;
    Poly a0 = restrict_var_to_zero(strict.A, dvar);
    Poly b0 = restrict_var_to_zero(strict.B, dvar);
    UniPoly ua = uni_from_poly(a0, other);
    UniPoly ub = uni_from_poly(b0, other);
    UniPoly g;
    if (ua.empty() && ub.empty())
        throw std::logic_error("scan_divisor: strict transform vanishes on the divisor");
    if (ua.empty()) g = ub;
    else if (ub.empty()) g = ua;
    else g = uni_gcd(ua, ub);
    if (uni_degree(g) < 1) return out;
    UniRootSearch rs = uni_rational_roots(g);
    out.roots = rs.roots;
    out.irrational = rs.irrational_real_roots > 0;
    out.incomplete = !rs.complete;
    return out;
}

struct ResolveContext {
    int max_depth;
    bool depth_cap_hit = false;
    bool irrational_points = false;
    int max_tree_depth = 0;
};

void expand(ResolutionNode& node, ResolveContext& ctx);

std::unique_ptr<ResolutionNode> make_child(const BlowUpChart& chart,
                                           const std::vector<Rational>& divisor_roots,
                                           bool scan_origin_only, int depth,
                                           ResolveContext& ctx) {
    auto node = std::make_unique<ResolutionNode>();
    node->field = chart.strict;
    node->chart = chart;
    node->depth = depth;
    ctx.max_tree_depth = std::max(ctx.max_tree_depth, depth);
    int dvar = chart.divisor_var();
    std::vector<std::array<Rational, 2>> pts;
    if (scan_origin_only) {
        pts.push_back({Rational(0), Rational(0)});
    } else {
        for (const auto& r : divisor_roots) {
            std::array<Rational, 2> p{Rational(0), Rational(0)};
            p[1 - dvar] = r;
            pts.push_back(p);
        }
    }
    for (const auto& p : pts) {
        SingularityReport rep = jacobian_classify(node->field, p);
        if (rep.cls == SingClass::Regular && scan_origin_only) continue;
        node->singularities.push_back(rep);
    }
    expand(*node, ctx);
    return node;
}

void expand(ResolutionNode& node, ResolveContext& ctx) {
    node.all_elementary = true;
    node.only_saddles = true;
    for (const auto& rep : node.singularities) {
        if (rep.cls == SingClass::NonElementary) node.all_elementary = false;
        if (rep.cls != SingClass::Saddle && rep.cls != SingClass::Regular)
            node.only_saddles = false;
    }
    if (node.all_elementary) return;
    if (node.depth >= ctx.max_depth) {
        ctx.depth_cap_hit = true;
        node.flags.push_back("depth_cap");
        return;
    }
    for (const auto& rep : node.singularities) {
        if (rep.cls != SingClass::NonElementary) continue;
        auto [c1, c2] = blow_up_point(node.field, rep.point);
        DivisorScan scan = scan_divisor(c1.strict, c1.divisor_var());
        if (scan.irrational) {
            ctx.irrational_points = true;
            node.flags.push_back("irrational_divisor_points");
        }
        if (scan.incomplete) node.flags.push_back("root_search_incomplete");
        node.children.push_back(make_child(c1, scan.roots, false, node.depth + 1, ctx));
        node.children.push_back(make_child(c2, {}, true, node.depth + 1, ctx));
    }
}

void collect_leaf_status(const ResolutionNode& node, bool& resolved, bool& saddles) {
    if (node.children.empty()) {
        if (!node.all_elementary) resolved = false;
        if (!node.only_saddles) saddles = false;
        return;
    }
    // interior node: its non-elementary points were blown up, elementary ones remain
    for (const auto& rep : node.singularities)
        if (rep.cls != SingClass::Saddle && rep.cls != SingClass::Regular &&
            rep.cls != SingClass::NonElementary)
            saddles = false;
    for (const auto& c : node.children) collect_leaf_status(*c, resolved, saddles);
}

} // namespace

ResolutionTree resolve(const PlanarField& Z, int max_depth,
                       const std::vector<std::array<Rational, 2>>& candidates) {
    if (Z.A.is_zero() && Z.B.is_zero())
        throw std::invalid_argument("resolve: zero vector field");
    ResolutionTree tree;
    tree.input = Z;
    // factor out the maximal monomial x^alpha y^beta
    int ax = max_power_dividing(Z.A, 0), bx = max_power_dividing(Z.B, 0);
    int ay = max_power_dividing(Z.A, 1), by = max_power_dividing(Z.B, 1);
    auto combine = [](int a, int b) { return a < 0 ? (b < 0 ? 0 : b) : (b < 0 ? a : std::min(a, b)); };
    tree.monomial_alpha = combine(ax, bx);
    tree.monomial_beta = combine(ay, by);
    PlanarField Zr{divide_power(divide_power(Z.A, 0, tree.monomial_alpha), 1, tree.monomial_beta),
                   divide_power(divide_power(Z.B, 0, tree.monomial_alpha), 1, tree.monomial_beta)};

    ResolveContext ctx{max_depth};
    tree.root = std::make_unique<ResolutionNode>();
    tree.root->field = Zr;
    tree.root->depth = 0;

    // candidate singular points: user-supplied, the origin, and axis intersections
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<std::array<Rational, 2>> pts;
    auto push = [&](const std::array<Rational, 2>& p) {
        auto key = std::make_pair(p[0].str(), p[1].str());
        if (seen.insert(key).second) pts.push_back(p);
    };
    push({Rational(0), Rational(0)});
    for (const auto& p : candidates) push(p);
    for (int var = 0; var < 2; ++var) {
        // zeros on the axis {x_var = 0}
        Poly a0 = restrict_var_to_zero(Zr.A, var);
        Poly b0 = restrict_var_to_zero(Zr.B, var);
        int other = 1 - var;
        if (a0.depends_on(var) || b0.depends_on(var)) continue;
        UniPoly ua = uni_from_poly(a0, other);
        UniPoly ub = uni_from_poly(b0, other);
        if (ua.empty() && ub.empty()) continue;
        UniPoly g = ua.empty() ? ub : (ub.empty() ? ua : uni_gcd(ua, ub));
        if (uni_degree(g) < 1) continue;
        UniRootSearch rs = uni_rational_roots(g);
        if (rs.irrational_real_roots > 0) {
            ctx.irrational_points = true;
            tree.root->flags.push_back("irrational_axis_points");
        }
        for (const auto& r : rs.roots) {
            std::array<Rational, 2> p{Rational(0), Rational(0)};
            p[other] = r;
            push(p);
        }
    }
    for (const auto& p : pts) {
        SingularityReport rep = jacobian_classify(tree.root->field, p);
        if (rep.cls == SingClass::Regular) continue;
        tree.root->singularities.push_back(rep);
    }
    expand(*tree.root, ctx);

    tree.depth = ctx.max_tree_depth;
    tree.depth_cap_hit = ctx.depth_cap_hit;
    tree.irrational_points = ctx.irrational_points;
    tree.resolved = true;
    tree.leaves_all_saddles = true;
    collect_leaf_status(*tree.root, tree.resolved, tree.leaves_all_saddles);
    if (ctx.depth_cap_hit) tree.resolved = false;
    return tree;
}

// ---- divergence membership ----

namespace {

std::vector<Expo> monomials_up_to(int deg) {
    std::vector<Expo> out;
    for (int d = 0; d <= deg; ++d)
        for (int i = d; i >= 0; --i)
            out.push_back({i, d - i, 0});
    return out;
}

// exact dense Gaussian elimination for M x = rhs; returns a particular
// solution with free variables set to zero, or nullopt when inconsistent
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> M,
                                                 std::vector<Rational> rhs) {
    const int rows = static_cast<int>(M.size());
    const int cols = rows ? static_cast<int>(M[0].size()) : 0;
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (!M[i][c].is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(M[piv], M[r]);
        std::swap(rhs[piv], rhs[r]);
        for (int i = 0; i < rows; ++i) {
            if (i == r || M[i][c].is_zero()) continue;
            Rational f = M[i][c] / M[r][c];
            for (int j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (!rhs[i].is_zero()) return std::nullopt;
    std::vector<Rational> x(cols, Rational(0));
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i] / M[i][pivot_col[i]];
    return x;
}

} // namespace

DivergenceMembership divergence_membership(const PlanarField& Z, int max_deg) {
    if (max_deg < 0 || max_deg > 8)
        throw std::invalid_argument("divergence_membership: max_deg must be in 0..8");
    DivergenceMembership out;
    Poly div = divergence(PolyVectorField({Z.A, Z.B}));

    // quick Fail test: div must vanish on every known common zero of (A, B)
    std::vector<std::array<Rational, 2>> zeros{{Rational(0), Rational(0)}};
    for (const auto& p : zeros) {
        std::vector<Rational> pt{p[0], p[1]};
        if (eval(Z.A, pt).is_zero() && eval(Z.B, pt).is_zero() && !eval(div, pt).is_zero()) {
            out.kind = DivergenceMembership::Kind::Fail;
            out.reason = "div Z = " + std::string(eval(div, pt).str()) +
                         " != 0 at a common zero of (A, B)";
            return out;
        }
    }

    // exact linear system over the coefficients of f and g
    std::vector<Expo> basis = monomials_up_to(max_deg);
    const int m = static_cast<int>(basis.size());
    // rows: monomials appearing in f*A + g*B or div
    std::set<Expo, GrlexLess> row_set;
    auto add_rows = [&](const Poly& p, const Expo& shift) {
        for (const auto& [e, c] : p.terms())
            row_set.insert({e[0] + shift[0], e[1] + shift[1], 0});
    };
    for (const auto& b : basis) { add_rows(Z.A, b); add_rows(Z.B, b); }
    for (const auto& [e, c] : div.terms()) row_set.insert(e);
    std::vector<Expo> row_list(row_set.begin(), row_set.end());
    auto row_index = [&](const Expo& e) {
        auto it = std::lower_bound(row_list.begin(), row_list.end(), e, GrlexLess{});
        return static_cast<int>(it - row_list.begin());
    };
    std::vector<std::vector<Rational>> M(row_list.size(), std::vector<Rational>(2 * m, Rational(0)));
    std::vector<Rational> rhs(row_list.size(), Rational(0));
    for (int j = 0; j < m; ++j) {
        for (const auto& [e, c] : Z.A.terms())
            M[row_index({e[0] + basis[j][0], e[1] + basis[j][1], 0})][j] += c;
        for (const auto& [e, c] : Z.B.terms())
            M[row_index({e[0] + basis[j][0], e[1] + basis[j][1], 0})][m + j] += c;
    }
    for (const auto& [e, c] : div.terms()) rhs[row_index(e)] = c;

    if (auto sol = solve_exact(M, rhs)) {
        Poly f(2), g(2);
        for (int j = 0; j < m; ++j) {
            f.add_term(basis[j], (*sol)[j]);
            g.add_term(basis[j], (*sol)[m + j]);
        }
        out.kind = DivergenceMembership::Kind::Witness;
        out.f = f;
        out.g = g;
        return out;
    }

    // least-squares residual of the same system, in doubles
    out.kind = DivergenceMembership::Kind::NumericBound;
    {
        const int R = static_cast<int>(M.size()), C = 2 * m;
        std::vector<std::vector<double>> N(C, std::vector<double>(C, 0.0));
        std::vector<double> Nb(C, 0.0);
        auto a = [&](int i, int j) { return M[i][j].to_double(); };
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < C; ++j) {
                if (a(i, j) == 0.0) continue;
                for (int k = 0; k < C; ++k) N[j][k] += a(i, j) * a(i, k);
                Nb[j] += a(i, j) * rhs[i].to_double();
            }
        // solve the normal equations with partial pivoting + tiny ridge
        for (int j = 0; j < C; ++j) N[j][j] += 1e-12;
        std::vector<double> x(Nb);
        for (int c = 0; c < C; ++c) {
            int piv = c;
            for (int i = c + 1; i < C; ++i)
                if (std::fabs(N[i][c]) > std::fabs(N[piv][c])) piv = i;
            std::swap(N[c], N[piv]);
            std::swap(x[c], x[piv]);
            for (int i = 0; i < C; ++i) {
                if (i == c || N[i][c] == 0.0) continue;
                double f = N[i][c] / N[c][c];
                for (int j2 = c; j2 < C; ++j2) N[i][j2] -= f * N[c][j2];
                x[i] -= f * x[c];
            }
        }
        for (int c = 0; c < C; ++c) x[c] /= N[c][c];
        double res2 = 0.0;
        for (int i = 0; i < R; ++i) {
            double s = -rhs[i].to_double();
            for (int j = 0; j < C; ++j) s += a(i, j) * x[j];
            res2 += s * s;
        }
        out.residual = std::sqrt(res2);
    }
    // grid estimate of K = max |div Z| / (|A| + |B|) over a punctured box
    double K = 0.0;
    const int n = 41;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x = -1.0 + 2.0 * (i + 0.5) / n;
            double y = -1.0 + 2.0 * (j + 0.5) / n;
            if (std::fabs(x) < 1e-3 && std::fabs(y) < 1e-3) continue;
            std::vector<double> pt{x, y};
            double denom = std::fabs(eval(Z.A, pt)) + std::fabs(eval(Z.B, pt));
            if (denom < 1e-12) continue;
            K = std::max(K, std::fabs(eval(div, pt)) / denom);
        }
    }
    out.K_estimate = K;
    out.reason = "no exact witness up to degree " + std::to_string(max_deg);
    return out;
}

FinalSingularityReport final_singularity_check(const PlanarField& Z, int membership_max_deg) {
    FinalSingularityReport rep;
    if (Z.A.is_zero() && Z.B.is_zero())
        throw std::invalid_argument("final_singularity_check: zero field");
    int ax = max_power_dividing(Z.A, 0), bx = max_power_dividing(Z.B, 0);
    int ay = max_power_dividing(Z.A, 1), by = max_power_dividing(Z.B, 1);
    auto combine = [](int a, int b) { return a < 0 ? (b < 0 ? 0 : b) : (b < 0 ? a : std::min(a, b)); };
    rep.alpha = combine(ax, bx);
    rep.beta = combine(ay, by);
    rep.reduced = PlanarField{divide_power(divide_power(Z.A, 0, rep.alpha), 1, rep.beta),
                              divide_power(divide_power(Z.B, 0, rep.alpha), 1, rep.beta)};

    rep.membership = divergence_membership(Z, membership_max_deg);
    if (rep.membership.kind == DivergenceMembership::Kind::Fail) {
        rep.findings.push_back("hypothesis (i) violated: div Z not in the ideal (A, B)");
    } else if (rep.membership.kind == DivergenceMembership::Kind::NumericBound) {
        rep.findings.push_back("no exact divergence witness found; numeric bound only");
    }

    if (rep.alpha != 0) {
        rep.tangency_x_ok = max_power_dividing(rep.reduced.A, 0) >= 1;
        if (!rep.tangency_x_ok)
            rep.findings.push_back("tangency violated: x does not divide reduced A");
    }
    if (rep.beta != 0) {
        rep.tangency_y_ok = max_power_dividing(rep.reduced.B, 1) >= 1;
        if (!rep.tangency_y_ok)
            rep.findings.push_back("tangency violated: y does not divide reduced B");
    }

    std::array<Rational, 2> origin{Rational(0), Rational(0)};
    SingularityReport sing = jacobian_classify(rep.reduced, origin);
    if (sing.cls != SingClass::Regular) {
        rep.origin = sing;
        if (rep.membership.kind == DivergenceMembership::Kind::Witness) {
            Rational lhs = Rational(rep.alpha + 1) * eval(partial(rep.reduced.A, 0), {Rational(0), Rational(0)}) +
                           Rational(rep.beta + 1) * eval(partial(rep.reduced.B, 1), {Rational(0), Rational(0)});
            rep.identity_checked = true;
            rep.identity_ok = lhs.is_zero();
            if (!rep.identity_ok)
                rep.findings.push_back("derived identity (alpha+1) dA~/dx(0) + (beta+1) dB~/dy(0) = 0 fails");
        }
        if (sing.cls == SingClass::Saddle) rep.saddle_confirmed = true;
        else if (sing.cls != SingClass::NonElementary &&
                 rep.membership.kind == DivergenceMembership::Kind::Witness)
            rep.findings.push_back("elementary singularity is not a saddle");
    }
    return rep;
}

// ---- Hsiang-Pati metric comparison ----

namespace {

Poly monomial2(const std::array<int, 2>& e) {
    Poly p(2);
    p.add_term({e[0], e[1], 0}, Rational(1));
    return p;
}

} // namespace

HpCompareResult hp_metric_compare(const std::array<int, 2>& alpha,
                                  const std::array<int, 2>& beta,
                                  const Poly& g2, const Poly& g3,
                                  const Poly& h2, const Poly& h3,
                                  const GridSpec& grid) {
    if (alpha[0] > beta[0] || alpha[1] > beta[1])
        throw std::invalid_argument("hp_metric_compare: u^alpha must divide u^beta");
    Poly ua = monomial2(alpha), ub = monomial2(beta);
    auto check_div = [&](const Poly& p, const Poly& q, const char* what) {
        if (p.is_zero()) return;
        if (!exact_divide(p, q).ok())
            throw std::invalid_argument(std::string("hp_metric_compare: ") + what);
    };
    check_div(g2, ua, "u^alpha must divide g2");
    check_div(g3, ua, "u^alpha must divide g3");
    check_div(h2, ub, "u^beta must divide h2");
    check_div(h3, ub, "u^beta must divide h3");
    // dg_i ^ d(u^alpha) = 0
    for (const Poly* g : {&g2, &g3}) {
        Poly w = sub(mul(partial(*g, 0), partial(ua, 1)), mul(partial(*g, 1), partial(ua, 0)));
        if (!w.is_zero())
            throw std::invalid_argument("hp_metric_compare: dg_i ^ d(u^alpha) must vanish");
    }

    Poly pi1 = ua;
    Poly pi2 = add(add(g2, ub), h2);
    Poly pi3 = add(add(g3, ub), h3);
    std::array<Poly, 2> d1{partial(pi1, 0), partial(pi1, 1)};
    std::array<Poly, 2> d2{partial(pi2, 0), partial(pi2, 1)};
    std::array<Poly, 2> d3{partial(pi3, 0), partial(pi3, 1)};
    std::array<Poly, 2> da{partial(ua, 0), partial(ua, 1)};
    std::array<Poly, 2> db{partial(ub, 0), partial(ub, 1)};

    HpCompareResult res;
    res.k_est = std::numeric_limits<double>::infinity();
    res.K_est = 0.0;
    double h = (grid.hi - grid.lo) / grid.n;
    for (int i = 0; i < grid.n; ++i) {
        for (int j = 0; j < grid.n; ++j) {
            std::vector<double> u{grid.lo + (i + 0.5) * h, grid.lo + (j + 0.5) * h};
            double a0 = eval(da[0], u), a1 = eval(da[1], u);
            double b0 = eval(db[0], u), b1 = eval(db[1], u);
            double cross = a0 * b1 - a1 * b0;
            double scale2 = (a0 * a0 + a1 * a1) * (b0 * b0 + b1 * b1);
            if (cross * cross < 1e-20 * std::max(scale2, 1e-300)) { ++res.skipped; continue; }
            // quadratic forms in (du1, du2)
            auto outer = [](double p0, double p1) {
                return std::array<double, 3>{p0 * p0, p0 * p1, p1 * p1};
            };
            auto acc = [](std::array<double, 3>& M, const std::array<double, 3>& N) {
                M[0] += N[0]; M[1] += N[1]; M[2] += N[2];
            };
            std::array<double, 3> MA{0, 0, 0}, MB{0, 0, 0};
            acc(MA, outer(eval(d1[0], u), eval(d1[1], u)));
            acc(MA, outer(eval(d2[0], u), eval(d2[1], u)));
            acc(MA, outer(eval(d3[0], u), eval(d3[1], u)));
            acc(MB, outer(a0, a1));
            acc(MB, outer(b0, b1));
            // det(MA - lambda MB) = 0
            double p2 = MB[0] * MB[2] - MB[1] * MB[1];
            double p1c = -(MA[0] * MB[2] + MA[2] * MB[0] - 2.0 * MA[1] * MB[1]);
            double p0 = MA[0] * MA[2] - MA[1] * MA[1];
            double disc = p1c * p1c - 4.0 * p2 * p0;
            if (disc < 0) disc = 0;
            double sq = std::sqrt(disc);
            double l1 = (-p1c - sq) / (2.0 * p2);
            double l2 = (-p1c + sq) / (2.0 * p2);
            if (l1 > l2) std::swap(l1, l2);
            res.k_est = std::min(res.k_est, l1);
            res.K_est = std::max(res.K_est, l2);
            ++res.samples;
        }
    }
    if (res.samples == 0)
        throw std::domain_error("hp_metric_compare: no usable grid points");
    return res;
}

} // namespace martinet
