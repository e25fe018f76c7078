#include "martinet/lift.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace martinet {

namespace {

struct PairFields {
    PolyVectorField X1, X2;
    // dX[i](m, j) = d X^{i+1}_m / dx_j
    std::array<std::array<std::array<Poly, 3>, 3>, 2> dX;

    explicit PairFields(const DistributionSpec& spec) {
        auto [a, b] = generating_pair(spec);
        X1 = a;
        X2 = b;
        for (int m = 0; m < 3; ++m)
            for (int j = 0; j < 3; ++j) {
                dX[0][m][j] = partial(X1.comp[m], j);
                dX[1][m][j] = partial(X2.comp[m], j);
            }
    }

    // frobenius norm of both Jacobians at x, the larger of the two
    double jacobian_norm(const std::vector<double>& x) const {
        double best = 0;
        for (int i = 0; i < 2; ++i) {
            double f = 0;
            for (int m = 0; m < 3; ++m)
                for (int j = 0; j < 3; ++j) {
                    double v = eval(dX[i][m][j], x);
                    f += v * v;
                }
            best = std::max(best, std::sqrt(f));
        }
        return best;
    }
};

// gamma' = u1 X1 + u2 X2, p'_j = -sum_i u_i sum_m p_m dX^i_m/dx_j
void lift_rhs(const PairFields& pf, const std::array<double, 2>& u,
              const std::vector<double>& y, std::vector<double>& dy) {
    std::vector<double> x{y[0], y[1], y[2]};
    auto v1 = eval(pf.X1, x);
    auto v2 = eval(pf.X2, x);
    for (int m = 0; m < 3; ++m) dy[m] = u[0] * v1[m] + u[1] * v2[m];
    for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int i = 0; i < 2; ++i) {
            if (u[i] == 0) continue;
            for (int m = 0; m < 3; ++m) s += u[i] * y[3 + m] * eval(pf.dX[i][m][j], x);
        }
        dy[3 + j] = -s;
    }
    // euclidean length of the base curve
    dy[6] = std::sqrt(dy[0] * dy[0] + dy[1] * dy[1] + dy[2] * dy[2]);
}

} // namespace

Lift abnormal_lift(const DistributionSpec& spec, const Control& control,
                   const std::array<double, 3>& x0, const std::array<double, 3>& p0,
                   double tol) {
    PairFields pf(spec);
    {
        std::vector<double> x{x0[0], x0[1], x0[2]};
        auto v1 = eval(pf.X1, x);
        auto v2 = eval(pf.X2, x);
        double d1 = p0[0] * v1[0] + p0[1] * v1[1] + p0[2] * v1[2];
        double d2 = p0[0] * v2[0] + p0[1] * v2[1] + p0[2] * v2[2];
        double n = std::sqrt(p0[0] * p0[0] + p0[1] * p0[1] + p0[2] * p0[2]);
        if (std::fabs(d1) > 1e-9 || std::fabs(d2) > 1e-9)
            throw std::invalid_argument("abnormal_lift: p0 is not orthogonal to the distribution at x0");
        if (std::fabs(n - 1.0) > 1e-9)
            throw std::invalid_argument("abnormal_lift: p0 must have unit norm");
    }

    Lift out;
    std::vector<double> y{x0[0], x0[1], x0[2], p0[0], p0[1], p0[2], 0.0};
    const int N = control.segments();
    if (N < 1) throw std::invalid_argument("abnormal_lift: empty control");

    OdeOptions opts;
    opts.rtol = tol;
    opts.atol = tol;

    auto sample = [&](double t, const std::vector<double>& s) {
        std::vector<double> x{s[0], s[1], s[2]};
        out.times.push_back(t);
        out.gamma.push_back({s[0], s[1], s[2]});
        out.p.push_back({s[3], s[4], s[5]});
        double pn = std::sqrt(s[3] * s[3] + s[4] * s[4] + s[5] * s[5]);
        out.p_norm.push_back(pn);
        out.max_p_norm = std::max(out.max_p_norm, pn);
        auto v1 = eval(pf.X1, x);
        auto v2 = eval(pf.X2, x);
        double d1 = s[3] * v1[0] + s[4] * v1[1] + s[5] * v1[2];
        double d2 = s[3] * v2[0] + s[4] * v2[1] + s[5] * v2[2];
        out.max_pX1 = std::max(out.max_pX1, std::fabs(d1));
        out.max_pX2 = std::max(out.max_pX2, std::fabs(d2));
        out.lipschitz_C = std::max(out.lipschitz_C, pf.jacobian_norm(x));
    };
    sample(0.0, y);

    for (int seg = 0; seg < N; ++seg) {
        std::array<double, 2> u = control.u[seg];
        Rhs rhs = [&](double, const std::vector<double>& yy, std::vector<double>& dy) {
            lift_rhs(pf, u, yy, dy);
        };
        double t0 = static_cast<double>(seg) / N;
        double t1 = static_cast<double>(seg + 1) / N;
        auto observer = [&](const StepInfo& info) -> std::optional<double> {
            sample(info.t1, info.y1);
            return std::nullopt;
        };
        rk45_integrate(rhs, t0, y, t1, opts, observer);
    }
    out.length = y[6];
    out.gronwall_bound = 2.0 * std::exp(out.lipschitz_C * out.length);
    double scale = std::max(out.max_p_norm, 1e-300);
    out.singular = std::max(out.max_pX1, out.max_pX2) <= 1e-8 * scale;
    return out;
}

StokesResult stokes_action(const DistributionSpec& spec, const std::array<double, 3>& arc_base,
                           const std::array<double, 3>& arc_dir,
                           const std::vector<Section>& sections, int quad_points, double tol,
                           double beta_scale) {
    if (quad_points < 3 || quad_points % 2 == 0)
        throw std::invalid_argument("stokes_action: quad_points must be odd and >= 3");
    PairFields pf(spec);
    MartinetData md = martinet_function(spec);
    auto [X1, X2] = generating_pair(spec);
    Poly x1h = directional(X1, md.h);
    Poly x2h = directional(X2, md.h);

    const int M = quad_points;
    std::vector<double> svals(M);
    for (int i = 0; i < M; ++i) svals[i] = static_cast<double>(i) / (M - 1);

    // initial covector: unit annihilator with a consistent sign along the arc
    auto annihilator = [&](const std::array<double, 3>& x, const std::array<double, 3>& ref) {
        std::vector<double> xv{x[0], x[1], x[2]};
        auto a = eval(X1, xv);
        auto b = eval(X2, xv);
        std::array<double, 3> n{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                a[0] * b[1] - a[1] * b[0]};
        double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (nn < 1e-14) throw std::runtime_error("stokes_action: degenerate annihilator");
        for (auto& c : n) c /= nn;
        double d = n[0] * ref[0] + n[1] * ref[1] + n[2] * ref[2];
        if (d < 0) for (auto& c : n) c = -c;
        return n;
    };

    const size_t K = sections.size();
    // states per quadrature node after each transition; index 0 = initial arc
    std::vector<std::vector<std::array<double, 3>>> alpha(K + 1,
                                                          std::vector<std::array<double, 3>>(M));
    std::vector<std::vector<std::array<double, 3>>> beta(K + 1,
                                                         std::vector<std::array<double, 3>>(M));

    std::array<double, 3> ref{0, 0, 0};
    for (int i = 0; i < M; ++i) {
        std::array<double, 3> a{arc_base[0] + svals[i] * arc_dir[0],
                                arc_base[1] + svals[i] * arc_dir[1],
                                arc_base[2] + svals[i] * arc_dir[2]};
        if (i == 0) {
            // orient the annihilator against the arc direction so that I_0 > 0
            auto n = annihilator(a, arc_dir);
            ref = n;
        }
        auto n = annihilator(a, ref);
        alpha[0][i] = a;
        beta[0][i] = {beta_scale * n[0], beta_scale * n[1], beta_scale * n[2]};
    }

    OdeOptions opts;
    opts.rtol = tol;
    opts.atol = tol;

    // characteristic lift: gamma' = Z(gamma) with controls (u1, u2) = (-X2(h), X1(h))
    for (int i = 0; i < M; ++i) {
        std::vector<double> y{alpha[0][i][0], alpha[0][i][1], alpha[0][i][2],
                              beta[0][i][0],  beta[0][i][1],  beta[0][i][2],  0.0};
        for (size_t k = 0; k < K; ++k) {
            Rhs rhs = [&](double, const std::vector<double>& yy, std::vector<double>& dy) {
                std::vector<double> x{yy[0], yy[1], yy[2]};
                std::array<double, 2> u{-eval(x2h, x), eval(x1h, x)};
                lift_rhs(pf, u, yy, dy);
            };
            const Section& sec = sections[k];
            auto gval = [&](const std::vector<double>& yy) {
                return sec.g({yy[0], yy[1], yy[2]});
            };
            double g_start = gval(y);
            auto observer = [&](const StepInfo& info) -> std::optional<double> {
                double g0 = gval(info.y0), g1 = gval(info.y1);
                if (g0 == 0.0 || (g0 > 0) == (g1 > 0)) return std::nullopt;
                return hermite_bisect(info, gval);
            };
            (void)g_start;
            OdeStatus st = rk45_integrate(rhs, 0.0, y, 1e4, opts, observer);
            if (st.kind != OdeStatus::Kind::ObserverStop)
                throw std::runtime_error("stokes_action: family member failed to reach section " +
                                         std::to_string(k + 1));
            alpha[k + 1][i] = {y[0], y[1], y[2]};
            beta[k + 1][i] = {y[3], y[4], y[5]};
        }
    }

    StokesResult out;
    // I_k = int beta^k . d(alpha^k)/ds ds, derivative by central differences,
    // integral by composite Simpson on the uniform s-grid
    double hgrid = 1.0 / (M - 1);
    for (size_t k = 0; k <= K; ++k) {
        std::vector<double> integrand(M);
        for (int i = 0; i < M; ++i) {
            std::array<double, 3> da;
            if (i == 0) {
                for (int c = 0; c < 3; ++c)
                    da[c] = (-3 * alpha[k][0][c] + 4 * alpha[k][1][c] - alpha[k][2][c]) /
                            (2 * hgrid);
            } else if (i == M - 1) {
                for (int c = 0; c < 3; ++c)
                    da[c] = (3 * alpha[k][M - 1][c] - 4 * alpha[k][M - 2][c] +
                             alpha[k][M - 3][c]) /
                            (2 * hgrid);
            } else {
                for (int c = 0; c < 3; ++c)
                    da[c] = (alpha[k][i + 1][c] - alpha[k][i - 1][c]) / (2 * hgrid);
            }
            integrand[i] = beta[k][i][0] * da[0] + beta[k][i][1] * da[1] + beta[k][i][2] * da[2];
        }
        double acc = 0;
        for (int i = 0; i < M; ++i) {
            double w = (i == 0 || i == M - 1) ? 1 : (i % 2 ? 4 : 2);
            acc += w * integrand[i];
        }
        out.I.push_back(acc * hgrid / 3.0);
    }
    if (out.I.empty()) return out;
    if (out.I.front() <= 0)
        throw std::domain_error("stokes_action: initial action I_0 must be positive "
                                "(arc not transverse to the distribution)");
    double m = 0;
    for (double v : out.I) m += v;
    m /= out.I.size();
    double var = 0;
    for (double v : out.I) var += (v - m) * (v - m);
    out.mean = m;
    out.stdev = std::sqrt(var / out.I.size());
    out.rel_stdev = out.stdev / std::fabs(m);
    return out;
}

namespace {

std::array<double, 3> flow_endpoint(const PairFields& pf, const std::array<double, 3>& x0,
                                    const Control& control, double tol) {
    const int N = control.segments();
    std::vector<double> y{x0[0], x0[1], x0[2]};
    OdeOptions opts;
    opts.rtol = tol;
    opts.atol = tol;
    for (int seg = 0; seg < N; ++seg) {
        std::array<double, 2> u = control.u[seg];
        Rhs rhs = [&](double, const std::vector<double>& yy, std::vector<double>& dy) {
            std::vector<double> x{yy[0], yy[1], yy[2]};
            auto v1 = eval(pf.X1, x);
            auto v2 = eval(pf.X2, x);
            for (int m = 0; m < 3; ++m) dy[m] = u[0] * v1[m] + u[1] * v2[m];
        };
        double t0 = static_cast<double>(seg) / N;
        double t1 = static_cast<double>(seg + 1) / N;
        OdeStatus st = rk45_integrate(rhs, t0, y, t1, opts);
        if (st.kind != OdeStatus::Kind::ReachedLimit)
            throw std::runtime_error("endpoint_rank: flow failed inside [0,1]");
    }
    return {y[0], y[1], y[2]};
}

} // namespace

EndpointRank endpoint_rank(const DistributionSpec& spec, const std::array<double, 3>& x0,
                           const Control& control, double h_fd, double tol_rank, double tol) {
    const int N = control.segments();
    if (N < 1 || N > 64) throw std::invalid_argument("endpoint_rank: control length must be 1..64");
    PairFields pf(spec);
    EndpointRank out;
    out.endpoint = flow_endpoint(pf, x0, control, tol);

    Eigen::MatrixXd J(3, 2 * N);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < 2; ++i) {
            Control up = control, dn = control;
            up.u[j][i] += h_fd;
            dn.u[j][i] -= h_fd;
            auto ep = flow_endpoint(pf, x0, up, tol);
            auto em = flow_endpoint(pf, x0, dn, tol);
            for (int m = 0; m < 3; ++m)
                J(m, 2 * j + i) = (ep[m] - em[m]) / (2 * h_fd);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    auto sv = svd.singularValues();
    for (int i = 0; i < 3 && i < sv.size(); ++i) out.sigma[i] = sv(i);
    if (out.sigma[0] > 0) {
        for (int i = 0; i < 3; ++i)
            if (out.sigma[i] / out.sigma[0] > tol_rank) ++out.rank;
    }
    return out;
}

} // namespace martinet
