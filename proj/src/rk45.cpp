#include "martinet/rk45.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace martinet {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct Stepper {
    const Rhs& rhs;
    int n;
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp;

    explicit Stepper(const Rhs& f, int dim)
        : rhs(f), n(dim), k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim),
          ytmp(dim) {}

    // k1 must hold rhs(t, y) on entry (FSAL). Returns the scaled error norm.
    double step(double t, const std::vector<double>& y, double h, std::vector<double>& out,
                double atol, double rtol) {
        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (int i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (int i = 0; i < n; ++i)
            out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, out, k7);
        double err2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            double sc = atol + rtol * std::max(std::fabs(y[i]), std::fabs(out[i]));
            err2 += (e / sc) * (e / sc);
        }
        return std::sqrt(err2 / n);
    }
};

double initial_step(const std::vector<double>& y0, const std::vector<double>& f0,
                    const OdeOptions& opts) {
    double dy = 0.0, df = 0.0;
    for (size_t i = 0; i < y0.size(); ++i) {
        double sc = opts.atol + opts.rtol * std::fabs(y0[i]);
        dy = std::max(dy, std::fabs(y0[i]) / sc);
        df = std::max(df, std::fabs(f0[i]) / sc);
    }
    double h = (dy < 1e-5 || df < 1e-5) ? 1e-6 : 0.01 * dy / df;
    return std::min(h, opts.h_max);
}

// integrate to an exact target time, no observer
void advance_exact(Stepper& st, double t, std::vector<double>& y, double t_target,
                   const OdeOptions& opts) {
    if (t_target <= t) return;
    std::vector<double> ynew(y.size());
    st.rhs(t, y, st.k1);
    double h = std::min(initial_step(y, st.k1, opts), t_target - t);
    long guard = 0;
    while (t < t_target) {
        if (++guard > opts.max_steps) throw std::runtime_error("rk45: step budget exceeded");
        h = std::min(h, t_target - t);
        double err = st.step(t, y, h, ynew, opts.atol, opts.rtol);
        if (err <= 1.0) {
            t += h;
            y = ynew;
            st.k1 = st.k7;
            double fac = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h = std::min(h * fac, opts.h_max);
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            if (h < 1e-14 * std::max(1.0, std::fabs(t)))
                throw std::runtime_error("rk45: step underflow while landing on event time");
        }
    }
}

} // namespace

std::vector<double> hermite_interpolate(const StepInfo& s, double t) {
    double h = s.t1 - s.t0;
    double th = (t - s.t0) / h;
    double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    double h10 = th * (1 - th) * (1 - th);
    double h01 = th * th * (3 - 2 * th);
    double h11 = th * th * (th - 1);
    std::vector<double> out(s.y0.size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = h00 * s.y0[i] + h * h10 * s.f0[i] + h01 * s.y1[i] + h * h11 * s.f1[i];
    return out;
}

double hermite_bisect(const StepInfo& s,
                      const std::function<double(const std::vector<double>&)>& g) {
    double lo = s.t0, hi = s.t1;
    double glo = g(s.y0);
    double ghi = g(s.y1);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0) == (ghi > 0))
        throw std::invalid_argument("hermite_bisect: no sign change in bracket");
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        double gm = g(hermite_interpolate(s, mid));
        if (gm == 0.0) return mid;
        if ((gm > 0) == (glo > 0)) { lo = mid; glo = gm; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

OdeStatus rk45_integrate(const Rhs& rhs, double t0, std::vector<double>& y, double t_limit,
                         const OdeOptions& opts,
                         const std::function<std::optional<double>(const StepInfo&)>& observer) {
    OdeStatus status;
    if (t_limit <= t0) {
        status.kind = OdeStatus::Kind::ReachedLimit;
        status.t = t0;
        return status;
    }
    const int n = static_cast<int>(y.size());
    Stepper st(rhs, n);
    std::vector<double> ynew(n);
    double t = t0;
    rhs(t, y, st.k1);
    double h = std::min(initial_step(y, st.k1, opts), t_limit - t0);
    long steps = 0;
    while (t < t_limit) {
        if (++steps > opts.max_steps) {
            status.kind = OdeStatus::Kind::MaxSteps;
            status.t = t;
            status.steps = steps;
            return status;
        }
        h = std::min(h, t_limit - t);
        double err = st.step(t, y, h, ynew, opts.atol, opts.rtol);
        if (err > 1.0) {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            if (h < 1e-14 * std::max(1.0, std::fabs(t))) {
                status.kind = OdeStatus::Kind::StepUnderflow;
                status.t = t;
                status.steps = steps;
                return status;
            }
            continue;
        }
        double t1 = t + h;
        if (observer) {
            StepInfo info{t, t1, y, ynew, st.k1, st.k7};
            if (auto stop = observer(info)) {
                double ts = std::clamp(*stop, t, t1);
                advance_exact(st, t, y, ts, opts);
                status.kind = OdeStatus::Kind::ObserverStop;
                status.t = ts;
                status.steps = steps;
                return status;
            }
        }
        t = t1;
        y = ynew;
        st.k1 = st.k7;
        double fac = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::min(h * fac, opts.h_max);
    }
    status.kind = OdeStatus::Kind::ReachedLimit;
    status.t = t;
    status.steps = steps;
    return status;
}

} // namespace martinet
