#include "martinet/reach.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <deque>
#include <stdexcept>

namespace martinet {

namespace {

double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

std::array<double, 3> sub3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

struct Job {
    std::array<double, 3> start;
    int orientation;                 // +-1, multiplies Z
    double remaining;
    int from_vertex;
    std::array<double, 3> incoming; // unit direction we came from (to avoid retracing)
    bool has_incoming = false;
};

// Gauss-Newton projection onto {generators = 0}
std::array<double, 3> snap_to_curve(const DeclaredCurve& curve, std::array<double, 3> x) {
    const int m = static_cast<int>(curve.generators.size());
    std::vector<std::array<Poly, 3>> grads(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < 3; ++j) grads[i][j] = partial(curve.generators[i], j);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<double> pt{x[0], x[1], x[2]};
        Eigen::VectorXd r(m);
        Eigen::MatrixXd J(m, 3);
        double rn = 0;
        for (int i = 0; i < m; ++i) {
            r(i) = eval(curve.generators[i], pt);
            rn = std::max(rn, std::fabs(r(i)));
            for (int j = 0; j < 3; ++j) J(i, j) = eval(grads[i][j], pt);
        }
        if (rn < 1e-13) break;
        Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(r);
        for (int j = 0; j < 3; ++j) x[j] -= step(j);
    }
    return x;
}

bool near_curve(const DeclaredCurve& curve, const std::array<double, 3>& x) {
    std::vector<double> pt{x[0], x[1], x[2]};
    for (const auto& g : curve.generators)
        if (std::fabs(eval(g, pt)) > curve.snap_tol) return false;
    return true;
}

} // namespace

ReachTree reachable_set(const DistributionSpec& spec, const MartinetData& md,
                        const std::array<double, 3>& x0, double budget,
                        const ReachOptions& opts) {
    {
        // x0 must lie on Sigma (checked in floating point; exact check is the
        // caller's job when the point is rational)
        std::vector<double> pt{x0[0], x0[1], x0[2]};
        if (std::fabs(eval(md.h, pt)) > 1e-9)
            throw std::invalid_argument("reachable_set: x0 does not lie on the Martinet surface");
    }
    PolyVectorField Z = characteristic_field(spec, md);
    std::array<std::array<Poly, 3>, 3> JZ;
    for (int m = 0; m < 3; ++m)
        for (int j = 0; j < 3; ++j) JZ[m][j] = partial(Z.comp[m], j);

    ReachTree tree;
    tree.vertices.push_back({x0, "root"});

    std::deque<Job> queue;
    auto z0v = eval(Z, std::vector<double>{x0[0], x0[1], x0[2]});
    std::array<double, 3> z0{z0v[0], z0v[1], z0v[2]};
    if (budget <= 0) return tree;
    if (norm3(z0) >= opts.field_floor) {
        queue.push_back({x0, +1, budget, 0, {0, 0, 0}, false});
        queue.push_back({x0, -1, budget, 0, {0, 0, 0}, false});
    } else {
        tree.vertices[0].kind = "root_singular";
        // branch straight from the root along eigen-directions below
        Job j{x0, +1, budget, 0, {0, 0, 0}, false};
        // handled by the vertex expansion path: reuse it by marking the root
        // as a singular arrival with no incoming edge
        (void)j;
    }

    auto spawn_from_vertex = [&](int vertex_id, const std::array<double, 3>& vx,
                                 double remaining,
                                 const std::vector<std::array<double, 3>>& dirs,
                                 const std::array<double, 3>& incoming, bool has_incoming) {
        for (const auto& d : dirs) {
            double dn = norm3(d);
            if (dn < 1e-14) continue;
            std::array<double, 3> unit{d[0] / dn, d[1] / dn, d[2] / dn};
            if (has_incoming && dot3(unit, incoming) < -0.9) continue; // retraces the arrival
            std::array<double, 3> start{vx[0] + opts.restart_eps * unit[0],
                                        vx[1] + opts.restart_eps * unit[1],
                                        vx[2] + opts.restart_eps * unit[2]};
            auto zv = eval(Z, std::vector<double>{start[0], start[1], start[2]});
            std::array<double, 3> z{zv[0], zv[1], zv[2]};
            double align = dot3(z, unit);
            if (std::fabs(align) < 1e-14) continue; // no outgoing motion on this side
            int orientation = align > 0 ? +1 : -1;
            // moving away from the vertex along +-Z
            double cost = opts.restart_eps;
            if (remaining <= cost) continue;
            queue.push_back({start, orientation, remaining - cost, vertex_id, unit, true});
        }
    };

    // a singular root: branch along the eigenvector directions immediately
    if (tree.vertices[0].kind == "root_singular") {
        std::vector<std::array<double, 3>> dirs;
        Eigen::Matrix3d J;
        for (int m = 0; m < 3; ++m)
            for (int j = 0; j < 3; ++j)
                J(m, j) = eval(JZ[m][j], std::vector<double>{x0[0], x0[1], x0[2]});
        Eigen::EigenSolver<Eigen::Matrix3d> es(J);
        for (int i = 0; i < 3; ++i) {
            if (std::fabs(es.eigenvalues()(i).imag()) > 1e-10) continue;
            if (std::fabs(es.eigenvalues()(i).real()) < 1e-10) continue;
            Eigen::Vector3d v = es.eigenvectors().col(i).real();
            dirs.push_back({v(0), v(1), v(2)});
            dirs.push_back({-v(0), -v(1), -v(2)});
        }
        spawn_from_vertex(0, x0, budget, dirs, {0, 0, 0}, false);
    }

    int branches = 0;
    while (!queue.empty()) {
        if (++branches > opts.max_branches) {
            tree.truncated = true;
            tree.flags.push_back("max_branches");
            break;
        }
        Job job = queue.front();
        queue.pop_front();

        StopSpec stop = StopSpec::at_length(job.remaining);
        stop.field_floor = opts.field_floor;
        Trajectory traj = integrate_field(Z, {job.start[0], job.start[1], job.start[2]},
                                          job.orientation, stop, opts.tol);

        ReachEdge edge;
        edge.from_vertex = job.from_vertex;
        for (const auto& p : traj.points) edge.polyline.push_back(p);
        edge.length = traj.length();
        tree.total_length += edge.length;

        std::array<double, 3> endpoint = traj.endpoint();
        bool stalled = false;
        for (const auto& f : traj.flags)
            if (f == "singular_stall" || f == "step_underflow") stalled = true;

        if (!stalled) {
            edge.termination = traj.flags.empty() ? "budget" : traj.flags.front();
            tree.edges.push_back(std::move(edge));
            continue;
        }

        double used = edge.length;
        double remaining = job.remaining - used;

        // incoming unit direction at the stall
        std::array<double, 3> incoming{0, 0, 0};
        if (traj.size() >= 2) {
            incoming = sub3(endpoint, traj.points[traj.size() - 2]);
            double n = norm3(incoming);
            if (n > 1e-300) for (auto& c : incoming) c /= n;
        }

        // declared Sigma^1_tr curve?
        bool handled = false;
        for (const auto& curve : opts.sigma1tr) {
            if (!near_curve(curve, endpoint)) continue;
            auto vx = snap_to_curve(curve, endpoint);
            int vid = static_cast<int>(tree.vertices.size());
            tree.vertices.push_back({vx, "sigma1tr"});
            edge.to_vertex = vid;
            edge.termination = "vertex";
            tree.edges.push_back(std::move(edge));
            if (remaining > 0)
                spawn_from_vertex(vid, vx, remaining, curve.sheet_dirs, incoming, true);
            else
                tree.flags.push_back("budget_exhausted_at_branch");
            handled = true;
            break;
        }
        if (handled) continue;

        // exact Sigma^0 candidate?
        for (const auto& cand : opts.singular_candidates) {
            std::array<double, 3> cx{cand[0].to_double(), cand[1].to_double(), cand[2].to_double()};
            if (norm3(sub3(endpoint, cx)) > 1e-3) continue;
            std::vector<Rational> cpt{cand[0], cand[1], cand[2]};
            auto zc = eval(Z, cpt);
            if (!zc[0].is_zero() || !zc[1].is_zero() || !zc[2].is_zero()) continue;
            int vid = static_cast<int>(tree.vertices.size());
            tree.vertices.push_back({cx, "sigma0"});
            edge.to_vertex = vid;
            edge.termination = "vertex";
            tree.edges.push_back(std::move(edge));
            if (remaining > 0) {
                Eigen::Matrix3d J;
                for (int m = 0; m < 3; ++m)
                    for (int j = 0; j < 3; ++j) J(m, j) = eval(JZ[m][j], cpt).to_double();
                Eigen::EigenSolver<Eigen::Matrix3d> es(J);
                std::vector<std::array<double, 3>> dirs;
                for (int i = 0; i < 3; ++i) {
                    if (std::fabs(es.eigenvalues()(i).imag()) > 1e-10) continue;
                    if (std::fabs(es.eigenvalues()(i).real()) < 1e-10) continue;
                    Eigen::Vector3d v = es.eigenvectors().col(i).real();
                    dirs.push_back({v(0), v(1), v(2)});
                    dirs.push_back({-v(0), -v(1), -v(2)});
                }
                spawn_from_vertex(vid, cx, remaining, dirs, incoming, true);
            }
            handled = true;
            break;
        }
        if (handled) continue;

        // unresolved stall: flagged vertex, no branching
        int vid = static_cast<int>(tree.vertices.size());
        tree.vertices.push_back({endpoint, "flagged"});
        edge.to_vertex = vid;
        edge.termination = "flagged:" + (traj.flags.empty() ? std::string("stall") : traj.flags.front());
        tree.edges.push_back(std::move(edge));
        tree.truncated = true;
    }
    return tree;
}

} // namespace martinet
