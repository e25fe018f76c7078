#include "martinet/commands.hpp"

#include "martinet/flow.hpp"
#include "martinet/lift.hpp"
#include "martinet/poly_gcd.hpp"
#include "martinet/poly_parse.hpp"
#include "martinet/reach.hpp"
#include "martinet/report.hpp"

#include <cstdio>
#include <fstream>
#include <random>

namespace martinet {

namespace {

using nlohmann::json;

const std::vector<std::string> kVars3{"x1", "x2", "x3"};
const std::vector<std::string> kVars2{"x", "y"};

std::vector<Rational> rational_point(const TomlValue& v, size_t dim) {
    const auto& arr = v.as_array();
    if (arr.size() != dim) throw SpecError("point must have " + std::to_string(dim) + " entries");
    std::vector<Rational> out;
    for (const auto& item : arr) out.push_back(Rational::parse(item.as_string()));
    return out;
}

std::array<double, 3> double_point3(const TomlValue& v) {
    const auto& arr = v.as_array();
    if (arr.size() != 3) throw SpecError("point must have 3 entries");
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) out[i] = arr[i].number_or_string();
    return out;
}

json rational_to_json(const Rational& r) { return json(r.str()); }

json poly3_json(const Poly& p) { return json(print_poly(p, kVars3)); }
json poly2_json(const Poly& p) { return json(print_poly(p, kVars2)); }

std::string csv_path(const CliOptions& opts, const std::string& suffix) {
    return opts.csv_dir + "/" + opts.csv_prefix + "_" + suffix;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write CSV '" + path + "'");
    out << header << "\n";
    char buf[64];
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < traj.size(); ++i) {
        std::vector<double> row{traj.times[i]};
        for (int d = 0; d < traj.dim; ++d) row.push_back(traj.points[i][d]);
        row.push_back(traj.cum_length[i]);
        rows.push_back(std::move(row));
    }
    std::string header = traj.dim == 2 ? "t,u,v,cum_length" : "t,x1,x2,x3,cum_length";
    write_csv(path, header, rows);
}

} // namespace

DistributionSpec build_distribution(const SpecFile& spec) {
    const std::string name =
        spec.has("distribution", "name") ? spec.get("distribution", "name").as_string() : "unnamed";
    const std::string mode = spec.get("distribution", "mode").as_string();
    if (mode == "one_form") {
        const auto& arr = spec.get("distribution", "delta").as_array();
        if (arr.size() != 3) throw SpecError("delta needs 3 coefficient strings");
        std::array<Poly, 3> c{parse_poly(arr[0].as_string(), kVars3),
                              parse_poly(arr[1].as_string(), kVars3),
                              parse_poly(arr[2].as_string(), kVars3)};
        return DistributionSpec::one_form(name, c);
    }
    if (mode == "pair") {
        auto field = [&](const char* key) {
            const auto& arr = spec.get("distribution", key).as_array();
            if (arr.size() != 3) throw SpecError(std::string(key) + " needs 3 component strings");
            return PolyVectorField({parse_poly(arr[0].as_string(), kVars3),
                                    parse_poly(arr[1].as_string(), kVars3),
                                    parse_poly(arr[2].as_string(), kVars3)});
        };
        return DistributionSpec::pair(name, field("X1"), field("X2"));
    }
    throw SpecError("distribution mode must be \"one_form\" or \"pair\"");
}

PlanarField build_planar(const SpecFile& spec) {
    return PlanarField{parse_poly(spec.get("planar", "A").as_string(), kVars2),
                       parse_poly(spec.get("planar", "B").as_string(), kVars2)};
}

namespace {

struct NamedPoint {
    std::string name;
    std::vector<Rational> point;
    std::optional<std::array<Rational, 3>> tangent;
};

std::vector<NamedPoint> collect_points(const SpecFile& spec) {
    std::vector<NamedPoint> out;
    if (!spec.has_section("points")) return out;
    const auto& sec = spec.section("points");
    for (const auto& [key, value] : sec) {
        if (key.size() > 8 && key.substr(key.size() - 8) == "_tangent") continue;
        NamedPoint np;
        np.name = key;
        np.point = rational_point(value, 3);
        auto tkey = key + "_tangent";
        if (sec.count(tkey)) {
            auto t = rational_point(sec.at(tkey), 3);
            np.tangent = std::array<Rational, 3>{t[0], t[1], t[2]};
        }
        out.push_back(std::move(np));
    }
    return out;
}

// h = c * x_i + r with r independent of x_i and c a nonzero constant
std::optional<std::pair<int, Poly>> linear_solvable_variable(const Poly& h) {
    for (int i = 0; i < 3; ++i) {
        Rational c(0);
        Poly rest(3);
        bool ok = true;
        for (const auto& [e, coeff] : h.terms()) {
            if (e[i] == 0) {
                rest.add_term(e, coeff);
            } else if (e[i] == 1 && e[(i + 1) % 3] == 0 && e[(i + 2) % 3] == 0) {
                c = coeff;
            } else {
                ok = false;
                break;
            }
        }
        if (ok && !c.is_zero()) {
            // x_i = -rest / c
            return std::make_pair(i, scale(rest, Rational(-1) / c));
        }
    }
    return std::nullopt;
}

json analyze_results(const SpecFile& spec, const CliOptions& opts, json& warnings) {
    DistributionSpec dist = build_distribution(spec);
    MartinetData md = martinet_function(dist);
    PolyVectorField Z = characteristic_field(dist, md);

    json res;
    res["distribution"] = {{"name", dist.name},
                           {"mode", dist.mode == DistributionSpec::Mode::OneForm ? "one_form" : "pair"}};
    res["h_raw"] = poly3_json(md.h_raw);
    res["h"] = poly3_json(md.h);
    res["gradient"] = {poly3_json(md.gradient[0]), poly3_json(md.gradient[1]),
                       poly3_json(md.gradient[2])};
    res["sigma_empty"] = md.h.is_constant();
    res["Z"] = {poly3_json(Z.comp[0]), poly3_json(Z.comp[1]), poly3_json(Z.comp[2])};
    res["Zh_identically_zero"] = directional(Z, md.h).is_zero();

    std::vector<std::vector<Rational>> candidate_points;
    auto pts = collect_points(spec);
    for (const auto& np : pts) candidate_points.push_back(np.point);
    TangencyLocus tl = tangency_locus(dist, md, candidate_points);
    json tj;
    tj["tangency_system"] = json::array();
    for (const auto& p : tl.tangency_system) tj["tangency_system"].push_back(poly3_json(p));
    tj["singular_system"] = json::array();
    for (const auto& p : tl.singular_system) tj["singular_system"].push_back(poly3_json(p));
    tj["tangency_provably_empty"] = tl.tangency_provably_empty;
    tj["singular_provably_empty"] = tl.singular_provably_empty;
    tj["S_provably_empty"] = tl.tangency_provably_empty && tl.singular_provably_empty;
    res["tangency_locus"] = tj;

    if (!pts.empty()) {
        json pj;
        for (const auto& np : pts) {
            PointDiagnostics d = classify_point(dist, md, np.point, np.tangent);
            json e;
            e["class"] = to_string(d.cls);
            e["h"] = rational_to_json(d.h_value);
            e["grad_h"] = {rational_to_json(d.grad_h[0]), rational_to_json(d.grad_h[1]),
                           rational_to_json(d.grad_h[2])};
            e["X1h"] = rational_to_json(d.X1h);
            e["X2h"] = rational_to_json(d.X2h);
            e["Z"] = {rational_to_json(d.Z_value[0]), rational_to_json(d.Z_value[1]),
                      rational_to_json(d.Z_value[2])};
            if (d.delta_of_tangent) e["delta_of_tangent"] = rational_to_json(*d.delta_of_tangent);
            pj[np.name] = e;
        }
        res["points"] = pj;
    }

    if (spec.has_section("hormander")) {
        auto point = rational_point(spec.get("hormander", "point"), 3);
        int depth = spec.has("hormander", "depth")
                        ? static_cast<int>(spec.get("hormander", "depth").as_number())
                        : 4;
        HormanderResult hr = hormander_check(dist, point, depth);
        res["hormander"] = {{"rank", hr.rank}, {"achieved_depth", hr.achieved_depth}};
    }

    // exact samples of Z on Sigma, when h can be solved linearly
    if (!md.h.is_constant()) {
        if (auto solv = linear_solvable_variable(md.h)) {
            auto [var, expr] = *solv;
            std::mt19937_64 rng(opts.seed);
            std::uniform_int_distribution<int> num(-9, 9);
            std::uniform_int_distribution<int> den(1, 4);
            json samples = json::array();
            for (int k = 0; k < 100; ++k) {
                std::vector<Rational> p(3, Rational(0));
                for (int i = 0; i < 3; ++i)
                    if (i != var) p[i] = Rational(num(rng), static_cast<unsigned long>(den(rng)));
                p[var] = eval(expr, p); // expr ignores x_var
                auto zv = eval(Z, p);
                samples.push_back({rational_to_json(zv[0]), rational_to_json(zv[1]),
                                   rational_to_json(zv[2])});
            }
            res["sigma_samples"] = {{"available", true},
                                    {"count", 100},
                                    {"solved_variable", var},
                                    {"Z_values", samples}};
        } else {
            // sampling needs h solvable as x_i = expr; not a defect of the input
            res["sigma_samples"] = {{"available", false},
                                    {"reason", "h is not linear with a constant coefficient "
                                               "in any variable"}};
        }
    }
    return res;
}

json classify_results(const SpecFile& spec) {
    DistributionSpec dist = build_distribution(spec);
    MartinetData md = martinet_function(dist);
    auto pts = collect_points(spec);
    if (pts.empty()) throw SpecError("classify requires a [points] section");
    json res;
    res["h"] = poly3_json(md.h);
    json pj;
    for (const auto& np : pts) {
        PointDiagnostics d = classify_point(dist, md, np.point, np.tangent);
        json e;
        e["class"] = to_string(d.cls);
        e["h"] = rational_to_json(d.h_value);
        if (d.delta_of_tangent) e["delta_of_tangent"] = rational_to_json(*d.delta_of_tangent);
        pj[np.name] = e;
    }
    res["points"] = pj;
    return res;
}

json sing_json(const SingularityReport& s) {
    json e;
    e["point"] = {s.point[0].str(), s.point[1].str()};
    e["class"] = to_string(s.cls);
    if (s.cls != SingClass::Regular) {
        e["det"] = s.det.str();
        e["trace"] = s.trace.str();
        e["discriminant"] = s.discriminant.str();
    }
    return e;
}

json node_json(const ResolutionNode& node) {
    json e;
    e["field"] = {{"A", poly2_json(node.field.A)}, {"B", poly2_json(node.field.B)}};
    e["depth"] = node.depth;
    if (node.chart) {
        const auto& c = *node.chart;
        e["chart"] = {{"index", c.chart},
                      {"center", {c.center[0].str(), c.center[1].str()}},
                      {"map", {poly2_json(c.map.comp[0]), poly2_json(c.map.comp[1])}},
                      {"divisor_exponent", c.divisor_exponent},
                      {"dicritical", c.dicritical}};
    }
    e["singularities"] = json::array();
    for (const auto& s : node.singularities) e["singularities"].push_back(sing_json(s));
    if (!node.flags.empty()) e["flags"] = node.flags;
    e["children"] = json::array();
    for (const auto& c : node.children) e["children"].push_back(node_json(*c));
    return e;
}

json resolve_results(const SpecFile& spec, const CliOptions& opts) {
    PlanarField Z = build_planar(spec);
    int max_depth = opts.max_depth.value_or(
        spec.has("planar", "max_depth")
            ? static_cast<int>(spec.get("planar", "max_depth").as_number())
            : 8);
    std::vector<std::array<Rational, 2>> candidates;
    if (spec.has("planar", "candidates")) {
        for (const auto& item : spec.get("planar", "candidates").as_array()) {
            auto p = rational_point(item, 2);
            candidates.push_back({p[0], p[1]});
        }
    }
    ResolutionTree tree = resolve(Z, max_depth, candidates);
    json res;
    res["input"] = {{"A", poly2_json(Z.A)}, {"B", poly2_json(Z.B)}};
    res["monomial_alpha"] = tree.monomial_alpha;
    res["monomial_beta"] = tree.monomial_beta;
    res["depth"] = tree.depth;
    res["depth_cap_hit"] = tree.depth_cap_hit;
    res["irrational_points"] = tree.irrational_points;
    res["resolved"] = tree.resolved;
    res["leaves_all_saddles"] = tree.leaves_all_saddles;
    res["tree"] = node_json(*tree.root);
    return res;
}

json membership_json(const DivergenceMembership& m) {
    json e;
    switch (m.kind) {
        case DivergenceMembership::Kind::Witness:
            e["kind"] = "witness";
            e["f"] = poly2_json(m.f);
            e["g"] = poly2_json(m.g);
            break;
        case DivergenceMembership::Kind::NumericBound:
            e["kind"] = "numeric_bound";
            e["residual"] = m.residual;
            e["K_estimate"] = m.K_estimate;
            e["reason"] = m.reason;
            break;
        case DivergenceMembership::Kind::Fail:
            e["kind"] = "fail";
            e["reason"] = m.reason;
            break;
    }
    return e;
}

json divcheck_results(const SpecFile& spec, const CliOptions& opts) {
    PlanarField Z = build_planar(spec);
    int max_deg = spec.has("planar", "max_deg")
                      ? static_cast<int>(spec.get("planar", "max_deg").as_number())
                      : 4;
    (void)opts;
    json res;
    res["divergence"] = poly2_json(divergence(PolyVectorField({Z.A, Z.B})));
    res["membership"] = membership_json(divergence_membership(Z, max_deg));
    FinalSingularityReport fr = final_singularity_check(Z, max_deg);
    json f;
    f["alpha"] = fr.alpha;
    f["beta"] = fr.beta;
    f["reduced"] = {{"A", poly2_json(fr.reduced.A)}, {"B", poly2_json(fr.reduced.B)}};
    f["tangency_x_ok"] = fr.tangency_x_ok;
    f["tangency_y_ok"] = fr.tangency_y_ok;
    f["identity_checked"] = fr.identity_checked;
    f["identity_ok"] = fr.identity_ok;
    f["saddle_confirmed"] = fr.saddle_confirmed;
    if (fr.origin) f["origin"] = sing_json(*fr.origin);
    f["findings"] = fr.findings;
    res["final_check"] = f;
    return res;
}

json trace_results(const SpecFile& spec, const CliOptions& opts, json& artifacts) {
    PlanarField Zp = build_planar(spec);
    PolyVectorField field({Zp.A, Zp.B});
    double r0 = spec.has("trace", "r0") ? spec.get("trace", "r0").number_or_string() : 0.5;
    int returns = opts.returns.value_or(
        spec.has("trace", "returns") ? static_cast<int>(spec.get("trace", "returns").as_number())
                                     : 100);
    int direction = spec.has("trace", "direction")
                        ? static_cast<int>(spec.get("trace", "direction").as_number())
                        : 1;
    double tol = opts.tol.value_or(
        spec.has("trace", "tol") ? spec.get("trace", "tol").as_number() : 1e-10);
    Section sec = Section::segment2d({0, 0}, {1, 0});
    if (spec.has("trace", "section")) {
        const auto& arr = spec.get("trace", "section").as_array();
        if (arr.size() != 4) throw SpecError("trace section needs 4 numbers: ax, ay, bx, by");
        sec = Section::segment2d({arr[0].number_or_string(), arr[1].number_or_string()},
                                 {arr[2].number_or_string(), arr[3].number_or_string()});
    }
    MonodromicResult mr = monodromic_length_experiment(field, sec, r0, returns, tol, direction);

    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < mr.lengths.size(); ++k)
        rows.push_back({static_cast<double>(k + 1), mr.s_values[k], mr.lengths[k]});
    std::string returns_csv = csv_path(opts, "returns.csv");
    write_csv(returns_csv, "k,s,cum_length", rows);

    // short trajectory sample for plotting: first few turns
    StopSpec stop = StopSpec::at_time(6.5 * 3.14159265358979323846);
    Trajectory traj = integrate_field(field, {sec.at(r0)[0], sec.at(r0)[1]}, direction, stop, tol);
    std::string traj_csv = csv_path(opts, "trajectory.csv");
    write_trajectory_csv(traj_csv, traj);

    artifacts.push_back(returns_csv);
    artifacts.push_back(traj_csv);

    json res;
    res["r0"] = r0;
    res["returns_requested"] = returns;
    res["returns_completed"] = static_cast<int>(mr.lengths.size());
    res["complete"] = mr.complete;
    res["fit_exponent"] = mr.fit_exponent;
    res["lengths"] = mr.lengths;
    res["s_values"] = mr.s_values;
    res["csv"] = {{"returns", opts.csv_prefix + "_returns.csv"},
                  {"trajectory", opts.csv_prefix + "_trajectory.csv"}};
    return res;
}

json reach_results(const SpecFile& spec, const CliOptions& opts, json& artifacts) {
    DistributionSpec dist = build_distribution(spec);
    MartinetData md = martinet_function(dist);
    auto x0 = double_point3(spec.get("reach", "x0"));
    double budget = spec.get("reach", "budget").as_number();
    ReachOptions ropts;
    if (opts.tol) ropts.tol = *opts.tol;
    if (spec.has("reach", "restart_eps"))
        ropts.restart_eps = spec.get("reach", "restart_eps").as_number();
    if (spec.has("reach", "field_floor"))
        ropts.field_floor = spec.get("reach", "field_floor").as_number();
    // declared sigma^1_tr curves: curveN_generators / curveN_sheets
    for (int n = 1;; ++n) {
        std::string gkey = "curve" + std::to_string(n) + "_generators";
        std::string skey = "curve" + std::to_string(n) + "_sheets";
        if (!spec.has("reach", gkey)) break;
        DeclaredCurve c;
        for (const auto& s : spec.get("reach", gkey).as_array())
            c.generators.push_back(parse_poly(s.as_string(), kVars3));
        if (spec.has("reach", skey)) {
            for (const auto& dir : spec.get("reach", skey).as_array())
                c.sheet_dirs.push_back(double_point3(dir));
        }
        ropts.sigma1tr.push_back(std::move(c));
    }
    if (spec.has("reach", "singular_candidates")) {
        for (const auto& item : spec.get("reach", "singular_candidates").as_array()) {
            auto p = rational_point(item, 3);
            ropts.singular_candidates.push_back({p[0], p[1], p[2]});
        }
    }
    ReachTree tree = reachable_set(dist, md, x0, budget, ropts);

    json res;
    res["x0"] = {x0[0], x0[1], x0[2]};
    res["budget"] = budget;
    res["total_length"] = tree.total_length;
    res["truncated"] = tree.truncated;
    if (!tree.flags.empty()) res["flags"] = tree.flags;
    res["vertices"] = json::array();
    for (const auto& v : tree.vertices)
        res["vertices"].push_back({{"x", {v.x[0], v.x[1], v.x[2]}}, {"kind", v.kind}});
    res["edges"] = json::array();
    for (size_t i = 0; i < tree.edges.size(); ++i) {
        const auto& e = tree.edges[i];
        std::string name = opts.csv_prefix + "_edge" + std::to_string(i) + ".csv";
        std::vector<std::vector<double>> rows;
        for (const auto& p : e.polyline) rows.push_back({p[0], p[1], p[2]});
        write_csv(opts.csv_dir + "/" + name, "x1,x2,x3", rows);
        artifacts.push_back(opts.csv_dir + "/" + name);
        json ej;
        ej["from"] = e.from_vertex;
        ej["to"] = e.to_vertex;
        ej["length"] = e.length;
        ej["termination"] = e.termination;
        ej["endpoint"] = {e.polyline.back()[0], e.polyline.back()[1], e.polyline.back()[2]};
        ej["polyline_csv"] = name;
        res["edges"].push_back(ej);
    }
    return res;
}

json endpoint_results(const SpecFile& spec, const CliOptions& opts) {
    DistributionSpec dist = build_distribution(spec);
    auto x0 = double_point3(spec.get("endpoint", "x0"));
    int segments = spec.has("endpoint", "segments")
                       ? static_cast<int>(spec.get("endpoint", "segments").as_number())
                       : 16;
    Control control;
    const auto& u = spec.get("endpoint", "u").as_array();
    if (u.size() == 1) {
        // a single pair is replicated over all segments
        const auto& pair = u[0].as_array();
        control = Control::constant({pair[0].number_or_string(), pair[1].number_or_string()},
                                    segments);
    } else if (static_cast<int>(u.size()) == segments) {
        for (const auto& item : u) {
            const auto& pair = item.as_array();
            control.u.push_back({pair[0].number_or_string(), pair[1].number_or_string()});
        }
    } else {
        throw SpecError("endpoint u must be one pair or `segments` pairs");
    }
    double h_fd = spec.has("endpoint", "h_fd") ? spec.get("endpoint", "h_fd").as_number() : 1e-4;
    double tol_rank = spec.has("endpoint", "tol_rank")
                          ? spec.get("endpoint", "tol_rank").as_number()
                          : 1e-6;
    double tol = opts.tol.value_or(1e-12);
    EndpointRank er = endpoint_rank(dist, x0, control, h_fd, tol_rank, tol);
    json res;
    res["sigma"] = {er.sigma[0], er.sigma[1], er.sigma[2]};
    res["rank"] = er.rank;
    res["endpoint"] = {er.endpoint[0], er.endpoint[1], er.endpoint[2]};
    res["segments"] = segments;
    return res;
}

} // namespace

json run_command(const std::string& command, const SpecFile& spec, const CliOptions& opts) {
    json report;
    report["version"] = kToolVersion;
    report["command"] = command;
    report["input_hash"] = fnv1a_hex(spec.raw_text());
    json warnings = json::array();
    json artifacts = json::array();

    if (command == "analyze") report["results"] = analyze_results(spec, opts, warnings);
    else if (command == "classify") report["results"] = classify_results(spec);
    else if (command == "resolve") report["results"] = resolve_results(spec, opts);
    else if (command == "divcheck") report["results"] = divcheck_results(spec, opts);
    else if (command == "trace") report["results"] = trace_results(spec, opts, artifacts);
    else if (command == "reach") report["results"] = reach_results(spec, opts, artifacts);
    else if (command == "endpoint") report["results"] = endpoint_results(spec, opts);
    else throw SpecError("unknown command '" + command + "'");

    report["warnings"] = warnings;
    if (!artifacts.empty()) report["artifacts"] = artifacts;
    report["seed"] = static_cast<uint64_t>(opts.seed);
    return report;
}

} // namespace martinet
