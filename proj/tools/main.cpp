#include "martinet/commands.hpp"
#include "martinet/poly_gcd.hpp"
#include "martinet/poly_parse.hpp"
#include "martinet/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

int run(const std::string& command, const std::string& spec_path,
        const martinet::CliOptions& opts_in, const std::string& report_path) {
    martinet::SpecFile spec = martinet::SpecFile::load(spec_path);
    martinet::CliOptions opts = opts_in;
    std::filesystem::path rp(report_path);
    opts.csv_dir = rp.has_parent_path() ? rp.parent_path().string() : ".";
    if (opts.csv_dir.empty()) opts.csv_dir = ".";
    opts.csv_prefix = rp.stem().string();
    nlohmann::json report = martinet::run_command(command, spec, opts);
    std::string bytes = martinet::emit_report(report);
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write report to " << report_path << "\n";
        return 1;
    }
    out << bytes;
    std::cout << bytes;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"martinet: Martinet surfaces, characteristic foliations, blow-up "
                 "desingularization and reachable sets for rank-2 polynomial "
                 "distributions on R^3"};
    app.require_subcommand(1);

    martinet::CliOptions opts;
    std::string spec_path;
    std::string report_path = "report.json";
    double tol = 0;
    int max_depth = 0;
    int returns = 0;

    app.add_option("--seed", opts.seed, "seed for any stochastic sampling");
    auto* tol_opt = app.add_option("--tol", tol, "integrator tolerance");
    auto* depth_opt = app.add_option("--max-depth", max_depth, "blow-up depth cap");
    auto* ret_opt = app.add_option("--returns", returns, "number of section returns");
    app.add_option("-o,--out", report_path, "report output path (default report.json)");

    std::vector<std::string> commands{"analyze", "classify", "resolve", "divcheck",
                                      "trace",   "reach",    "endpoint"};
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("spec", spec_path, "spec file (TOML-like)")->required();
        sub->fallthrough(); // global flags may follow the subcommand
        subs[name] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    if (*tol_opt) opts.tol = tol;
    if (*depth_opt) opts.max_depth = max_depth;
    if (*ret_opt) opts.returns = returns;

    std::string command;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) command = name;

    try {
        return run(command, spec_path, opts, report_path);
    } catch (const martinet::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const martinet::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const martinet::DegreeCapError& e) {
        std::cerr << "degree cap: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
