#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hopf/analysis.hpp"

namespace {

hopf::report_format parse_format(const std::string& f) {
    if (f == "json") return hopf::report_format::json;
    if (f == "text") return hopf::report_format::text;
    throw hopf::schema_error("format must be 'json' or 'text'");
}

void apply_overrides(hopf::ProblemSpec& spec, int order, double tol_eig, double tol_res) {
    if (order != 0) {
        if (order < 1 || order > 4) throw hopf::schema_error("level must be 1..4");
        spec.level = order;
    }
    if (tol_eig > 0) spec.options.eig_tol = tol_eig;
    if (tol_res > 0) spec.options.res_tol = tol_res;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lyapunov coefficients l1..l4 at Hopf equilibria of smooth vector fields"};
    app.require_subcommand(1);

    std::string file, format = "json";
    int order = 0;
    double tol_eig = 0, tol_res = 0;

    auto add_common = [&](CLI::App* cmd, bool with_format) {
        cmd->add_option("file", file, "problem file (JSON)")->required();
        cmd->add_option("--order", order, "coefficient level 1..4 (overrides the file)");
        if (with_format) cmd->add_option("--format", format, "output format: json|text");
        cmd->add_option("--tol-eig", tol_eig, "relative purity tolerance for eigenvalues");
        cmd->add_option("--tol-res", tol_res, "relative master-residual tolerance");
    };

    CLI::App* cmd_analyze = app.add_subcommand("analyze", "run the full coefficient analysis");
    add_common(cmd_analyze, true);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "analyze along a parameter grid");
    add_common(cmd_sweep, true);
    std::string sweep_param, locate;
    double sweep_from = 0, sweep_to = 0;
    int sweep_steps = 0;
    bool independent = false;
    cmd_sweep->add_option("--param", sweep_param, "parameter name")->required();
    cmd_sweep->add_option("--from", sweep_from, "grid start")->required();
    cmd_sweep->add_option("--to", sweep_to, "grid end")->required();
    cmd_sweep->add_option("--steps", sweep_steps, "grid size (>= 2)")->required();
    cmd_sweep->add_option("--locate", locate, "refine zeros of l1|l2|l3|l4");
    cmd_sweep->add_flag("--independent", independent, "fresh Newton per row instead of continuation");

    CLI::App* cmd_trans = app.add_subcommand("transversality",
                                             "finite-difference rank check of mu -> (eta, l1, ...)");
    add_common(cmd_trans, true);

    CLI::App* cmd_check = app.add_subcommand("check", "analyze plus the full invariant suite");
    add_common(cmd_check, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        hopf::ProblemSpec spec = hopf::load_problem(file);
        apply_overrides(spec, order, tol_eig, tol_res);
        auto t0 = std::chrono::steady_clock::now();
        auto elapsed_ms = [&t0]() {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        };

        if (*cmd_analyze) {
            hopf::AnalysisReport rep = hopf::analyze(spec);
            std::cout << hopf::emit_report(rep, parse_format(format));
            if (parse_format(format) == hopf::report_format::json) std::cout << '\n';
            std::fprintf(stderr, "analysis completed in %.1f ms\n", elapsed_ms());
        } else if (*cmd_sweep) {
            hopf::SweepResult res =
                hopf::sweep(spec, sweep_param, sweep_from, sweep_to, sweep_steps, locate,
                            independent);
            std::cout << hopf::emit_sweep(res, parse_format(format));
            std::fprintf(stderr, "sweep completed in %.1f ms\n", elapsed_ms());
        } else if (*cmd_trans) {
            hopf::TransversalityReport rep = hopf::run_transversality(spec);
            std::cout << hopf::emit_transversality(rep, parse_format(format));
            if (parse_format(format) == hopf::report_format::json) std::cout << '\n';
            std::fprintf(stderr, "transversality completed in %.1f ms\n", elapsed_ms());
        } else if (*cmd_check) {
            hopf::CheckResult res = hopf::check_problem(spec);
            std::cout << hopf::emit_check(res);
            std::fprintf(stderr, "check completed in %.1f ms\n", elapsed_ms());
            if (!res.all_passed) return 3;
        }
        return 0;
    } catch (const hopf::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
}
