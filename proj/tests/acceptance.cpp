// Acceptance suite: one test case per criterion, each printing a pass/fail
// line with the measured quantities.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "helpers.hpp"
#include "hopf/explicit_formulas.hpp"

using namespace hopf;
using helpers::Rng;

namespace {

helpers::AnalysisAudit g_audit; // accumulated over criteria 1-4

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}


std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void report(int criterion, bool ok, const std::string& what, const std::string& detail) {
    std::printf("criterion %2d [%s] %s — %s\n", criterion, ok ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

cx random_unit_scale(Rng& rng, double lo, double hi, bool pure_imaginary) {
    double re = pure_imaginary ? 0.0
                               : helpers::uniform(rng, lo, hi) *
                                     (helpers::uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0);
    return cx(re, helpers::uniform(rng, -1.0, 1.0));
}

} // namespace

TEST_CASE("criterion 1: linear annihilation") {
    Rng rng(101);
    bool ok = true;
    double worst = 0.0, slowest = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        int n = helpers::uniform_int(rng, 2, 5);
        double w0 = helpers::uniform(rng, 0.5, 2.0);
        VectorFieldSpec f = helpers::linear_field(helpers::hopf_linear_matrix(rng, n, w0));
        RVec origin(n, 0.0);
        auto t0 = std::chrono::steady_clock::now();
        helpers::AnalysisRun run = helpers::run_analysis(f, origin, {}, 4, &g_audit);
        double dt = seconds_since(t0);
        slowest = std::max(slowest, dt);
        for (int k = 1; k <= 4; ++k) worst = std::max(worst, std::abs(run.lyap.l[k - 1]));
        ok = ok && worst <= 1e-12 && dt <= 0.1;
    }
    report(1, ok, "20 random linear fields, |l_k| <= 1e-12",
           "max |l_k| = " + sci(worst) + ", slowest case " + sci(slowest) +
               " s");
    CHECK(ok);
}

TEST_CASE("criterion 2: normal-form oracle level by level") {
    Rng rng(202);
    bool ok = true;
    double worst = 0.0, slowest4 = 0.0;
    for (int level = 1; level <= 4; ++level) {
        for (int trial = 0; trial < 100; ++trial) {
            double w0 = helpers::uniform(rng, 0.5, 2.0);
            std::array<cx, 4> c{};
            for (int k = 1; k < level; ++k) c[k - 1] = random_unit_scale(rng, 0.2, 1.0, true);
            c[level - 1] = random_unit_scale(rng, 0.2, 1.0, false);
            VectorFieldSpec f = normal_form_system(w0, c);
            auto t0 = std::chrono::steady_clock::now();
            helpers::AnalysisRun run = helpers::run_analysis(f, {0, 0}, {}, level, &g_audit);
            double dt = seconds_since(t0);
            if (level == 4) slowest4 = std::max(slowest4, dt);
            for (int k = 1; k <= level; ++k) {
                double err = std::abs(run.lyap.l[k - 1] - c[k - 1].real());
                double budget = 1e-8 * (1.0 + std::abs(c[k - 1]));
                worst = std::max(worst, err / budget);
                ok = ok && err <= budget;
            }
            ok = ok && (level < 4 || dt <= 1.0);
        }
    }
    report(2, ok, "400 normal-form draws, |l_k - Re c_k| <= 1e-8*(1+|c_k|)",
           "worst error/budget = " + sci(worst) + ", slowest level-4 case " +
               sci(slowest4) + " s");
    CHECK(ok);
}

TEST_CASE("criterion 3: embedded and transformed normal forms keep signs") {
    Rng rng(303);
    bool ok = true;
    double slowest = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::array<cx, 4> c{};
        std::array<double, 4> base{};
        for (int k = 0; k < 4; ++k) {
            double re = helpers::uniform(rng, 0.3, 1.0) *
                        (helpers::uniform(rng, 0, 1) < 0.5 ? -1.0 : 1.0);
            c[k] = cx(re, helpers::uniform(rng, -0.5, 0.5));
            base[k] = re; // the engine reports l_k = Re c_k on the planar family
        }
        VectorFieldSpec planar = normal_form_system(helpers::uniform(rng, 0.6, 1.6), c);
        VectorFieldSpec spatial = helpers::embed_planar_in_3d(planar);
        VectorFieldSpec pushed =
            helpers::linear_transform_field(spatial, helpers::random_invertible(rng, 3));

        auto t0 = std::chrono::steady_clock::now();
        helpers::AnalysisRun run = helpers::run_analysis(pushed, {0, 0, 0}, {}, 4, &g_audit);
        double dt = seconds_since(t0);
        slowest = std::max(slowest, dt);
        for (int k = 0; k < 4; ++k) {
            if (std::abs(base[k]) <= 1e-8) continue;
            double ratio = run.lyap.l[k] / base[k];
            ok = ok && ratio > 0.0;
        }
        ok = ok && dt <= 2.0;
    }
    report(3, ok, "20 pushed-forward embeddings preserve sign(l_k) with positive ratios",
           "slowest case " + sci(slowest) + " s");
    CHECK(ok);
}

TEST_CASE("criterion 4: closed forms vs recursion on 50 random systems") {
    Rng rng(404);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        VectorFieldSpec f =
            helpers::random_poly_hopf_field(rng, 3, helpers::uniform(rng, 0.6, 1.7), 7, 8, 0.35);
        RVec origin(3, 0.0);
        HomogeneousModel model = taylor_model(f, origin, {}, 9);
        Spectrum sp = eigen_all(model.jacobian_matrix());
        CriticalPair pair = critical_pair(model.jacobian_matrix(), sp);
        CenterManifoldTable table = center_manifold(model, pair, 4);
        helpers::audit_table(g_audit, table);
        ExplicitCoeffs et = explicit_table(model, pair);

        struct Item {
            int j, k;
            const CVec* v;
        };
        const Item items[] = {{1, 1, &et.h11}, {2, 0, &et.h20}, {3, 0, &et.h30}, {2, 1, &et.h21},
                              {4, 0, &et.h40}, {3, 1, &et.h31}, {2, 2, &et.h22}, {3, 2, &et.h32},
                              {4, 1, &et.h41}, {4, 2, &et.h42}, {3, 3, &et.h33}, {4, 3, &et.h43}};
        for (const Item& it : items) {
            const CVec* engine_h = table.coefficient(it.j, it.k);
            double diff = 0, scale = 0;
            for (size_t i = 0; i < it.v->size(); ++i) {
                diff = std::max(diff, std::abs((*engine_h)[i] - (*it.v)[i]));
                scale = std::max(scale, std::abs((*it.v)[i]));
            }
            worst = std::max(worst, diff / (1.0 + scale));
            ok = ok && diff <= 1e-9 * (1.0 + scale);
        }
        cx gs[3] = {et.G21, et.G32, et.G43};
        for (int k = 0; k < 3; ++k) {
            double diff = std::abs(table.G[k] - gs[k]);
            worst = std::max(worst, diff / (1.0 + std::abs(gs[k])));
            ok = ok && diff <= 1e-9 * (1.0 + std::abs(gs[k]));
        }
    }
    report(4, ok, "h11..h43, G21, G32, G43 agree to 1e-9 relative on 50 systems",
           "worst relative deviation = " + sci(worst));
    CHECK(ok);
}

TEST_CASE("criterion 5: master homological residual on every analysis so far") {
    bool ok = g_audit.analyses > 0 && g_audit.worst_master <= 1e-9;
    report(5, ok,
           "H_w w' + H_wbar wbar' - F(H) stays below 1e-9 * model scale",
           std::to_string(g_audit.analyses) + " analyses, worst normalized residual = " +
               sci(g_audit.worst_master));
    CHECK(ok);
}

TEST_CASE("criterion 6: bordered-solve identities on every analysis so far") {
    bool ok = g_audit.bordered_solves > 0 && g_audit.worst_s <= 1e-9 &&
              g_audit.worst_residual <= 1e-9 && g_audit.worst_ortho <= 1e-10;
    report(6, ok, "|s| and residual <= 1e-9*(1+|rhs|), <p,h> <= 1e-10 on all bordered solves",
           std::to_string(g_audit.bordered_solves) + " solves, worst s = " +
               sci(g_audit.worst_s) + ", worst residual = " +
               sci(g_audit.worst_residual) + ", worst <p,h> = " +
               sci(g_audit.worst_ortho));
    CHECK(ok);
}

TEST_CASE("criterion 7: planar scalar oracle on 50 random systems") {
    Rng rng(707);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        VectorFieldSpec f =
            helpers::random_poly_hopf_field(rng, 2, helpers::uniform(rng, 0.6, 1.8), 9, 10, 0.3);
        HomogeneousModel model = taylor_model(f, {0, 0}, {}, 9);
        Spectrum sp = eigen_all(model.jacobian_matrix());
        CriticalPair pair = critical_pair(model.jacobian_matrix(), sp);
        CenterManifoldTable table = center_manifold(model, pair, 4);
        std::array<cx, 4> g = planar_oracle(model, pair, 4);
        for (int k = 0; k < 4; ++k) {
            double diff = std::abs(table.G[k] - g[k]);
            worst = std::max(worst, diff / (1.0 + std::abs(g[k])));
            ok = ok && diff <= 1e-9 * (1.0 + std::abs(g[k]));
        }
    }
    report(7, ok, "independent planar route matches G21..G54 to 1e-9 relative",
           "worst relative deviation = " + sci(worst));
    CHECK(ok);
}

TEST_CASE("criterion 8: transversality rank detection") {
    VectorFieldSpec family(
        {"x", "y"}, {"mu1", "mu2", "mu3", "mu4"},
        std::vector<std::string>{
            "mu1*x - y + (x^2 + y^2)*(mu2*x - 0.1*y) + (x^2 + y^2)^2*(mu3*x + 0.05*y) + "
            "(x^2 + y^2)^3*(mu4*x - 0.02*y)",
            "x + mu1*y + (x^2 + y^2)*(0.1*x + mu2*y) + (x^2 + y^2)^2*((-0.05)*x + mu3*y) + "
            "(x^2 + y^2)^3*(0.02*x + mu4*y)"});
    TransversalityReport full = transversality(family, {0, 0, 0, 0}, {0, 0}, 4);

    VectorFieldSpec degenerate(
        {"x", "y"}, {"mu1", "mu2", "mu3", "mu4"},
        std::vector<std::string>{
            "mu1*x - y + (x^2 + y^2)*(mu2*x - 0.1*y) + (x^2 + y^2)^2*(mu3*x + 0.05*y) + "
            "(x^2 + y^2)^3*((-0.02)*y)",
            "x + mu1*y + (x^2 + y^2)*(0.1*x + mu2*y) + (x^2 + y^2)^2*((-0.05)*x + mu3*y) + "
            "(x^2 + y^2)^3*(0.02*x)"});
    TransversalityReport broken = transversality(degenerate, {0, 0, 0, 0}, {0, 0}, 4);

    bool ok = full.full_rank && full.rank_ratio > 0.5 && !broken.full_rank;
    report(8, ok, "identity family is full rank (> 0.5); inert parameter is rank deficient",
           "sigma_min/sigma_max = " + sci(full.rank_ratio) + " vs " +
               sci(broken.rank_ratio));
    CHECK(ok);
}

TEST_CASE("criterion 9: sweep locates the constructed l1 zero") {
    ProblemSpec spec = load_problem(std::string(HOPFC_SOURCE_DIR) + "/problems/sweep_family.json");
    SweepResult res = sweep(spec, "mu", 0.0, 1.0, 11, "l1", false);
    bool ok = res.zeros.size() == 1 && res.zeros[0].ok &&
              std::abs(res.zeros[0].zero - 0.3) <= 1e-8 && res.zeros[0].iterations <= 60;
    report(9, ok, "zero of l1(mu) = mu - 0.3 located at 0.3 within 1e-8",
           res.zeros.empty() ? "no zero found"
                             : "zero = " + sci(res.zeros[0].zero) + " after " +
                                   std::to_string(res.zeros[0].iterations) + " iterations");
    CHECK(ok);
}

TEST_CASE("criterion 10: level-4 degree-9 performance and determinism") {
    Rng rng(1010);
    VectorFieldSpec f = helpers::random_poly_hopf_field(rng, 4, 1.3, 9, 35, 0.25);

    ProblemSpec spec{VectorFieldSpec(f.variables(), {}, f.equations()),
                     {},
                     RVec(4, 0.0),
                     std::nullopt,
                     4,
                     {}};

    auto t0 = std::chrono::steady_clock::now();
    AnalysisReport r1 = analyze(spec);
    double dt = seconds_since(t0);

    std::string j1 = emit_report(r1, report_format::json);
    std::string j2 = emit_report(analyze(spec), report_format::json);
    std::string j3 = emit_report(analyze(spec), report_format::json);

    bool ok = dt <= 10.0 && j1 == j2 && j1 == j3 &&
              r1.master_residual <= 1e-9 * r1.table.model_scale;
    report(10, ok, "n = 4, degree 9, level 4 in <= 10 s with byte-identical reports",
           "analysis took " + sci(dt) + " s, report " + std::to_string(j1.size()) +
               " bytes");
    CHECK(ok);
}
