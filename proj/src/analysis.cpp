#include "hopf/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hopf {

namespace {

std::string fmt(double v, int prec) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

std::string fmt17(double v) { return fmt(v, 17); }
std::string fmt12(double v) { return fmt(v, 12); }

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void write_complex(std::ostringstream& out, cx v) {
    out << '[' << fmt17(v.real()) << ", " << fmt17(v.imag()) << ']';
}

void write_cvec(std::ostringstream& out, const CVec& v) {
    out << '[';
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        write_complex(out, v[i]);
    }
    out << ']';
}

void write_string_array(std::ostringstream& out, const std::vector<std::string>& v) {
    out << '[';
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        out << '"' << json_escape(v[i]) << '"';
    }
    out << ']';
}

const char* class_name(eig_class c) {
    switch (c) {
        case eig_class::critical_pair: return "critical-pair";
        case eig_class::zero_real_other: return "zero-real-part-other";
        case eig_class::stable: return "stable";
        case eig_class::unstable: return "unstable";
    }
    return "?";
}

constexpr const char* kGKeys[4] = {"21", "32", "43", "54"};

} // namespace

RVec refine_equilibrium(const ProblemSpec& spec) {
    if (spec.equilibrium_values) {
        const RVec& x = *spec.equilibrium_values;
        RVec f = spec.field.evaluate_field(x, spec.parameter_values);
        RMat J = spec.field.jacobian_at(x, spec.parameter_values);
        double tol = 1e-10 * (1.0 + norm_inf(J));
        if (norm_inf(f) > tol)
            throw precondition_error("declared equilibrium has residual " +
                                     std::to_string(norm_inf(f)) + ", tolerance " +
                                     std::to_string(tol));
        return x;
    }
    return newton_equilibrium(spec.field, spec.parameter_values, *spec.equilibrium_guess);
}

AnalysisReport analyze(const ProblemSpec& spec) {
    auto t0 = std::chrono::steady_clock::now();

    AnalysisReport rep;
    rep.level = spec.level;
    rep.equilibrium = refine_equilibrium(spec);

    HomogeneousModel model = taylor_model(spec.field, rep.equilibrium, spec.parameter_values,
                                          2 * spec.level + 1);
    rep.equilibrium_residual = model.equilibrium_residual();

    const RMat& A = model.jacobian_matrix();
    rep.spectrum = eigen_all(A, spec.options.eig_tol);
    CriticalPair pair = critical_pair(A, rep.spectrum);
    rep.omega0 = pair.omega0;
    rep.q = pair.q;
    rep.p = pair.p;

    rep.table = center_manifold(model, pair, spec.level);
    LyapunovSet ls = lyapunov(rep.table, spec.level);
    rep.G = rep.table.G;
    rep.l = ls.l;
    rep.caveats = ls.caveats;
    rep.master_residual = rep.table.master_residual;
    rep.per_jk_residual = rep.table.master_per_jk;
    rep.diagnostics = rep.table.diagnostics;

    double res_budget = spec.options.res_tol * model.coefficient_scale();
    if (rep.master_residual > res_budget)
        rep.warnings.push_back("master homological residual " + fmt12(rep.master_residual) +
                               " exceeds budget " + fmt12(res_budget));
    for (const SolveDiagnostic& d : rep.diagnostics) {
        if (d.bordered && d.compat_defect > 1e-8 * (1.0 + d.rhs_norm))
            rep.warnings.push_back("bordered compatibility defect " + fmt12(d.compat_defect) +
                                   " at coefficient (" + std::to_string(d.j) + "," +
                                   std::to_string(d.k) + ")");
    }

    rep.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                          .count();
    return rep;
}

std::string emit_report(const AnalysisReport& rep, report_format format) {
    std::ostringstream out;
    if (format == report_format::json) {
        out << "{\"omega0\": " << fmt17(rep.omega0) << ", \"eigenvalues\": [";
        for (size_t i = 0; i < rep.spectrum.values.size(); ++i) {
            if (i) out << ", ";
            write_complex(out, rep.spectrum.values[i]);
        }
        out << "], \"q\": ";
        write_cvec(out, rep.q);
        out << ", \"p\": ";
        write_cvec(out, rep.p);
        out << ", \"G\": {";
        for (int k = 1; k <= rep.level; ++k) {
            if (k > 1) out << ", ";
            out << '"' << kGKeys[k - 1] << "\": ";
            write_complex(out, rep.G[k - 1]);
        }
        out << "}, \"l\": {";
        for (int k = 1; k <= rep.level; ++k) {
            if (k > 1) out << ", ";
            out << '"' << k << "\": " << fmt17(rep.l[k - 1]);
        }
        out << "}, \"caveats\": ";
        write_string_array(out, rep.caveats);
        out << ", \"residuals\": {\"master\": " << fmt17(rep.master_residual) << ", \"per_jk\": {";
        bool first = true;
        for (const auto& [jk, v] : rep.per_jk_residual) {
            if (!first) out << ", ";
            first = false;
            out << '"' << jk.first << ',' << jk.second << "\": " << fmt17(v);
        }
        out << "}}, \"warnings\": ";
        write_string_array(out, rep.warnings);
        out << ", \"duration_ms\": 0}";
        return out.str();
    }

    out << "Hopf coefficient analysis (level " << rep.level << ")\n";
    out << "equilibrium:";
    for (double x : rep.equilibrium) out << ' ' << fmt12(x);
    out << "   residual " << fmt12(rep.equilibrium_residual) << '\n';
    out << "omega0: " << fmt12(rep.omega0) << '\n';
    out << "eigenvalues:\n";
    for (size_t i = 0; i < rep.spectrum.values.size(); ++i) {
        const cx& v = rep.spectrum.values[i];
        out << "  " << fmt12(v.real()) << (v.imag() < 0 ? " - " : " + ")
            << fmt12(std::abs(v.imag())) << "i   [" << class_name(rep.spectrum.classes[i]) << "]\n";
    }
    auto print_cvec = [&](const char* name, const CVec& v) {
        out << name << ':';
        for (const cx& c : v)
            out << "  (" << fmt12(c.real()) << ", " << fmt12(c.imag()) << ')';
        out << '\n';
    };
    print_cvec("q", rep.q);
    print_cvec("p", rep.p);
    for (int k = 1; k <= rep.level; ++k) {
        out << 'G' << kGKeys[k - 1] << " = " << fmt12(rep.G[k - 1].real())
            << (rep.G[k - 1].imag() < 0 ? " - " : " + ") << fmt12(std::abs(rep.G[k - 1].imag()))
            << "i    l" << k << " = " << fmt12(rep.l[k - 1]) << '\n';
    }
    out << "caveats:";
    if (rep.caveats.empty()) out << " none";
    out << '\n';
    for (const std::string& c : rep.caveats) out << "  " << c << '\n';
    out << "master residual: " << fmt12(rep.master_residual) << '\n';
    out << "per-coefficient residuals:";
    for (const auto& [jk, v] : rep.per_jk_residual)
        out << " (" << jk.first << ',' << jk.second << ") " << fmt12(v);
    out << '\n';
    out << "warnings:";
    if (rep.warnings.empty()) out << " none";
    out << '\n';
    for (const std::string& w : rep.warnings) out << "  " << w << '\n';
    out << "duration_ms: 0\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// sweep

namespace {

struct RowSeed {
    RVec equilibrium;
    cx lambda = 0.0;
    bool valid = false;
};

SweepRow analyze_continued(const ProblemSpec& spec, int param_index, double value,
                           const RowSeed* seed, RowSeed* out_seed) {
    SweepRow row;
    row.param = value;
    row.level = spec.level;
    try {
        RVec mu = spec.parameter_values;
        mu[param_index] = value;

        RVec eq;
        if (seed && seed->valid) {
            eq = newton_equilibrium(spec.field, mu, seed->equilibrium);
        } else {
            ProblemSpec local = spec;
            local.parameter_values = mu;
            eq = refine_equilibrium(local);
        }

        HomogeneousModel model = taylor_model(spec.field, eq, mu, 2 * spec.level + 1);
        const RMat& A = model.jacobian_matrix();
        Spectrum sp = eigen_all(A, spec.options.eig_tol);

        cx target;
        if (seed && seed->valid) {
            target = seed->lambda;
        } else {
            bool found = false;
            for (const cx& v : sp.values) {
                if (v.imag() > sp.purity_tol &&
                    (!found || std::abs(v.real()) < std::abs(target.real()))) {
                    target = v;
                    found = true;
                }
            }
            if (!found)
                throw precondition_error("no oscillatory eigenvalue pair at this grid point");
        }
        TrackedPair tp = track_pair(A, target);
        cx lambda_use = std::abs(tp.lambda.real()) <= sp.purity_tol
                            ? cx(0.0, tp.lambda.imag())
                            : tp.lambda;

        CenterManifoldTable table =
            center_manifold_shifted(model, lambda_use, tp.q, tp.p, spec.level);
        LyapunovSet ls = lyapunov(table, spec.level);

        row.ok = true;
        row.eta = tp.lambda.real();
        row.l = ls.l;
        row.equilibrium = eq;
        if (out_seed) {
            out_seed->equilibrium = eq;
            out_seed->lambda = tp.lambda;
            out_seed->valid = true;
        }
    } catch (const error& e) {
        row.ok = false;
        row.error = e.what();
    }
    return row;
}

int locate_index(const std::string& target) {
    if (target == "l1") return 1;
    if (target == "l2") return 2;
    if (target == "l3") return 3;
    if (target == "l4") return 4;
    throw precondition_error("locate target must be one of l1, l2, l3, l4");
}

} // namespace

SweepResult sweep(const ProblemSpec& spec, const std::string& parameter, double from, double to,
                  int steps, const std::string& locate_target, bool independent) {
    int idx = spec.field.parameter_index(parameter);
    if (idx < 0) throw precondition_error("parameter '" + parameter + "' is not declared");
    if (steps < 2) throw precondition_error("sweep needs at least 2 steps");
    int target_k = 0;
    if (!locate_target.empty()) {
        target_k = locate_index(locate_target);
        if (target_k > spec.level)
            throw precondition_error("locate target " + locate_target +
                                     " exceeds the requested level " + std::to_string(spec.level));
    }

    SweepResult result;
    result.level = spec.level;

    RowSeed seed;
    for (int i = 0; i < steps; ++i) {
        double value = from + (to - from) * double(i) / double(steps - 1);
        RowSeed next;
        const RowSeed* use_seed = (independent || !seed.valid) ? nullptr : &seed;
        SweepRow row = analyze_continued(spec, idx, value, use_seed, &next);
        if (row.ok && !independent) seed = next;
        result.rows.push_back(std::move(row));
    }

    if (target_k == 0) return result;

    for (size_t i = 0; i + 1 < result.rows.size(); ++i) {
        const SweepRow& ra = result.rows[i];
        const SweepRow& rb = result.rows[i + 1];
        if (!ra.ok || !rb.ok) continue;
        double fa = ra.l[target_k - 1];
        double fb = rb.l[target_k - 1];
        if (fa == 0.0) {
            result.zeros.push_back({locate_target, true, ra.param, 0, 0.0, ""});
            continue;
        }
        if (fa * fb >= 0.0) continue;

        LocateResult loc;
        loc.target = locate_target;

        double lo = ra.param, flo = fa;
        double hi = rb.param, fhi = fb;
        double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
        RowSeed local_seed;
        local_seed.equilibrium = ra.equilibrium;
        local_seed.lambda = cx(ra.eta, 0.0); // refreshed below on first evaluation
        local_seed.valid = false;

        int non_contracting = 0;
        bool bisect_only = false;
        bool failed = false;
        int it = 0;
        for (; it < 60; ++it) {
            if (std::abs(f1) <= 1e-10) break;
            double x2;
            if (!bisect_only && f1 != f0) {
                x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
                if (!(x2 > std::min(lo, hi) && x2 < std::max(lo, hi))) x2 = 0.5 * (lo + hi);
            } else {
                x2 = 0.5 * (lo + hi);
            }
            RowSeed next;
            const RowSeed* s = local_seed.valid ? &local_seed : nullptr;
            SweepRow probe = analyze_continued(spec, idx, x2, s, &next);
            if (!probe.ok) {
                loc.message = "evaluation failed at " + fmt12(x2) + ": " + probe.error;
                failed = true;
                break;
            }
            local_seed = next;
            double f2 = probe.l[target_k - 1];
            if ((f2 > 0) == (flo > 0)) {
                lo = x2;
                flo = f2;
            } else {
                hi = x2;
                fhi = f2;
            }
            if (std::abs(f2) >= std::abs(f1)) {
                if (++non_contracting >= 20) bisect_only = true;
            }
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = f2;
        }
        loc.iterations = it;
        loc.residual = std::abs(f1);
        loc.zero = x1;
        loc.ok = !failed && std::abs(f1) <= 1e-10;
        if (!loc.ok && loc.message.empty())
            loc.message = "no convergence within 60 iterations (|" + locate_target +
                          "| = " + fmt12(loc.residual) + ")";
        result.zeros.push_back(std::move(loc));
    }
    return result;
}

std::string emit_sweep(const SweepResult& result, report_format format) {
    std::ostringstream out;
    if (format == report_format::json) {
        for (const SweepRow& r : result.rows) {
            out << "{\"param\": " << fmt17(r.param) << ", \"status\": \""
                << (r.ok ? "ok" : "failed") << '"';
            if (r.ok) {
                out << ", \"eta\": " << fmt17(r.eta) << ", \"l\": {";
                for (int k = 1; k <= result.level; ++k) {
                    if (k > 1) out << ", ";
                    out << '"' << k << "\": " << fmt17(r.l[k - 1]);
                }
                out << '}';
            } else {
                out << ", \"error\": \"" << json_escape(r.error) << '"';
            }
            out << "}\n";
        }
        for (const LocateResult& z : result.zeros) {
            out << "{\"locate\": \"" << z.target << "\", \"status\": \""
                << (z.ok ? "ok" : "failed") << '"';
            if (z.ok)
                out << ", \"zero\": " << fmt17(z.zero) << ", \"iterations\": " << z.iterations
                    << ", \"residual\": " << fmt17(z.residual);
            else
                out << ", \"message\": \"" << json_escape(z.message) << '"';
            out << "}\n";
        }
        return out.str();
    }

    out << "param,eta";
    for (int k = 1; k <= result.level; ++k) out << ",l" << k;
    out << ",status\n";
    for (const SweepRow& r : result.rows) {
        out << fmt12(r.param) << ',';
        if (r.ok) {
            out << fmt12(r.eta);
            for (int k = 1; k <= result.level; ++k) out << ',' << fmt12(r.l[k - 1]);
            out << ",ok\n";
        } else {
            for (int k = 0; k <= result.level; ++k) out << ',';
            out << "failed\n";
        }
    }
    for (const LocateResult& z : result.zeros) {
        if (z.ok)
            out << "# located " << z.target << " zero at " << fmt12(z.zero) << " (iterations "
                << z.iterations << ", residual " << fmt12(z.residual) << ")\n";
        else
            out << "# locate " << z.target << " failed: " << z.message << '\n';
    }
    return out.str();
}

TransversalityReport run_transversality(const ProblemSpec& spec) {
    RVec eq0 = refine_equilibrium(spec);
    return transversality(spec.field, spec.parameter_values, eq0, spec.level);
}

std::string emit_transversality(const TransversalityReport& rep, report_format format) {
    std::ostringstream out;
    if (format == report_format::json) {
        out << "{\"level\": " << rep.level << ", \"omega0\": " << fmt17(rep.omega0)
            << ", \"jacobian\": [";
        for (int r = 0; r < rep.jacobian.rows; ++r) {
            if (r) out << ", ";
            out << '[';
            for (int c = 0; c < rep.jacobian.cols; ++c) {
                if (c) out << ", ";
                out << fmt17(rep.jacobian(r, c));
            }
            out << ']';
        }
        out << "], \"singular_values\": [";
        for (size_t i = 0; i < rep.sigma.size(); ++i) {
            if (i) out << ", ";
            out << fmt17(rep.sigma[i]);
        }
        out << "], \"rank_ratio\": " << fmt17(rep.rank_ratio)
            << ", \"full_rank\": " << (rep.full_rank ? "true" : "false") << '}';
        return out.str();
    }
    out << "transversality report (level " << rep.level << ")\n";
    out << "mu0:";
    for (double m : rep.mu0) out << ' ' << fmt12(m);
    out << '\n';
    out << "omega0: " << fmt12(rep.omega0) << '\n';
    out << "jacobian of mu -> (eta";
    for (int k = 1; k < rep.level; ++k) out << ", l" << k;
    out << "):\n";
    for (int r = 0; r < rep.jacobian.rows; ++r) {
        out << " ";
        for (int c = 0; c < rep.jacobian.cols; ++c) out << ' ' << fmt12(rep.jacobian(r, c));
        out << '\n';
    }
    out << "singular values:";
    for (double s : rep.sigma) out << ' ' << fmt12(s);
    out << '\n';
    out << "sigma_min/sigma_max: " << fmt12(rep.rank_ratio) << '\n';
    out << "full rank: " << (rep.full_rank ? "yes" : "no") << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// check

CheckResult check_problem(const ProblemSpec& spec) {
    CheckResult res;
    res.report = analyze(spec);
    const AnalysisReport& rep = res.report;

    // the closed-form battery reaches h43, which lives in a level-4 table
    HomogeneousModel model = taylor_model(spec.field, rep.equilibrium, spec.parameter_values, 9);
    Spectrum sp = eigen_all(model.jacobian_matrix(), spec.options.eig_tol);
    CriticalPair pair = critical_pair(model.jacobian_matrix(), sp);

    auto record = [&](const std::string& what, bool ok) {
        res.checks.emplace_back(what, ok);
        res.all_passed = res.all_passed && ok;
    };

    double scale = model.coefficient_scale();
    record("master homological residual <= " + fmt12(spec.options.res_tol * scale),
           rep.master_residual <= spec.options.res_tol * scale);

    {
        bool ok = true;
        for (const auto& [jk, hv] : rep.table.h) {
            const CVec* mirror = rep.table.coefficient(jk.second, jk.first);
            if (!mirror) {
                ok = false;
                break;
            }
            for (size_t i = 0; i < hv.size(); ++i)
                if (hv[i] != std::conj((*mirror)[i])) ok = false;
        }
        record("h_jk = conj(h_kj) exactly", ok);
    }

    {
        bool ok = true;
        for (int k = 1; k < spec.level; ++k) {
            const CVec* h = rep.table.coefficient(k + 1, k);
            if (h && std::abs(inner(rep.p, *h)) > 1e-10) ok = false;
        }
        record("<p, h_{k+1,k}> = 0 within 1e-10", ok);
    }

    {
        bool ok = true;
        for (const SolveDiagnostic& d : rep.diagnostics) {
            if (!d.bordered) continue;
            double budget = 1e-9 * (1.0 + d.rhs_norm);
            if (d.s_mag > budget || d.residual > budget || d.ortho > 1e-10) ok = false;
        }
        record("bordered solves: |s|, residual within 1e-9*(1+|rhs|), orthogonality 1e-10", ok);
    }

    {
        // closed-form formulas against the recursion
        CenterManifoldTable deep = center_manifold(model, pair, 4);
        ExplicitCoeffs et = explicit_table(model, pair);
        auto close = [](const CVec& a, const CVec& b) {
            CVec d = a;
            d -= b;
            return norm_inf(d) <= 1e-9 * (1.0 + norm_inf(b));
        };
        bool ok = true;
        struct Pair {
            int j, k;
            const CVec* v;
        };
        const Pair items[] = {{1, 1, &et.h11}, {2, 0, &et.h20}, {3, 0, &et.h30}, {2, 1, &et.h21},
                              {4, 0, &et.h40}, {3, 1, &et.h31}, {2, 2, &et.h22}, {3, 2, &et.h32},
                              {4, 1, &et.h41}, {4, 2, &et.h42}, {3, 3, &et.h33}, {4, 3, &et.h43}};
        for (const Pair& it : items) {
            const CVec* engine_h = deep.coefficient(it.j, it.k);
            if (!engine_h || !close(*engine_h, *it.v)) ok = false;
        }
        if (std::abs(deep.G[0] - et.G21) > 1e-9 * (1.0 + std::abs(et.G21))) ok = false;
        if (std::abs(deep.G[1] - et.G32) > 1e-9 * (1.0 + std::abs(et.G32))) ok = false;
        if (std::abs(deep.G[2] - et.G43) > 1e-9 * (1.0 + std::abs(et.G43))) ok = false;
        record("closed-form h11..h43, G21, G32, G43 match the recursion to 1e-9", ok);
    }

    if (spec.field.dimension() == 2) {
        std::array<cx, 4> g = planar_oracle(model, pair, spec.level);
        bool ok = true;
        for (int k = 1; k <= spec.level; ++k)
            if (std::abs(g[k - 1] - rep.G[k - 1]) > 1e-9 * (1.0 + std::abs(g[k - 1]))) ok = false;
        record("planar scalar oracle matches the engine G coefficients to 1e-9", ok);
    }

    {
        // gauge covariance spot check: q -> gamma q multiplies G_{k+1,k} by |gamma|^{2k}
        cx gamma = cx(1.1, 0.6);
        CVec q2 = gamma * pair.q;
        CVec p2 = (1.0 / std::conj(gamma)) * pair.p;
        HomogeneousModel local = taylor_model(spec.field, rep.equilibrium, spec.parameter_values,
                                              2 * spec.level + 1);
        CenterManifoldTable table2 =
            center_manifold_shifted(local, cx(0.0, pair.omega0), q2, p2, spec.level);
        bool ok = true;
        double g2 = std::norm(gamma);
        double factor = 1.0;
        for (int k = 1; k <= spec.level; ++k) {
            factor *= g2;
            cx expect = factor * rep.G[k - 1];
            if (std::abs(table2.G[k - 1] - expect) > 1e-9 * (1.0 + std::abs(expect))) ok = false;
        }
        record("gauge covariance: G_{k+1,k} scales by |gamma|^{2k}", ok);
    }

    return res;
}

std::string emit_check(const CheckResult& result) {
    std::ostringstream out;
    for (const auto& [what, ok] : result.checks)
        out << (ok ? "[PASS] " : "[FAIL] ") << what << '\n';
    for (const std::string& note : result.notes) out << "note: " << note << '\n';
    out << (result.all_passed ? "all checks passed\n" : "CHECKS FAILED\n");
    return out.str();
}

} // namespace hopf
