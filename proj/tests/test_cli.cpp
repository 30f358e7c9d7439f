#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "hopf/analysis.hpp"

using namespace hopf;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
    std::string cmd = std::string(HOPFC_BIN) + " " + args + " > /tmp/hopfc_cli_out.txt 2> /tmp/hopfc_cli_err.txt";
    int status = std::system(cmd.c_str());
    if (out) *out = slurp("/tmp/hopfc_cli_out.txt");
    if (err) *err = slurp("/tmp/hopfc_cli_err.txt");
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fixture(const std::string& name) {
    return std::string(HOPFC_SOURCE_DIR) + "/problems/" + name;
}

std::string write_tmp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("load_problem: minimal valid file") {
    ProblemSpec spec = load_problem(fixture("planar_cubic.json"));
    CHECK(spec.field.dimension() == 2);
    CHECK(spec.field.parameter_count() == 0);
    CHECK(spec.level == 1);
    CHECK(spec.equilibrium_values.has_value());
}

TEST_CASE("load_problem: schema violations") {
    std::string base = R"({"variables": ["x", "y"], "equations": ["-y", "x"],
                           "equilibrium": {"values": [0, 0]}, "order": 1})";
    CHECK_NOTHROW(parse_problem(base, "t"));

    CHECK_THROWS_WITH_AS(
        parse_problem(R"({"variables": ["x", "y"], "equations": ["-y", "x", "x"],
                          "equilibrium": {"values": [0, 0]}, "order": 1})",
                      "t"),
        doctest::Contains("3 entries"), schema_error);

    CHECK_THROWS_WITH_AS(
        parse_problem(R"({"variables": ["x", "y"], "equations": ["-y", "x"],
                          "equilibrium": {"values": [0, 0]}, "order": 5})",
                      "t"),
        doctest::Contains("level must be 1..4"), schema_error);

    CHECK_THROWS_WITH_AS(
        parse_problem(R"({"variables": ["x", "y"], "equations": ["-y", "x"],
                          "equilibrium": {"values": [0, 0]}, "order": 1, "extra": 1})",
                      "t"),
        doctest::Contains("unknown key 'extra'"), schema_error);

    CHECK_THROWS_AS(parse_problem(R"({"variables": ["x", "y"], "equations": ["-y", "x"],
                                      "equilibrium": {}, "order": 1})",
                                  "t"),
                    schema_error);
    CHECK_THROWS_AS(
        parse_problem(R"({"variables": ["x", "y"], "equations": ["-y", "x"],
                          "equilibrium": {"values": [0, 0], "guess": [0, 0]}, "order": 1})",
            "t"),
        schema_error);
    CHECK_THROWS_AS(parse_problem("{not json", "t"), schema_error);
    CHECK_THROWS_AS(load_problem("/nonexistent/path.json"), io_error);

    // expression errors surface with their location
    CHECK_THROWS_AS(parse_problem(R"({"variables": ["x", "y"], "equations": ["-y", "x +"],
                                      "equilibrium": {"values": [0, 0]}, "order": 1})",
                                  "t"),
                    parse_error);
}

TEST_CASE("analyze pipeline on fixtures") {
    ProblemSpec spec = load_problem(fixture("planar_cubic.json"));
    AnalysisReport rep = analyze(spec);
    CHECK(rep.omega0 == doctest::Approx(1.0));
    CHECK(rep.l[0] == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(rep.master_residual <= 1e-9);

    // the classical reaction model is supercritical at this parameter point
    ProblemSpec bruss = load_problem(fixture("brusselator.json"));
    AnalysisReport brep = analyze(bruss);
    CHECK(brep.equilibrium[0] == doctest::Approx(1.0));
    CHECK(brep.equilibrium[1] == doctest::Approx(2.0));
    CHECK(brep.omega0 == doctest::Approx(1.0));
    CHECK(brep.l[0] < 0.0);
}

TEST_CASE("report serialization round-trips and stays deterministic") {
    ProblemSpec spec = load_problem(fixture("planar_cubic.json"));
    AnalysisReport rep = analyze(spec);
    std::string j1 = emit_report(rep, report_format::json);
    std::string j2 = emit_report(analyze(spec), report_format::json);
    CHECK(j1 == j2);

    nlohmann::json doc = nlohmann::json::parse(j1);
    CHECK(doc["omega0"].get<double>() == rep.omega0);
    CHECK(doc["l"]["1"].get<double>() == rep.l[0]);
    CHECK(doc["G"]["21"][0].get<double>() == rep.G[0].real());
    CHECK(doc["G"]["21"][1].get<double>() == rep.G[0].imag());
    CHECK(doc["q"].size() == 2);
    CHECK(doc["q"][0].size() == 2);
    CHECK(doc["residuals"]["master"].get<double>() == rep.master_residual);
    CHECK(doc["duration_ms"].get<double>() == 0.0);
    for (const char* key : {"omega0", "eigenvalues", "q", "p", "G", "l", "caveats", "residuals",
                            "warnings", "duration_ms"})
        CHECK(doc.contains(key));

    std::string text = emit_report(rep, report_format::text);
    CHECK(text.find("omega0") != std::string::npos);
    CHECK(text.find("l1") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    std::string out, err;
    CHECK(run_cli("analyze " + fixture("planar_cubic.json"), &out, &err) == 0);
    CHECK(out.find("\"l\"") != std::string::npos);

    CHECK(run_cli("analyze " + fixture("extra_imaginary_pair.json"), &out, &err) == 4);
    CHECK(err.find("error:") != std::string::npos);

    std::string bad = write_tmp("hopfc_bad.json", "{broken");
    CHECK(run_cli("analyze " + bad, &out, &err) == 2);

    std::string order5 = write_tmp("hopfc_order5.json",
                                   R"({"variables": ["x", "y"], "equations": ["-y", "x"],
                                       "equilibrium": {"values": [0, 0]}, "order": 5})");
    CHECK(run_cli("analyze " + order5, &out, &err) == 2);

    CHECK(run_cli("analyze /does/not/exist.json", &out, &err) == 5);

    std::string no_root = write_tmp("hopfc_noroot.json",
                                    R"({"variables": ["x", "y"], "equations": ["x^2 + 1", "y"],
                                        "equilibrium": {"guess": [1, 0]}, "order": 1})");
    CHECK(run_cli("analyze " + no_root, &out, &err) == 3);

    CHECK(run_cli("analyze", &out, &err) == 2); // usage error

    // transversality with fewer parameters than the level
    CHECK(run_cli("transversality " + fixture("sweep_family.json") + " --order 2", &out, &err) == 4);
}

TEST_CASE("cli json output is byte-identical across runs") {
    std::string a, b;
    REQUIRE(run_cli("analyze " + fixture("degenerate_level4.json"), &a) == 0);
    REQUIRE(run_cli("analyze " + fixture("degenerate_level4.json"), &b) == 0);
    CHECK(a == b);
    CHECK(!a.empty());
}

TEST_CASE("cli text format and order override") {
    std::string out;
    REQUIRE(run_cli("analyze " + fixture("degenerate_level4.json") + " --format text --order 2",
                    &out) == 0);
    CHECK(out.find("level 2") != std::string::npos);
    CHECK(out.find("G54") == std::string::npos);
}

TEST_CASE("sweep rows, failures, and locate") {
    ProblemSpec spec = load_problem(fixture("sweep_family.json"));
    SweepResult res = sweep(spec, "mu", 0.0, 1.0, 11, "l1", false);
    REQUIRE(res.rows.size() == 11);
    for (const SweepRow& row : res.rows) {
        REQUIRE(row.ok);
        CHECK(std::abs(row.l[0] - (row.param - 0.3)) <= 1e-9);
        CHECK(std::abs(row.eta) <= 1e-10);
    }
    REQUIRE(res.zeros.size() == 1);
    CHECK(res.zeros[0].ok);
    CHECK(std::abs(res.zeros[0].zero - 0.3) <= 1e-8);
    CHECK(res.zeros[0].iterations <= 60);

    // independent mode reproduces the same grid values
    SweepResult indep = sweep(spec, "mu", 0.0, 1.0, 11, "", true);
    for (size_t i = 0; i < indep.rows.size(); ++i)
        CHECK(std::abs(indep.rows[i].l[0] - res.rows[i].l[0]) <= 1e-9);

    CHECK_THROWS_AS(sweep(spec, "nu", 0, 1, 5, "", false), precondition_error);
    CHECK_THROWS_AS(sweep(spec, "mu", 0, 1, 1, "", false), precondition_error);
    CHECK_THROWS_AS(sweep(spec, "mu", 0, 1, 5, "l3", false), precondition_error);
}

TEST_CASE("sweep continues a moving equilibrium") {
    // the Hopf point sits at (mu, 0); l1(mu) = mu - 0.3 as before
    ProblemSpec spec = parse_problem(
        R"json({"variables": ["x", "y"], "parameters": {"mu": 0.0},
            "equations": ["-y + (mu - 0.3)*(x - mu)*((x - mu)^2 + y^2)",
                          "(x - mu) + (mu - 0.3)*y*((x - mu)^2 + y^2)"],
            "equilibrium": {"guess": [0.05, 0.05]}, "order": 1})json",
        "t");
    SweepResult res = sweep(spec, "mu", 0.0, 1.0, 11, "l1", false);
    for (const SweepRow& row : res.rows) {
        REQUIRE(row.ok);
        CHECK(std::abs(row.equilibrium[0] - row.param) <= 1e-9);
        CHECK(std::abs(row.l[0] - (row.param - 0.3)) <= 1e-9);
    }
    REQUIRE(res.zeros.size() == 1);
    CHECK(res.zeros[0].ok);
    CHECK(std::abs(res.zeros[0].zero - 0.3) <= 1e-8);

    // re-analyzing a single grid point from the stored equilibrium
    // reproduces the row
    const SweepRow& row = res.rows[7];
    ProblemSpec single = spec;
    single.parameter_values[0] = row.param;
    single.equilibrium_guess = row.equilibrium;
    AnalysisReport rep = analyze(single);
    CHECK(std::abs(rep.l[0] - row.l[0]) <= 1e-9);
}

TEST_CASE("sweep marks rows without an oscillatory pair as failed") {
    ProblemSpec spec = parse_problem(
        R"({"variables": ["x", "y"], "parameters": {"mu": -1.0},
            "equations": ["mu*y", "x"], "equilibrium": {"values": [0, 0]}, "order": 1})",
        "t");
    SweepResult res = sweep(spec, "mu", -1.0, 1.0, 9, "", false);
    int ok = 0, failed = 0;
    for (const SweepRow& row : res.rows) (row.ok ? ok : failed)++;
    CHECK(ok >= 3);
    CHECK(failed >= 3);
    CHECK(res.rows.front().ok);
    CHECK_FALSE(res.rows.back().ok);
}

TEST_CASE("sweep serialization") {
    ProblemSpec spec = load_problem(fixture("sweep_family.json"));
    SweepResult res = sweep(spec, "mu", 0.0, 0.5, 3, "l1", false);
    std::string jsonl = emit_sweep(res, report_format::json);
    int lines = 0;
    std::istringstream in(jsonl);
    std::string line;
    nlohmann::json parsed;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++lines;
        CHECK_NOTHROW(parsed = nlohmann::json::parse(line));
    }
    CHECK(lines == 3 + static_cast<int>(res.zeros.size()));

    std::string csv = emit_sweep(res, report_format::text);
    CHECK(csv.rfind("param,eta,l1,status", 0) == 0);
}

TEST_CASE("cli sweep and check subcommands") {
    std::string out;
    REQUIRE(run_cli("sweep " + fixture("sweep_family.json") +
                        " --param mu --from 0 --to 1 --steps 5 --locate l1",
                    &out) == 0);
    CHECK(out.find("\"locate\": \"l1\"") != std::string::npos);
    {
        bool found_zero = false;
        std::istringstream lines(out);
        std::string line;
        while (std::getline(lines, line)) {
            if (line.find("\"locate\"") == std::string::npos) continue;
            nlohmann::json z = nlohmann::json::parse(line);
            if (z["status"] == "ok" && std::abs(z["zero"].get<double>() - 0.3) <= 1e-8)
                found_zero = true;
        }
        CHECK(found_zero);
    }

    REQUIRE(run_cli("sweep " + fixture("sweep_family.json") +
                        " --param mu --from 0 --to 1 --steps 5 --format text",
                    &out) == 0);
    CHECK(out.rfind("param,eta,l1,status", 0) == 0);

    REQUIRE(run_cli("check " + fixture("planar_cubic.json"), &out) == 0);
    CHECK(out.find("[PASS]") != std::string::npos);
    CHECK(out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("cli transversality subcommand") {
    std::string family = write_tmp("hopfc_trans.json", R"json({
        "variables": ["x", "y"],
        "parameters": {"mu1": 0.0, "mu2": 0.0},
        "equations": ["mu1*x - y + (x^2 + y^2)*(mu2*x - 0.1*y)",
                      "x + mu1*y + (x^2 + y^2)*(0.1*x + mu2*y)"],
        "equilibrium": {"values": [0, 0]}, "order": 2})json");
    std::string out;
    REQUIRE(run_cli("transversality " + family + " --format json", &out) == 0);
    nlohmann::json doc = nlohmann::json::parse(out);
    CHECK(doc["full_rank"].get<bool>());
    CHECK(doc["rank_ratio"].get<double>() > 0.5);
}

TEST_CASE("refine_equilibrium explicit-value verification") {
    ProblemSpec spec = parse_problem(
        R"({"variables": ["x", "y"], "equations": ["1 - x", "y"],
            "equilibrium": {"values": [0.5, 0]}, "order": 1})",
        "t");
    CHECK_THROWS_AS(refine_equilibrium(spec), precondition_error);
}
