#include "hopf/problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hopf {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw schema_error(path + ": " + msg);
}

RVec number_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    RVec out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

std::vector<std::string> string_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of strings");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) fail(path + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(path, "unknown key '" + it.key() + "'");
}

} // namespace

ProblemSpec parse_problem(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const std::exception& e) {
        throw schema_error(origin + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) fail(origin, "top-level value must be an object");
    reject_unknown(doc, {"variables", "parameters", "equations", "equilibrium", "order", "options"},
                   origin);

    for (const char* key : {"variables", "equations", "equilibrium", "order"})
        if (!doc.contains(key)) fail(origin, std::string("missing key '") + key + "'");

    std::vector<std::string> variables = string_array(doc["variables"], origin + ".variables");

    std::vector<std::string> parameter_names;
    RVec parameter_values;
    if (doc.contains("parameters")) {
        const json& pj = doc["parameters"];
        if (!pj.is_object()) fail(origin + ".parameters", "expected an object of name: number");
        for (auto it = pj.begin(); it != pj.end(); ++it) {
            if (!it.value().is_number())
                fail(origin + ".parameters." + it.key(), "expected a number");
            parameter_names.push_back(it.key());
            parameter_values.push_back(it.value().get<double>());
        }
    }

    std::vector<std::string> equations = string_array(doc["equations"], origin + ".equations");
    if (equations.size() != variables.size())
        fail(origin, "'equations' has " + std::to_string(equations.size()) +
                         " entries but 'variables' declares " + std::to_string(variables.size()));

    const json& oj = doc["order"];
    if (!oj.is_number_integer() || oj.get<int>() < 1 || oj.get<int>() > 4)
        fail(origin + ".order", "level must be 1..4");

    const json& ej = doc["equilibrium"];
    if (!ej.is_object()) fail(origin + ".equilibrium", "expected an object");
    reject_unknown(ej, {"values", "guess"}, origin + ".equilibrium");
    bool has_values = ej.contains("values");
    bool has_guess = ej.contains("guess");
    if (has_values == has_guess)
        fail(origin + ".equilibrium", "exactly one of 'values' or 'guess' required");

    ProblemOptions options;
    if (doc.contains("options")) {
        const json& opt = doc["options"];
        if (!opt.is_object()) fail(origin + ".options", "expected an object");
        reject_unknown(opt, {"eig_tol", "res_tol"}, origin + ".options");
        if (opt.contains("eig_tol")) {
            if (!opt["eig_tol"].is_number() || opt["eig_tol"].get<double>() <= 0)
                fail(origin + ".options.eig_tol", "expected a positive number");
            options.eig_tol = opt["eig_tol"].get<double>();
        }
        if (opt.contains("res_tol")) {
            if (!opt["res_tol"].is_number() || opt["res_tol"].get<double>() <= 0)
                fail(origin + ".options.res_tol", "expected a positive number");
            options.res_tol = opt["res_tol"].get<double>();
        }
    }

    ProblemSpec spec{VectorFieldSpec(variables, parameter_names, equations),
                     std::move(parameter_values),
                     std::nullopt,
                     std::nullopt,
                     oj.get<int>(),
                     options};

    const size_t n = variables.size();
    if (has_values) {
        RVec v = number_array(ej["values"], origin + ".equilibrium.values");
        if (v.size() != n)
            fail(origin + ".equilibrium.values", "expected " + std::to_string(n) + " numbers");
        spec.equilibrium_values = std::move(v);
    } else {
        RVec v = number_array(ej["guess"], origin + ".equilibrium.guess");
        if (v.size() != n)
            fail(origin + ".equilibrium.guess", "expected " + std::to_string(n) + " numbers");
        spec.equilibrium_guess = std::move(v);
    }
    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open problem file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("read failure on '" + path + "'");
    return parse_problem(buf.str(), path);
}

} // namespace hopf
