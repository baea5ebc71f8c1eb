#pragma once

// Flat "key = value" run configuration shared by the CLI subcommands.
// Keys: problem, domain, nx, ny, mesh_file, lambda_policy, c_override,
// solver_tol, output_dir. '#' starts a comment.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "monofem/errors.hpp"
#include "monofem/lambda.hpp"
#include "monofem/mesh.hpp"
#include "monofem/problem.hpp"
#include "monofem/types.hpp"

namespace monofem {

struct RunConfig {
    std::string problem = "poisson-sine";
    std::optional<Rect> domain;  // overrides the problem's default domain
    int nx = 16;
    int ny = 16;
    std::string mesh_file;  // when set, wins over nx/ny
    LambdaPolicy lambda_policy = LambdaPolicy::upper;
    std::optional<double> c_override;
    double solver_tol = 1e-12;
    std::string output_dir = ".";
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline Rect parse_rect(const std::string& text, const std::string& context) {
    Rect r;
    char c1, c2, c3;
    std::istringstream ss(text);
    if (!(ss >> r.x0 >> c1 >> r.x1 >> c2 >> r.y0 >> c3 >> r.y1) || c1 != ',' || c2 != ',' || c3 != ',')
        throw ParseError(context + ": expected 'x0,x1,y0,y1', got '" + text + "'");
    if (r.degenerate()) throw ParseError(context + ": degenerate domain '" + text + "'");
    return r;
}

inline double parse_double(const std::string& text, const std::string& context) {
    std::istringstream ss(text);
    double v;
    std::string extra;
    if (!(ss >> v) || (ss >> extra)) throw ParseError(context + ": expected a number, got '" + text + "'");
    return v;
}

inline int parse_int(const std::string& text, const std::string& context) {
    std::istringstream ss(text);
    int v;
    std::string extra;
    if (!(ss >> v) || (ss >> extra)) throw ParseError(context + ": expected an integer, got '" + text + "'");
    return v;
}

}  // namespace detail

inline LambdaPolicy parse_lambda_policy(const std::string& text, const std::string& context = "lambda_policy") {
    if (text == "upper") return LambdaPolicy::upper;
    if (text == "midpoint") return LambdaPolicy::midpoint;
    throw ParseError(context + ": expected 'upper' or 'midpoint', got '" + text + "'");
}

inline void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value,
                             const std::string& context) {
    if (key == "problem")
        cfg.problem = value;
    else if (key == "domain")
        cfg.domain = detail::parse_rect(value, context);
    else if (key == "nx")
        cfg.nx = detail::parse_int(value, context);
    else if (key == "ny")
        cfg.ny = detail::parse_int(value, context);
    else if (key == "mesh_file")
        cfg.mesh_file = value;
    else if (key == "lambda_policy")
        cfg.lambda_policy = parse_lambda_policy(value, context);
    else if (key == "c_override")
        cfg.c_override = detail::parse_double(value, context);
    else if (key == "solver_tol")
        cfg.solver_tol = detail::parse_double(value, context);
    else if (key == "output_dir")
        cfg.output_dir = value;
    else
        throw ParseError(context + ": unknown key '" + key + "'");
}

inline RunConfig load_config(std::istream& in, const std::string& name = "<config>") {
    RunConfig cfg;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string context = name + ":" + std::to_string(line_no);
        if (eq == std::string::npos) throw ParseError(context + ": expected 'key = value'");
        apply_config_key(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)), context);
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_config: cannot open '" + path + "'");
    return load_config(in, path);
}

/// Problem named by the configuration, with domain override applied.
inline ProblemSpec config_problem(const RunConfig& cfg) {
    ProblemSpec problem = builtin_problem(cfg.problem, cfg.c_override);
    if (cfg.domain) problem.domain = *cfg.domain;
    return problem;
}

/// Mesh named by the configuration: file when given, else uniform nx x ny.
inline Mesh config_mesh(const RunConfig& cfg, const ProblemSpec& problem) {
    if (!cfg.mesh_file.empty()) return load_mesh(cfg.mesh_file);
    return uniform_mesh(cfg.nx, cfg.ny, problem.domain);
}

}  // namespace monofem
