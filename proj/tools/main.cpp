// monofem CLI: solve, convergence, check, export-matrix.
//
// Exit codes: 0 success, 1 usage or I/O errors, 2 certification or
// admissibility failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <monofem/monofem.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCertification = 2;

struct CommonFlags {
    std::string config_file;
    std::string problem;
    std::string domain;
    int nx = -1;
    int ny = -1;
    std::string mesh_file;
    std::string lambda_policy;
    double c_override = std::numeric_limits<double>::quiet_NaN();
    double solver_tol = -1.0;
    std::string output_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_file, "Key = value configuration file");
    cmd->add_option("--problem", flags.problem, "Builtin problem name");
    cmd->add_option("--domain", flags.domain, "Domain rectangle x0,x1,y0,y1");
    cmd->add_option("--nx", flags.nx, "Cells along x");
    cmd->add_option("--ny", flags.ny, "Cells along y");
    cmd->add_option("--mesh-file", flags.mesh_file, "Mesh file (overrides --nx/--ny)");
    cmd->add_option("--lambda-policy", flags.lambda_policy, "Quadrature parameter policy: upper | midpoint");
    cmd->add_option("--c-override", flags.c_override, "Reaction constant for paper-sec6");
    cmd->add_option("--solver-tol", flags.solver_tol, "CG relative tolerance");
    cmd->add_option("--output-dir", flags.output_dir, "Directory for output files");
}

monofem::RunConfig resolve_config(const CommonFlags& flags) {
    monofem::RunConfig cfg;
    if (!flags.config_file.empty()) cfg = monofem::load_config(flags.config_file);
    if (!flags.problem.empty()) cfg.problem = flags.problem;
    if (!flags.domain.empty()) cfg.domain = monofem::detail::parse_rect(flags.domain, "--domain");
    if (flags.nx > 0) cfg.nx = flags.nx;
    if (flags.ny > 0) cfg.ny = flags.ny;
    if (!flags.mesh_file.empty()) cfg.mesh_file = flags.mesh_file;
    if (!flags.lambda_policy.empty()) cfg.lambda_policy = monofem::parse_lambda_policy(flags.lambda_policy);
    if (!std::isnan(flags.c_override)) cfg.c_override = flags.c_override;
    if (flags.solver_tol > 0.0) cfg.solver_tol = flags.solver_tol;
    if (!flags.output_dir.empty()) cfg.output_dir = flags.output_dir;
    return cfg;
}

std::filesystem::path output_path(const monofem::RunConfig& cfg, const std::string& file) {
    std::filesystem::create_directories(cfg.output_dir);
    return std::filesystem::path(cfg.output_dir) / file;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw monofem::IoError("cannot open '" + path.string() + "' for writing");
    out << content;
}

std::string c_note(const monofem::RunConfig& cfg) {
    if (cfg.problem.rfind("paper-sec6", 0) == 0)
        return monofem::format_exact(cfg.c_override.value_or(1.0)) + " (constant)";
    return "problem default";
}

int cmd_solve(const monofem::RunConfig& cfg) {
    const monofem::ProblemSpec problem = monofem::config_problem(cfg);
    const monofem::Mesh mesh = monofem::config_mesh(cfg, problem);
    const monofem::AssembledSystem sys = monofem::assemble(mesh, problem, {cfg.lambda_policy, {}});

    const monofem::MmatrixReport report = monofem::check_m_matrix(sys.A);
    std::cout << report.to_text();
    write_file(output_path(cfg, "mmatrix_report.kv"), report.to_keyvalue());
    if (!report.certified) {
        std::cerr << "monofem solve: stiffness matrix is not certified as an M-matrix\n";
        return kExitCertification;
    }

    const monofem::SolveResult sol = monofem::solve_system(sys, monofem::SolveMethod::cg, {cfg.solver_tol, 0});
    std::ostringstream solution;
    for (int v = 0; v < mesh.vertex_count(); ++v)
        solution << monofem::format_exact(mesh.vertices[v].x) << ' ' << monofem::format_exact(mesh.vertices[v].y)
                 << ' ' << monofem::format_exact(sol.u[v]) << '\n';
    write_file(output_path(cfg, "solution.txt"), solution.str());

    std::cout << "solved " << sys.dimension() << " unknowns in " << sol.iterations
              << " cg iterations, residual " << monofem::format_sig6(sol.residual) << "\n";
    if (problem.has_exact()) {
        const monofem::NodalErrors err = monofem::nodal_errors(mesh, sol, problem.u_exact);
        std::cout << "errors vs exact solution: l2 = " << monofem::format_sig6(err.l2)
                  << ", linf = " << monofem::format_sig6(err.linf) << "\n";
    }
    std::cout << "wrote " << output_path(cfg, "solution.txt").string() << "\n";
    return kExitOk;
}

int cmd_convergence(const monofem::RunConfig& cfg, const std::string& levels_text) {
    std::vector<int> levels;
    {
        std::istringstream ss(levels_text);
        std::string item;
        while (std::getline(ss, item, ','))
            levels.push_back(monofem::detail::parse_int(monofem::detail::trim(item), "--levels"));
    }
    const monofem::ProblemSpec problem = monofem::config_problem(cfg);
    monofem::StudyOptions opts;
    opts.policy = cfg.lambda_policy;
    opts.solver_tol = cfg.solver_tol;
    opts.c_note = c_note(cfg);
    const monofem::ConvergenceTable table = monofem::convergence_study(problem, levels, opts);
    const std::string csv = table.to_csv();
    std::cout << csv;
    write_file(output_path(cfg, "convergence.csv"), csv);
    return kExitOk;
}

int cmd_check(const monofem::RunConfig& cfg, bool strict) {
    const monofem::ProblemSpec problem = monofem::config_problem(cfg);
    const monofem::Mesh mesh = monofem::config_mesh(cfg, problem);
    const monofem::MeshConditionReport report = monofem::mesh_condition_check(mesh, problem, strict);
    std::cout << report.to_text();
    return report.pass ? kExitOk : kExitCertification;
}

int cmd_export_matrix(const monofem::RunConfig& cfg) {
    const monofem::ProblemSpec problem = monofem::config_problem(cfg);
    const monofem::Mesh mesh = monofem::config_mesh(cfg, problem);
    const monofem::AssembledSystem sys = monofem::assemble(mesh, problem, {cfg.lambda_policy, {}});
    monofem::export_matrix(sys, output_path(cfg, "matrix.txt").string());
    monofem::export_load(sys, output_path(cfg, "load.txt").string());
    std::cout << "wrote " << output_path(cfg, "matrix.txt").string() << " (" << sys.A.rows << " rows, "
              << sys.A.nnz() << " nonzeros) and " << output_path(cfg, "load.txt").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monotone Q1 finite element solver for 2D anisotropic diffusion"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string levels_text = "4,8,16,32,64";
    bool strict_check = false;

    CLI::App* solve = app.add_subcommand("solve", "Assemble, certify and solve one problem");
    add_common_flags(solve, flags);

    CLI::App* convergence = app.add_subcommand("convergence", "Run a mesh refinement study and emit a CSV table");
    add_common_flags(convergence, flags);
    convergence->add_option("--levels", levels_text, "Comma-separated cells-per-axis list");

    CLI::App* check = app.add_subcommand("check", "Evaluate the quadrilateral mesh condition");
    add_common_flags(check, flags);
    check->add_flag("--strict", strict_check, "Require strict inequalities");

    CLI::App* export_matrix = app.add_subcommand("export-matrix", "Assemble and export the system");
    add_common_flags(export_matrix, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const monofem::RunConfig cfg = resolve_config(flags);
        if (solve->parsed()) return cmd_solve(cfg);
        if (convergence->parsed()) return cmd_convergence(cfg, levels_text);
        if (check->parsed()) return cmd_check(cfg, strict_check);
        if (export_matrix->parsed()) return cmd_export_matrix(cfg);
        return kExitUsage;
    } catch (const monofem::AdmissibilityError& e) {
        std::cerr << "monofem: " << e.what() << "\n";
        return kExitCertification;
    } catch (const monofem::CertificationError& e) {
        std::cerr << "monofem: " << e.what() << "\n";
        return kExitCertification;
    } catch (const monofem::Error& e) {
        std::cerr << "monofem: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "monofem: unexpected error: " << e.what() << "\n";
        return kExitUsage;
    }
}
