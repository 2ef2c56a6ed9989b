// levelcs command line: solve / ricl / guarantee / phase-line / phase-grid.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levelcs/analysis.hpp"
#include "levelcs/experiments.hpp"
#include "levelcs/io.hpp"
#include "levelcs/levels.hpp"
#include "levelcs/solvers.hpp"

namespace {

using namespace levelcs;

std::vector<int> parse_range(const std::string& text) {
    int lo = 0, step = 0, hi = 0;
    if (std::sscanf(text.c_str(), "%d:%d:%d", &lo, &step, &hi) != 3 || step <= 0 || lo > hi)
        throw CLI::ValidationError("--m-range/--s-range", "expected lo:step:hi with step > 0");
    std::vector<int> values;
    for (int v = lo; v <= hi; v += step) values.push_back(v);
    return values;
}

struct SweepFlags {
    std::string algorithm = "iht";
    int N = 128;
    std::vector<int> m_values;
    std::string m_range;
    int trials = 100;
    std::uint64_t seed = 0;
    double tol = 1e-4;
    int max_iter = 1000;
    double success_tol = 1e-2;
    double noise_sigma = 0.0;
    std::string normalization = "auto";
    std::string out;
    std::string svg;
    std::string dump_trials;
    bool identity = false;
    int threads = 1;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& flags) {
    cmd->add_option("--algorithm", flags.algorithm, "iht, niht, cosamp or omp")->required();
    cmd->add_option("--N", flags.N, "ambient dimension");
    cmd->add_option("--m", flags.m_values, "measurement counts (repeatable)");
    cmd->add_option("--m-range", flags.m_range, "measurement counts as lo:step:hi");
    cmd->add_option("--trials", flags.trials, "trials per cell")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", flags.seed, "base seed (64-bit)");
    cmd->add_option("--tol", flags.tol, "iterate-change stopping tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", flags.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--success-tol", flags.success_tol, "relative-error success threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--noise-sigma", flags.noise_sigma, "additive Gaussian noise level")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--normalization", flags.normalization, "auto, none, columns or spectral");
    cmd->add_option("--out", flags.out, "summary CSV path");
    cmd->add_option("--svg", flags.svg, "heatmap SVG path");
    cmd->add_option("--dump-trials", flags.dump_trials, "per-trial CSV path");
    cmd->add_flag("--identity", flags.identity, "replace A by the identity (test mode, m = N)");
    cmd->add_option("--threads", flags.threads, "concurrent trial workers")->check(CLI::PositiveNumber);
}

std::vector<int> resolve_values(const std::vector<int>& listed, const std::string& range,
                                const std::string& what) {
    if (!listed.empty() && !range.empty())
        throw CLI::ValidationError(what, "give either the list or the range, not both");
    if (!listed.empty()) return listed;
    if (!range.empty()) return parse_range(range);
    throw CLI::ValidationError(what, "required");
}

ExperimentConfig build_config(const SweepFlags& flags, LevelStructure signal, LevelStructure solver) {
    ExperimentConfig cfg(std::move(signal), std::move(solver));
    cfg.algorithm = algorithm_from_name(flags.algorithm);
    cfg.m_values = resolve_values(flags.m_values, flags.m_range, "--m/--m-range");
    cfg.trials = flags.trials;
    cfg.base_seed = Seed{flags.seed};
    cfg.success_rel_err = flags.success_tol;
    cfg.solve_opts.rel_change_tol = flags.tol;
    cfg.solve_opts.max_iter = flags.max_iter;
    cfg.noise_sigma = flags.noise_sigma;
    cfg.normalization = flags.normalization == "auto" ? default_normalization(cfg.algorithm)
                                                      : normalization_from_name(flags.normalization);
    cfg.identity_mode = flags.identity;
    cfg.threads = flags.threads;
    return cfg;
}

GridTable line_as_grid(const SweepTable& table, const std::vector<int>& m_values, int s_total) {
    GridTable grid;
    grid.s_totals = {s_total};
    grid.m_values = m_values;
    grid.rows = table.rows;
    grid.seed = table.seed;
    grid.config = table.config;
    return grid;
}

int run_solve(const std::string& matrix_path, const std::string& measurements_path,
              const std::string& structure_text, const std::string& algorithm_name_text, double tol,
              int max_iter, const std::string& normalization, const std::string& out_path) {
    const DenseMatrix A = read_matrix_csv(matrix_path);
    const DenseVector y = read_vector_csv(measurements_path);
    const LevelStructure ls = LevelStructure::parse(structure_text);
    const Algorithm alg = algorithm_from_name(algorithm_name_text);

    SolveOptions opts;
    opts.rel_change_tol = tol;
    opts.max_iter = max_iter;
    const Normalization norm =
        normalization == "auto" ? default_normalization(alg) : normalization_from_name(normalization);

    const SolveResult result = solve_with_normalization(alg, A, y, ls, opts, norm);
    std::fprintf(stderr, "iterations: %d\nstop: %s\nresidual: %.6e\n", result.iterations,
                 to_string(result.stop_reason).c_str(), result.residual_history.back());
    if (out_path.empty()) {
        for (int i = 0; i < result.xhat.dim(); ++i) std::printf("%.17g\n", result.xhat[i]);
    } else {
        write_vector_csv(result.xhat, out_path);
    }
    return 0;
}

int run_ricl(const std::string& matrix_path, const std::string& structure_text, std::uint64_t cap) {
    const DenseMatrix A = read_matrix_csv(matrix_path);
    const LevelStructure ls = LevelStructure::parse(structure_text);
    const RiclResult result = ricl_bruteforce(A, ls, cap);
    std::printf("%.12f\n", result.delta);
    std::printf("worst support:");
    for (int index : result.worst_support.indices()) std::printf(" %d", index);
    std::printf("\n");
    return 0;
}

void print_report(const GuaranteeReport& report, double delta) {
    std::printf("delta: %.6g\n", delta);
    std::printf("threshold: %.6g\n", report.condition_threshold);
    std::printf("condition_met: %s\n", report.condition_met ? "yes" : "no");
    std::printf("rho: %.6g\n", report.rho);
    std::printf("tau_bound: %.6g\n", report.tau_bound);
}

int run_guarantee(const std::string& theorem, std::optional<double> delta, const std::string& structure_text,
                  const std::string& weights) {
    if (theorem == "iht" || theorem == "cosamp") {
        if (!delta) throw std::runtime_error("guarantee: --delta is required for theorem " + theorem);
        print_report(theorem == "iht" ? iht_guarantee(*delta) : cosamp_guarantee(*delta), *delta);
        return 0;
    }
    if (theorem == "qcbp") {
        if (structure_text.empty()) throw std::runtime_error("guarantee: --structure is required for qcbp");
        const LevelStructure ls = LevelStructure::parse(structure_text);
        const LevelWeights w = weights == "optimal" ? default_weights(ls) : LevelWeights::unit(ls.num_levels());
        const double threshold = qcbp_threshold(ls, w);
        std::printf("threshold: %.12g\n", threshold);
        if (delta) std::printf("condition_met: %s\n", *delta < threshold ? "yes" : "no");
        return 0;
    }
    throw std::runtime_error("guarantee: unknown theorem '" + theorem + "' (expected iht, cosamp or qcbp)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressed sensing in levels: solvers, certification and phase-transition experiments"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "recover a signal from a matrix and measurements");
    std::string matrix_path, measurements_path, structure_text, algorithm_text, out_path;
    std::string solve_normalization = "auto";
    double solve_tol = 1e-4;
    int solve_max_iter = 1000;
    solve_cmd->add_option("--matrix", matrix_path, "measurement matrix CSV")->required();
    solve_cmd->add_option("--measurements", measurements_path, "measurement vector CSV")->required();
    solve_cmd->add_option("--structure", structure_text, "level structure M1,...,Mr/s1,...,sr")->required();
    solve_cmd->add_option("--algorithm", algorithm_text, "iht, niht, cosamp or omp")->required();
    solve_cmd->add_option("--tol", solve_tol, "iterate-change stopping tolerance");
    solve_cmd->add_option("--max-iter", solve_max_iter, "iteration cap");
    solve_cmd->add_option("--normalization", solve_normalization, "auto, none, columns or spectral");
    solve_cmd->add_option("--out", out_path, "solution CSV path (stdout when omitted)");

    // ricl
    auto* ricl_cmd = app.add_subcommand("ricl", "brute-force restricted isometry constant in levels");
    std::string ricl_matrix, ricl_structure;
    std::uint64_t ricl_cap = 1'000'000;
    ricl_cmd->add_option("--matrix", ricl_matrix, "matrix CSV")->required();
    ricl_cmd->add_option("--structure", ricl_structure, "level structure")->required();
    ricl_cmd->add_option("--cap", ricl_cap, "support enumeration cap");

    // guarantee
    auto* guarantee_cmd = app.add_subcommand("guarantee", "evaluate a recovery guarantee condition");
    std::string theorem, guarantee_structure, guarantee_weights = "unit";
    double guarantee_delta = -1.0;
    bool have_delta = false;
    guarantee_cmd->add_option("--theorem", theorem, "iht, cosamp or qcbp")->required();
    guarantee_cmd->add_option("--delta", guarantee_delta, "restricted isometry constant")
        ->each([&have_delta](const std::string&) { have_delta = true; });
    guarantee_cmd->add_option("--structure", guarantee_structure, "level structure (qcbp)");
    guarantee_cmd->add_option("--weights", guarantee_weights, "unit or optimal (qcbp)");

    // phase-line / phase-grid
    auto* line_cmd = app.add_subcommand("phase-line", "success probability versus m");
    SweepFlags line_flags;
    std::string line_structure, line_solver_structure;
    add_sweep_flags(line_cmd, line_flags);
    line_cmd->add_option("--structure", line_structure, "signal level structure")->required();
    line_cmd->add_option("--solver-structure", line_solver_structure,
                         "structure handed to the solver (defaults to --structure)");

    auto* grid_cmd = app.add_subcommand("phase-grid", "success probability over (s, m)");
    SweepFlags grid_flags;
    std::vector<int> grid_s_values;
    std::string grid_s_range, levels_template, sparsity_template, solver_levels_template,
        solver_sparsity_template;
    add_sweep_flags(grid_cmd, grid_flags);
    grid_cmd->add_option("--s", grid_s_values, "total sparsities (repeatable)");
    grid_cmd->add_option("--s-range", grid_s_range, "total sparsities as lo:step:hi");
    grid_cmd->add_option("--levels-template", levels_template, "signal levels, e.g. N/4,N/2,3N/4,N")->required();
    grid_cmd->add_option("--sparsity-template", sparsity_template, "signal sparsities, e.g. s/2,0,s/2,0")
        ->required();
    grid_cmd->add_option("--solver-levels-template", solver_levels_template,
                         "solver levels (defaults to --levels-template)");
    grid_cmd->add_option("--solver-sparsity-template", solver_sparsity_template,
                         "solver sparsities (defaults to --sparsity-template)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed())
            return run_solve(matrix_path, measurements_path, structure_text, algorithm_text, solve_tol,
                             solve_max_iter, solve_normalization, out_path);
        if (ricl_cmd->parsed()) return run_ricl(ricl_matrix, ricl_structure, ricl_cap);
        if (guarantee_cmd->parsed())
            return run_guarantee(theorem,
                                 have_delta ? std::optional<double>(guarantee_delta) : std::nullopt,
                                 guarantee_structure, guarantee_weights);

        if (line_cmd->parsed()) {
            const LevelStructure signal = LevelStructure::parse(line_structure);
            const LevelStructure solver = line_solver_structure.empty()
                                              ? signal
                                              : LevelStructure::parse(line_solver_structure);
            const ExperimentConfig cfg = build_config(line_flags, signal, solver);
            const SweepTable table = sweep_phase_line(cfg, !line_flags.dump_trials.empty());
            if (!line_flags.out.empty()) emit_csv(table, line_flags.out);
            if (!line_flags.dump_trials.empty())
                emit_trials_csv(table.trial_dump, table.seed, table.config, line_flags.dump_trials);
            if (!line_flags.svg.empty())
                emit_svg_heatmap(line_as_grid(table, cfg.m_values, cfg.structure.total_sparsity()),
                                 line_flags.svg);
            if (line_flags.out.empty()) {
                std::printf("m,s_total,trials,successes,success_rate,mean_rel_err\n");
                for (const SweepRow& row : table.rows)
                    std::printf("%d,%d,%d,%d,%.4f,%.5e\n", row.m, row.s_total, row.trials, row.successes,
                                row.success_rate, row.mean_rel_err);
            }
            return 0;
        }

        if (grid_cmd->parsed()) {
            const std::vector<int> s_totals = resolve_values(grid_s_values, grid_s_range, "--s/--s-range");
            // grid cells need a placeholder structure until the rule instantiates them
            const StructureRule signal_rule{levels_template, sparsity_template};
            const StructureRule solver_rule{
                solver_levels_template.empty() ? levels_template : solver_levels_template,
                solver_sparsity_template.empty() ? sparsity_template : solver_sparsity_template};
            std::optional<LevelStructure> placeholder;
            for (int s_total : s_totals) {
                placeholder = signal_rule.instantiate(grid_flags.N, s_total);
                if (placeholder) break;
            }
            if (!placeholder) throw std::runtime_error("phase grid: every (s, structure) cell is infeasible");
            const ExperimentConfig cfg = build_config(grid_flags, *placeholder, *placeholder);
            const GridTable grid = sweep_phase_grid(cfg, s_totals, signal_rule, solver_rule,
                                                    !grid_flags.dump_trials.empty());
            if (!grid_flags.out.empty()) emit_csv(grid, grid_flags.out);
            if (!grid_flags.dump_trials.empty())
                emit_trials_csv(grid.trial_dump, grid.seed, grid.config, grid_flags.dump_trials);
            if (!grid_flags.svg.empty()) emit_svg_heatmap(grid, grid_flags.svg);
            if (grid_flags.out.empty()) {
                std::printf("m,s_total,trials,successes,success_rate,mean_rel_err\n");
                for (const SweepRow& row : grid.rows)
                    std::printf("%d,%d,%d,%d,%.4f,%.5e\n", row.m, row.s_total, row.trials, row.successes,
                                row.success_rate, row.mean_rel_err);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
