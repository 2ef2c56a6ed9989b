#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levelcs/gen.hpp"
#include "levelcs/levels.hpp"
#include "levelcs/solvers.hpp"

namespace levelcs {

enum class Normalization { None, Columns, Spectral };

std::string to_string(Normalization n);
Normalization normalization_from_name(const std::string& name);

/// Harness defaults: columns for omp, unit spectral norm for iht, none for
/// niht (its stepsize adapts) and cosamp.
Normalization default_normalization(Algorithm alg);

/// One reproducible sweep cell: the signal's true structure, the structure
/// handed to the solver (they may differ), and everything needed to rerun a
/// trial bit-identically from base_seed.
struct ExperimentConfig {
    Algorithm algorithm = Algorithm::Iht;
    int N = 0;
    LevelStructure structure;         // generates the signal
    LevelStructure solver_structure;  // handed to the solver
    std::vector<int> m_values;
    int trials = 100;
    Seed base_seed{0};
    double success_rel_err = 1e-2;
    SolveOptions solve_opts;
    double noise_sigma = 0.0;
    Normalization normalization = Normalization::None;
    bool identity_mode = false;  // A = I_N instead of Gaussian (requires m = N)
    int threads = 1;

    ExperimentConfig(LevelStructure signal_structure, LevelStructure solver_structure_)
        : structure(std::move(signal_structure)), solver_structure(std::move(solver_structure_)) {
        N = structure.dim();
    }

    void validate() const;
    std::string canonical_string() const;
};

struct TrialOutcome {
    int m = 0;
    int s_total = 0;
    int trial_index = 0;
    double rel_err = 0.0;
    bool success = false;
    int iterations = 0;
    StopReason stop_reason = StopReason::Converged;
    bool diverged = false;
};

std::string stop_reason_label(const TrialOutcome& outcome);

/// Seed derivation tag for one sweep cell. Deliberately excludes the
/// algorithm and the solver structure so that algorithm comparisons see the
/// same (A, x, e) triple per trial index.
std::string make_cell_tag(const ExperimentConfig& cfg, int m);

/// Runs the solver after the requested preprocessing (column scaling with
/// rescale-back, or unit-spectral-norm system scaling); xhat is returned in
/// the original coordinates.
SolveResult solve_with_normalization(Algorithm alg, const DenseMatrix& A, const DenseVector& y,
                                     const LevelStructure& ls, const SolveOptions& opts, Normalization norm);

TrialOutcome run_trial(const ExperimentConfig& cfg, int m, int trial_index);

struct SweepRow {
    int m = 0;
    int s_total = 0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    double mean_rel_err = 0.0;
    bool feasible = true;  // false marks skipped phase-grid cells
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::uint64_t seed = 0;
    std::string config;
    std::vector<TrialOutcome> trial_dump;  // filled when dump_trials
};

SweepTable sweep_phase_line(const ExperimentConfig& cfg, bool dump_trials = false);

/// Maps a total sparsity s to a concrete structure via two comma-separated
/// token lists; each token is an integer or [INT]("N"|"s")["/"INT], e.g.
/// levels "N/4,N/2,3N/4,N" with sparsities "s/2,0,s/2,0", evaluated in
/// integer arithmetic. instantiate() returns nullopt for infeasible cells
/// (levels not increasing, s_k > width, last level != N).
struct StructureRule {
    std::string levels_template;
    std::string sparsity_template;

    std::optional<LevelStructure> instantiate(int N, int s_total) const;
};

struct GridTable {
    std::vector<int> s_totals;
    std::vector<int> m_values;
    std::vector<SweepRow> rows;  // row-major over (s_total, m)
    std::uint64_t seed = 0;
    std::string config;
    std::vector<TrialOutcome> trial_dump;

    const SweepRow& cell(int s_index, int m_index) const {
        return rows[static_cast<std::size_t>(s_index) * m_values.size() + static_cast<std::size_t>(m_index)];
    }
};

/// Success-rate grid over (s_total, m). cfg.structure / cfg.solver_structure
/// are replaced per row by the two rules; rows whose structures are
/// infeasible are marked skipped. Errors when every row is infeasible.
GridTable sweep_phase_grid(const ExperimentConfig& cfg, const std::vector<int>& s_totals,
                           const StructureRule& signal_rule, const StructureRule& solver_rule,
                           bool dump_trials = false);

/// Summary CSV: "# seed=", "# config=" comment lines, then
/// m,s_total,trials,successes,success_rate,mean_rel_err with success_rate to
/// 4 decimals and mean_rel_err in 6-significant-digit scientific notation
/// (infinite sentinel written as "inf", skipped cells as "nan"). LF endings.
void emit_csv(const SweepTable& table, const std::string& path);
void emit_csv(const GridTable& grid, const std::string& path);

/// Per-trial audit CSV:
/// m,s_total,trial_index,rel_err,success,iterations,stop_reason with
/// rel_err at full round-trip precision.
void emit_trials_csv(const std::vector<TrialOutcome>& outcomes, std::uint64_t seed,
                     const std::string& config, const std::string& path);

/// Standalone SVG: one 20-px rect per cell, grayscale fill mapping success
/// rate 0 -> black and 1 -> white linearly (rounded), skipped cells hatched,
/// tick labels for m along x and s along y.
void emit_svg_heatmap(const GridTable& grid, const std::string& path);

}  // namespace levelcs
