#include "levelcs/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "levelcs/linalg.hpp"

namespace levelcs {

namespace {

std::string format_g(double v, int significant = 17) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.*g", significant, v);
    return buffer;
}

}  // namespace

std::string to_string(Normalization n) {
    switch (n) {
        case Normalization::None: return "none";
        case Normalization::Columns: return "columns";
        case Normalization::Spectral: return "spectral";
    }
    return "unknown";
}

Normalization normalization_from_name(const std::string& name) {
    if (name == "none") return Normalization::None;
    if (name == "columns") return Normalization::Columns;
    if (name == "spectral") return Normalization::Spectral;
    throw std::invalid_argument("unknown normalization '" + name + "' (expected none, columns or spectral)");
}

Normalization default_normalization(Algorithm alg) {
    switch (alg) {
        case Algorithm::Omp: return Normalization::Columns;
        case Algorithm::Iht: return Normalization::Spectral;
        case Algorithm::Niht:
        case Algorithm::Cosamp: return Normalization::None;
    }
    return Normalization::None;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (m_values.empty()) throw std::invalid_argument("config: no m values");
    for (int m : m_values)
        if (m < 1 || m > N) throw std::invalid_argument("config: m must lie in [1, N]");
    if (!(success_rel_err > 0.0)) throw std::invalid_argument("config: success tolerance must be positive");
    if (structure.dim() != N) throw std::invalid_argument("config: structure dimension differs from N");
    if (solver_structure.dim() != N) throw std::invalid_argument("config: solver structure dimension differs from N");
    if (identity_mode)
        for (int m : m_values)
            if (m != N) throw std::invalid_argument("config: identity mode requires every m = N");
}

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream out;
    out << "algorithm=" << algorithm_name(algorithm) << ";N=" << N << ";structure=" << structure.to_string()
        << ";solver_structure=" << solver_structure.to_string() << ";m=";
    for (std::size_t i = 0; i < m_values.size(); ++i) out << (i ? "," : "") << m_values[i];
    out << ";trials=" << trials << ";success_tol=" << format_g(success_rel_err)
        << ";tol=" << format_g(solve_opts.rel_change_tol) << ";max_iter=" << solve_opts.max_iter
        << ";noise_sigma=" << format_g(noise_sigma) << ";normalization=" << to_string(normalization)
        << ";identity=" << (identity_mode ? 1 : 0);
    return out.str();
}

std::string stop_reason_label(const TrialOutcome& outcome) {
    return outcome.diverged ? "diverged" : to_string(outcome.stop_reason);
}

std::string make_cell_tag(const ExperimentConfig& cfg, int m) {
    std::ostringstream out;
    out << "N=" << cfg.N << ";m=" << m << ";structure=" << cfg.structure.to_string()
        << ";noise_sigma=" << format_g(cfg.noise_sigma) << ";identity=" << (cfg.identity_mode ? 1 : 0);
    return out.str();
}

SolveResult solve_with_normalization(Algorithm alg, const DenseMatrix& A, const DenseVector& y,
                                     const LevelStructure& ls, const SolveOptions& opts, Normalization norm) {
    switch (norm) {
        case Normalization::None: return solve(alg, A, y, ls, opts);
        case Normalization::Columns: {
            const ColumnNormalization normalized = normalize_columns(A);
            SolveResult result = solve(alg, normalized.matrix, y, ls, opts);
            for (int i = 0; i < result.xhat.dim(); ++i) result.xhat[i] /= normalized.scales[i];
            return result;
        }
        case Normalization::Spectral: {
            const double sigma = spectral_norm(A, 1e-10, 5000).value;
            if (sigma <= 0.0) return solve(alg, A, y, ls, opts);
            DenseMatrix scaled = A;
            for (double& v : scaled.entries()) v /= sigma;
            DenseVector y_scaled = y;
            y_scaled *= 1.0 / sigma;
            return solve(alg, scaled, y_scaled, ls, opts);
        }
    }
    throw std::invalid_argument("unknown normalization");
}

TrialOutcome run_trial(const ExperimentConfig& cfg, int m, int trial_index) {
    const Seed trial_seed = derive_trial_seed(cfg.base_seed, static_cast<std::uint64_t>(trial_index),
                                              make_cell_tag(cfg, m));
    const Seed matrix_seed = derive_trial_seed(trial_seed, 0, "matrix");
    const Seed signal_seed = derive_trial_seed(trial_seed, 1, "signal");
    const Seed noise_seed = derive_trial_seed(trial_seed, 2, "noise");

    const DenseMatrix A = cfg.identity_mode ? DenseMatrix::identity(cfg.N) : gaussian_matrix(m, cfg.N, matrix_seed);
    const DenseVector x = random_levels_signal(cfg.structure, signal_seed);
    DenseVector y = apply(A, x);
    if (cfg.noise_sigma > 0.0) y += gaussian_vector(m, cfg.noise_sigma, noise_seed);

    TrialOutcome outcome;
    outcome.m = m;
    outcome.s_total = cfg.structure.total_sparsity();
    outcome.trial_index = trial_index;

    DenseVector xhat;
    try {
        const SolveResult result =
            solve_with_normalization(cfg.algorithm, A, y, cfg.solver_structure, cfg.solve_opts, cfg.normalization);
        xhat = result.xhat;
        outcome.iterations = result.iterations;
        outcome.stop_reason = result.stop_reason;
    } catch (const SolverDivergence& diverged) {
        outcome.rel_err = std::numeric_limits<double>::infinity();
        outcome.success = false;
        outcome.iterations = diverged.iterations();
        outcome.diverged = true;
        return outcome;
    }

    const double signal_norm = x.norm();
    const double error_norm = (x - xhat).norm();
    outcome.rel_err = signal_norm > 0.0 ? error_norm / signal_norm
                                        : (error_norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    outcome.success = outcome.rel_err < cfg.success_rel_err;
    return outcome;
}

namespace {

// Deterministic map over trial indices; worker threads write disjoint slots.
std::vector<TrialOutcome> run_cell(const ExperimentConfig& cfg, int m) {
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
    const int workers = std::max(1, std::min(cfg.threads, cfg.trials));
    if (workers == 1) {
        for (int t = 0; t < cfg.trials; ++t) outcomes[static_cast<std::size_t>(t)] = run_trial(cfg, m, t);
        return outcomes;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&cfg, &outcomes, m, w, workers] {
            for (int t = w; t < cfg.trials; t += workers)
                outcomes[static_cast<std::size_t>(t)] = run_trial(cfg, m, t);
        });
    }
    for (auto& worker : pool) worker.join();
    return outcomes;
}

SweepRow summarize(const std::vector<TrialOutcome>& outcomes, int m, int s_total) {
    SweepRow row;
    row.m = m;
    row.s_total = s_total;
    row.trials = static_cast<int>(outcomes.size());
    double err_sum = 0.0;
    for (const TrialOutcome& outcome : outcomes) {
        if (outcome.success) ++row.successes;
        err_sum += outcome.rel_err;
    }
    row.success_rate = row.trials > 0 ? static_cast<double>(row.successes) / row.trials : 0.0;
    row.mean_rel_err = row.trials > 0 ? err_sum / row.trials : 0.0;
    return row;
}

}  // namespace

SweepTable sweep_phase_line(const ExperimentConfig& cfg, bool dump_trials) {
    cfg.validate();
    SweepTable table;
    table.seed = cfg.base_seed.value;
    table.config = "mode=line;" + cfg.canonical_string();
    for (int m : cfg.m_values) {
        const std::vector<TrialOutcome> outcomes = run_cell(cfg, m);
        table.rows.push_back(summarize(outcomes, m, cfg.structure.total_sparsity()));
        if (dump_trials) table.trial_dump.insert(table.trial_dump.end(), outcomes.begin(), outcomes.end());
    }
    return table;
}

namespace {

// Template token: INT | [INT]("N"|"s")["/"INT], integer arithmetic.
int eval_token(const std::string& token, int N, int s_total) {
    std::size_t pos = 0;
    long long coefficient = 1;
    bool have_coefficient = false;
    while (pos < token.size() && std::isdigit(static_cast<unsigned char>(token[pos]))) ++pos;
    if (pos > 0) {
        coefficient = std::stoll(token.substr(0, pos));
        have_coefficient = true;
    }
    if (pos == token.size()) {
        if (!have_coefficient) throw std::invalid_argument("bad template token '" + token + "'");
        return static_cast<int>(coefficient);
    }
    long long base = 0;
    if (token[pos] == 'N') {
        base = N;
    } else if (token[pos] == 's') {
        base = s_total;
    } else {
        throw std::invalid_argument("bad template token '" + token + "'");
    }
    ++pos;
    long long divisor = 1;
    if (pos < token.size()) {
        if (token[pos] != '/') throw std::invalid_argument("bad template token '" + token + "'");
        const std::string rest = token.substr(pos + 1);
        if (rest.empty() || !std::all_of(rest.begin(), rest.end(),
                                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw std::invalid_argument("bad template token '" + token + "'");
        divisor = std::stoll(rest);
        if (divisor == 0) throw std::invalid_argument("bad template token '" + token + "'");
    }
    const long long value = coefficient * base / divisor;
    return static_cast<int>(value);
}

std::vector<int> eval_template(const std::string& tmpl, int N, int s_total) {
    std::vector<int> values;
    std::stringstream stream(tmpl);
    std::string token;
    while (std::getline(stream, token, ',')) {
        std::string trimmed;
        for (char c : token)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        values.push_back(eval_token(trimmed, N, s_total));
    }
    if (values.empty()) throw std::invalid_argument("empty structure template");
    return values;
}

}  // namespace

std::optional<LevelStructure> StructureRule::instantiate(int N, int s_total) const {
    try {
        LevelStructure ls(eval_template(levels_template, N, s_total),
                          eval_template(sparsity_template, N, s_total));
        if (ls.dim() != N) return std::nullopt;
        return ls;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

GridTable sweep_phase_grid(const ExperimentConfig& cfg, const std::vector<int>& s_totals,
                           const StructureRule& signal_rule, const StructureRule& solver_rule,
                           bool dump_trials) {
    if (s_totals.empty()) throw std::invalid_argument("phase grid: no s values");
    GridTable grid;
    grid.s_totals = s_totals;
    grid.m_values = cfg.m_values;
    grid.seed = cfg.base_seed.value;
    {
        std::ostringstream config;
        config << "mode=grid;levels_template=" << signal_rule.levels_template
               << ";sparsity_template=" << signal_rule.sparsity_template
               << ";solver_levels_template=" << solver_rule.levels_template
               << ";solver_sparsity_template=" << solver_rule.sparsity_template << ";s=";
        for (std::size_t i = 0; i < s_totals.size(); ++i) config << (i ? "," : "") << s_totals[i];
        config << ';' << cfg.canonical_string();
        grid.config = config.str();
    }

    bool any_feasible = false;
    for (int s_total : s_totals) {
        const std::optional<LevelStructure> signal_structure = signal_rule.instantiate(cfg.N, s_total);
        const std::optional<LevelStructure> solver_structure = solver_rule.instantiate(cfg.N, s_total);
        if (!signal_structure || !solver_structure) {
            for (int m : cfg.m_values) {
                SweepRow row;
                row.m = m;
                row.s_total = s_total;
                row.feasible = false;
                row.success_rate = std::numeric_limits<double>::quiet_NaN();
                row.mean_rel_err = std::numeric_limits<double>::quiet_NaN();
                grid.rows.push_back(row);
            }
            continue;
        }
        any_feasible = true;
        ExperimentConfig cell_cfg = cfg;
        cell_cfg.structure = *signal_structure;
        cell_cfg.solver_structure = *solver_structure;
        cell_cfg.validate();
        for (int m : cfg.m_values) {
            const std::vector<TrialOutcome> outcomes = run_cell(cell_cfg, m);
            grid.rows.push_back(summarize(outcomes, m, s_total));
            if (dump_trials) grid.trial_dump.insert(grid.trial_dump.end(), outcomes.begin(), outcomes.end());
        }
    }
    if (!any_feasible) throw std::invalid_argument("phase grid: every (s, structure) cell is infeasible");
    return grid;
}

namespace {

std::string format_rate(double rate) {
    if (std::isnan(rate)) return "nan";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", rate);
    return buffer;
}

std::string format_mean(double mean) {
    if (std::isnan(mean)) return "nan";
    if (std::isinf(mean)) return "inf";
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.5e", mean);
    return buffer;
}

void write_summary(const std::vector<SweepRow>& rows, std::uint64_t seed, const std::string& config,
                   const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# seed=" << seed << '\n';
    out << "# config=" << config << '\n';
    out << "m,s_total,trials,successes,success_rate,mean_rel_err\n";
    for (const SweepRow& row : rows) {
        out << row.m << ',' << row.s_total << ',' << row.trials << ',' << row.successes << ','
            << format_rate(row.success_rate) << ',' << format_mean(row.mean_rel_err) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void emit_csv(const SweepTable& table, const std::string& path) {
    if (table.rows.empty()) throw std::invalid_argument("emit_csv: empty table");
    write_summary(table.rows, table.seed, table.config, path);
}

void emit_csv(const GridTable& grid, const std::string& path) {
    if (grid.rows.empty()) throw std::invalid_argument("emit_csv: empty grid");
    write_summary(grid.rows, grid.seed, grid.config, path);
}

void emit_trials_csv(const std::vector<TrialOutcome>& outcomes, std::uint64_t seed, const std::string& config,
                     const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "# seed=" << seed << '\n';
    out << "# config=" << config << '\n';
    out << "m,s_total,trial_index,rel_err,success,iterations,stop_reason\n";
    for (const TrialOutcome& outcome : outcomes) {
        out << outcome.m << ',' << outcome.s_total << ',' << outcome.trial_index << ','
            << (std::isinf(outcome.rel_err) ? "inf" : format_g(outcome.rel_err)) << ','
            << (outcome.success ? 1 : 0) << ',' << outcome.iterations << ',' << stop_reason_label(outcome)
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

void emit_svg_heatmap(const GridTable& grid, const std::string& path) {
    if (grid.rows.empty()) throw std::invalid_argument("emit_svg_heatmap: empty grid");
    constexpr int cell = 20;
    constexpr int left = 48;
    constexpr int top = 12;
    constexpr int right = 12;
    constexpr int bottom = 36;
    const int cols = static_cast<int>(grid.m_values.size());
    const int rows = static_cast<int>(grid.s_totals.size());
    const int width = left + cols * cell + right;
    const int height = top + rows * cell + bottom;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\">\n";
    out << "  <defs>\n"
           "    <pattern id=\"skipped\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">\n"
           "      <line x1=\"0\" y1=\"6\" x2=\"6\" y2=\"0\" stroke=\"#999999\" stroke-width=\"1\"/>\n"
           "    </pattern>\n"
           "  </defs>\n";
    for (int si = 0; si < rows; ++si) {
        for (int mi = 0; mi < cols; ++mi) {
            const SweepRow& row = grid.cell(si, mi);
            const int x = left + mi * cell;
            const int y = top + si * cell;
            out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
                << "\" fill=\"";
            if (!row.feasible) {
                out << "url(#skipped)";
            } else {
                const int gray = static_cast<int>(std::lround(std::clamp(row.success_rate, 0.0, 1.0) * 255.0));
                char color[8];
                std::snprintf(color, sizeof(color), "#%02x%02x%02x", gray, gray, gray);
                out << color;
            }
            out << "\"/>\n";
        }
    }
    for (int mi = 0; mi < cols; ++mi) {
        const int x = left + mi * cell + cell / 2;
        out << "  <text x=\"" << x << "\" y=\"" << top + rows * cell + 14
            << "\" text-anchor=\"middle\" font-size=\"10\">" << grid.m_values[static_cast<std::size_t>(mi)]
            << "</text>\n";
    }
    out << "  <text x=\"" << left + cols * cell / 2 << "\" y=\"" << top + rows * cell + 30
        << "\" text-anchor=\"middle\" font-size=\"11\">m</text>\n";
    for (int si = 0; si < rows; ++si) {
        const int y = top + si * cell + cell / 2 + 4;
        out << "  <text x=\"" << left - 6 << "\" y=\"" << y << "\" text-anchor=\"end\" font-size=\"10\">"
            << grid.s_totals[static_cast<std::size_t>(si)] << "</text>\n";
    }
    out << "  <text x=\"12\" y=\"" << top + rows * cell / 2 << "\" text-anchor=\"middle\" font-size=\"11\">s</text>\n";
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace levelcs
