#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "levelcs/experiments.hpp"

using namespace levelcs;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++count;
    return count;
}

ExperimentConfig small_identity_config(Algorithm alg) {
    const LevelStructure ls({4, 8}, {2, 1});
    ExperimentConfig cfg(ls, ls);
    cfg.algorithm = alg;
    cfg.m_values = {8};
    cfg.trials = 4;
    cfg.base_seed = Seed{77};
    cfg.identity_mode = true;
    return cfg;
}

}  // namespace

TEST_CASE("default normalizations per algorithm") {
    CHECK(default_normalization(Algorithm::Omp) == Normalization::Columns);
    CHECK(default_normalization(Algorithm::Iht) == Normalization::Spectral);
    CHECK(default_normalization(Algorithm::Niht) == Normalization::None);
    CHECK(default_normalization(Algorithm::Cosamp) == Normalization::None);
    CHECK(normalization_from_name("columns") == Normalization::Columns);
    CHECK_THROWS_AS(normalization_from_name("col"), std::invalid_argument);
}

TEST_CASE("identity-mode trials recover exactly and deterministically") {
    for (Algorithm alg : {Algorithm::Iht, Algorithm::Niht, Algorithm::Cosamp, Algorithm::Omp}) {
        const ExperimentConfig cfg = small_identity_config(alg);
        const TrialOutcome outcome = run_trial(cfg, 8, 0);
        CHECK(outcome.success);
        CHECK(outcome.rel_err <= 1e-12);
        const TrialOutcome repeat = run_trial(cfg, 8, 0);
        CHECK(outcome.rel_err == repeat.rel_err);
        CHECK(outcome.iterations == repeat.iterations);
    }
}

TEST_CASE("trial seeds pair across algorithms and solver structures") {
    ExperimentConfig iht_cfg = small_identity_config(Algorithm::Iht);
    ExperimentConfig omp_cfg = small_identity_config(Algorithm::Omp);
    omp_cfg.solver_structure = LevelStructure({8}, {3});
    CHECK(make_cell_tag(iht_cfg, 8) == make_cell_tag(omp_cfg, 8));
    CHECK(make_cell_tag(iht_cfg, 8) != make_cell_tag(iht_cfg, 4));
    iht_cfg.noise_sigma = 0.1;
    CHECK(make_cell_tag(iht_cfg, 8) != make_cell_tag(omp_cfg, 8));
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = small_identity_config(Algorithm::Iht);
    cfg.m_values = {4};  // identity mode requires m = N
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.identity_mode = false;
    cfg.m_values = {9};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.m_values = {};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.m_values = {4};
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("phase line rows follow the m ordering") {
    ExperimentConfig cfg = small_identity_config(Algorithm::Cosamp);
    cfg.identity_mode = false;
    cfg.m_values = {4, 6, 8};
    cfg.trials = 3;
    const SweepTable table = sweep_phase_line(cfg);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].m == 4);
    CHECK(table.rows[1].m == 6);
    CHECK(table.rows[2].m == 8);
    for (const SweepRow& row : table.rows) {
        CHECK(row.s_total == 3);
        CHECK(row.trials == 3);
        CHECK(row.successes <= row.trials);
        CHECK(row.success_rate >= 0.0);
        CHECK(row.success_rate <= 1.0);
        CHECK(row.mean_rel_err >= 0.0);
    }

    // single-m identity sweep reaches certainty
    const SweepTable certain = sweep_phase_line(small_identity_config(Algorithm::Omp));
    CHECK(certain.rows.at(0).success_rate == 1.0);
}

TEST_CASE("sweeps are reproducible and thread-count independent") {
    ExperimentConfig cfg = small_identity_config(Algorithm::Cosamp);
    cfg.identity_mode = false;
    cfg.m_values = {5, 8};
    cfg.trials = 6;
    const SweepTable serial = sweep_phase_line(cfg, true);
    cfg.threads = 3;
    const SweepTable threaded = sweep_phase_line(cfg, true);
    REQUIRE(serial.rows.size() == threaded.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].success_rate == threaded.rows[i].success_rate);
        CHECK(serial.rows[i].mean_rel_err == threaded.rows[i].mean_rel_err);
    }
    REQUIRE(serial.trial_dump.size() == threaded.trial_dump.size());
    for (std::size_t i = 0; i < serial.trial_dump.size(); ++i)
        CHECK(serial.trial_dump[i].rel_err == threaded.trial_dump[i].rel_err);
}

TEST_CASE("trial dump re-aggregates to the summary") {
    ExperimentConfig cfg = small_identity_config(Algorithm::Iht);
    cfg.identity_mode = false;
    cfg.m_values = {5, 8};
    cfg.trials = 5;
    const SweepTable table = sweep_phase_line(cfg, true);
    REQUIRE(table.trial_dump.size() == 10);
    std::size_t cursor = 0;
    for (const SweepRow& row : table.rows) {
        int successes = 0;
        double err_sum = 0.0;
        for (int t = 0; t < row.trials; ++t, ++cursor) {
            CHECK(table.trial_dump[cursor].m == row.m);
            CHECK(table.trial_dump[cursor].trial_index == t);
            if (table.trial_dump[cursor].success) ++successes;
            err_sum += table.trial_dump[cursor].rel_err;
        }
        CHECK(successes == row.successes);
        CHECK(err_sum / row.trials == row.mean_rel_err);
    }
}

TEST_CASE("summary csv format is pinned") {
    SweepTable table;
    table.seed = 123;
    table.config = "mode=line;algorithm=test";
    SweepRow row;
    row.m = 8;
    row.s_total = 6;
    row.trials = 10;
    row.successes = 3;
    row.success_rate = 0.3;
    row.mean_rel_err = 0.5;
    table.rows.push_back(row);
    const std::string path = "test_summary.csv";
    emit_csv(table, path);
    CHECK(slurp(path) ==
          "# seed=123\n"
          "# config=mode=line;algorithm=test\n"
          "m,s_total,trials,successes,success_rate,mean_rel_err\n"
          "8,6,10,3,0.3000,5.00000e-01\n");

    table.rows[0].mean_rel_err = std::numeric_limits<double>::infinity();
    emit_csv(table, path);
    CHECK(slurp(path).find("8,6,10,3,0.3000,inf\n") != std::string::npos);
    std::remove(path.c_str());

    SweepTable empty;
    CHECK_THROWS_AS(emit_csv(empty, path), std::invalid_argument);
}

TEST_CASE("svg heatmap pins the cell geometry and color map") {
    GridTable grid;
    grid.seed = 1;
    grid.config = "test";
    grid.s_totals = {4, 8};
    grid.m_values = {8, 16, 24};
    const double rates[6] = {1.0, 0.5, 0.0, 0.25, 0.75, 0.0};
    for (int i = 0; i < 6; ++i) {
        SweepRow row;
        row.m = grid.m_values[static_cast<std::size_t>(i % 3)];
        row.s_total = grid.s_totals[static_cast<std::size_t>(i / 3)];
        row.trials = 4;
        row.success_rate = rates[i];
        grid.rows.push_back(row);
    }
    grid.rows[5].feasible = false;
    grid.rows[5].success_rate = std::numeric_limits<double>::quiet_NaN();

    const std::string path = "test_heatmap.svg";
    emit_svg_heatmap(grid, path);
    const std::string svg = slurp(path);
    std::remove(path.c_str());

    CHECK(count_occurrences(svg, "<rect") == 6);  // exactly one rect per cell
    CHECK(svg.find("fill=\"#ffffff\"") != std::string::npos);
    CHECK(svg.find("fill=\"#808080\"") != std::string::npos);
    CHECK(svg.find("fill=\"#000000\"") != std::string::npos);
    CHECK(svg.find("fill=\"#404040\"") != std::string::npos);  // 0.25 rounds to 64
    CHECK(svg.find("url(#skipped)") != std::string::npos);
    CHECK(svg.find("width=\"20\" height=\"20\"") != std::string::npos);
    CHECK(svg.find(">24</text>") != std::string::npos);  // m tick label
    CHECK(svg.find(">8</text>") != std::string::npos);   // s tick label
}

TEST_CASE("structure rule templates") {
    const StructureRule figure3{"N/4,N/2,3N/4,N", "s/2,0,s/2,0"};
    const auto instantiated = figure3.instantiate(64, 8);
    REQUIRE(instantiated.has_value());
    CHECK(instantiated->levels() == std::vector<int>{16, 32, 48, 64});
    CHECK(instantiated->sparsities() == std::vector<int>{4, 0, 4, 0});

    const StructureRule figure4{"3s/4,N", "3s/4,s/4"};
    const auto two_level = figure4.instantiate(64, 16);
    REQUIRE(two_level.has_value());
    CHECK(two_level->levels() == std::vector<int>{12, 64});
    CHECK(two_level->sparsities() == std::vector<int>{12, 4});
    // saturated first level stays feasible by construction
    CHECK(two_level->local_sparsity(1) == two_level->level_width(1));

    // infeasible: s_k exceeds the level width
    CHECK_FALSE(figure3.instantiate(64, 40).has_value());
    // infeasible: first boundary reaches N
    CHECK_FALSE(figure4.instantiate(16, 32).has_value());
    // plain integers work
    const StructureRule fixed{"4,8", "2,1"};
    CHECK(fixed.instantiate(8, 3).has_value());
    // last level must equal N
    CHECK_FALSE(fixed.instantiate(16, 3).has_value());
}

TEST_CASE("phase grid marks infeasible rows and errors when empty") {
    ExperimentConfig cfg = small_identity_config(Algorithm::Cosamp);
    cfg.identity_mode = false;
    cfg.m_values = {6, 8};
    cfg.trials = 2;
    const StructureRule rule{"N/2,N", "s/2,s/2"};

    const GridTable grid = sweep_phase_grid(cfg, {2, 4, 10}, rule, rule);
    REQUIRE(grid.rows.size() == 6);
    CHECK(grid.cell(0, 0).feasible);
    CHECK(grid.cell(1, 0).feasible);
    CHECK_FALSE(grid.cell(2, 0).feasible);  // s/2 = 5 > width 4
    CHECK(std::isnan(grid.cell(2, 1).success_rate));

    // a single-cell grid matches the corresponding phase-line cell
    ExperimentConfig line_cfg = cfg;
    line_cfg.structure = *rule.instantiate(8, 4);
    line_cfg.solver_structure = line_cfg.structure;
    line_cfg.m_values = {8};
    const SweepTable line = sweep_phase_line(line_cfg);
    const GridTable single = sweep_phase_grid(line_cfg, {4}, rule, rule);
    CHECK(single.rows.at(0).success_rate == line.rows.at(0).success_rate);
    CHECK(single.rows.at(0).mean_rel_err == line.rows.at(0).mean_rel_err);

    CHECK_THROWS_AS(sweep_phase_grid(cfg, {100}, rule, rule), std::invalid_argument);
}

TEST_CASE("niht tracks or beats iht on paired seeds (observational)") {
    const LevelStructure ls({16, 32}, {3, 2});
    ExperimentConfig iht_cfg(ls, ls);
    iht_cfg.algorithm = Algorithm::Iht;
    iht_cfg.normalization = Normalization::Spectral;
    iht_cfg.m_values = {20};
    iht_cfg.trials = 20;
    iht_cfg.base_seed = Seed{5};
    ExperimentConfig niht_cfg = iht_cfg;
    niht_cfg.algorithm = Algorithm::Niht;
    niht_cfg.normalization = Normalization::None;

    const SweepTable iht_table = sweep_phase_line(iht_cfg);
    const SweepTable niht_table = sweep_phase_line(niht_cfg);
    MESSAGE("paired success rates at m=20: iht=", iht_table.rows.at(0).success_rate,
            " niht=", niht_table.rows.at(0).success_rate);
    CHECK(iht_table.rows.at(0).trials == niht_table.rows.at(0).trials);
}
