#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "grl/pipeline.hpp"
#include "grl/statevector.hpp"
#include "test_util.hpp"

namespace grl {
namespace {

namespace fs = std::filesystem;
using testing::random_circuit;

PipelineConfig tiny_config() {
    PipelineConfig c = ci_pipeline_config();
    c.schedule = {{1e-3, 6, true}, {5e-2, 8, false}};
    c.seeds = {0, 1};
    c.optimizer_evaluations = 150;
    c.agent.batch_size = 8;
    c.k_top = 6;
    return c;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("grl_pipeline_" + name);
    fs::remove_all(p);
    return p;
}

TEST(TopK, KeepsBestPerStructureSortedAndBounded) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> cost(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        TopKStore store(5);
        std::map<std::string, double> best;  // oracle: per-structure minimum
        for (int i = 0; i < 60; ++i) {
            Circuit c = random_circuit(2, 1 + static_cast<int>(rng() % 2), kNativeKinds, rng);
            const double v = cost(rng);
            const std::string key = structure_key(c);
            best[key] = best.count(key) ? std::min(best[key], v) : v;
            if (store.admits(v)) store.offer({c, -v, v, 1.0, 0});
        }
        std::vector<double> expected;
        for (const auto& [k, v] : best) expected.push_back(v);
        std::sort(expected.begin(), expected.end());
        expected.resize(std::min<std::size_t>(expected.size(), 5));
        std::vector<double> got;
        std::vector<std::string> keys;
        for (const auto& e : store.entries()) {
            got.push_back(e.cost);
            keys.push_back(structure_key(e.circuit));
        }
        ASSERT_EQ(got, expected);
        std::sort(keys.begin(), keys.end());
        EXPECT_EQ(std::adjacent_find(keys.begin(), keys.end()), keys.end());
    }
}

TEST(TopK, DuplicateWithEqualCostKeepsEarlierEntry) {
    TopKStore store(3);
    Circuit a(2);
    a.append(GateInstruction::rz(0, Angle::value(0.1)));
    Circuit b(2);
    b.append(GateInstruction::rz(0, Angle::value(0.2)));
    store.offer({a, 0.0, 0.5, 1.0, 0});
    store.offer({b, 0.0, 0.5, 1.0, 1});
    ASSERT_EQ(store.entries().size(), 1u);
    EXPECT_EQ(store.entries()[0].seed, 0u);
    store.offer({b, 0.0, 0.25, 1.0, 1});
    EXPECT_EQ(store.entries()[0].seed, 1u);
}

TEST(Config, PresetsAndOverrides) {
    const PipelineConfig full = paper_pipeline_config();
    EXPECT_EQ(full.schedule.size(), 3u);
    EXPECT_EQ(full.schedule[2].episodes, 15000);
    EXPECT_EQ(full.agent.hidden, std::vector<int>(5, 1000));
    const PipelineConfig ci = ci_pipeline_config();
    EXPECT_EQ(ci.schedule[0].episodes * 25, full.schedule[0].episodes);
    EXPECT_EQ(ci.effective_t_max(), 20);

    const Json j = {{"preset", "ci"},
                    {"model", {{"num_qubits", 3}}},
                    {"gateset", "universal"},
                    {"schedule", {{{"field", 1.0}, {"episodes", 7}}}},
                    {"agent", {{"learning_rate", 5e-4}}}};
    const PipelineConfig c = config_from_json(j);
    EXPECT_EQ(c.num_qubits, 3);
    EXPECT_EQ(c.effective_t_max(), 50);
    EXPECT_EQ(c.gateset, GateSet::Universal);
    EXPECT_EQ(c.agent.learning_rate, 5e-4);
    EXPECT_EQ(c.agent.hidden, (std::vector<int>{64, 64}));
    EXPECT_FALSE(c.schedule[0].extract);
}

TEST(Config, RoundTripsThroughJson) {
    PipelineConfig c = tiny_config();
    c.initial_library.push_back({{"g0", 1, 1, {{GateKind::SX, {0, 0}, -1}, {GateKind::RZ, {0, 0}, 0}}}, 1e-3, 2.0});
    const Json j = config_to_json(c);
    EXPECT_EQ(config_to_json(config_from_json(Json::parse(j.dump()))), j);
}

TEST(Config, RejectsInvalidSchedules) {
    EXPECT_THROW(config_from_json({{"preset", "fast"}}), std::invalid_argument);
    EXPECT_THROW(config_from_json({{"gateset", "clifford"}}), std::invalid_argument);
    EXPECT_THROW(config_from_json({{"schedule", {{{"field", 1.0}, {"episodes", 5}}, {{"field", 0.5}, {"episodes", 5}}}}}),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json({{"schedule", Json::array()}}), std::invalid_argument);
    EXPECT_THROW(config_from_json({{"seeds", {1, 1}}}), std::invalid_argument);
    EXPECT_THROW(config_from_json({{"model", {{"num_qubits", 2}, {"boundary", "periodic"}}}}), std::invalid_argument);
    EXPECT_THROW(config_from_json({{"model", {{"num_qubits", 13}}}}), std::invalid_argument);
}

TEST(Report, SummaryAggregatesOverSeeds) {
    std::vector<ReportRow> rows(3);
    const double errors[] = {1e-3, 1e-5, 1e-4};
    for (int i = 0; i < 3; ++i) {
        rows[static_cast<std::size_t>(i)].error = errors[i];
        rows[static_cast<std::size_t>(i)].metrics.total = 10 + i;
        rows[static_cast<std::size_t>(i)].metrics.two_qubit = i;
        rows[static_cast<std::size_t>(i)].metrics.depth = 3 * i;
    }
    const RegimeSummary s = summarize(1.0, 2, rows);
    EXPECT_EQ(s.min_error, 1e-5);
    EXPECT_DOUBLE_EQ(s.avg_error, (1e-3 + 1e-5 + 1e-4) / 3);
    EXPECT_DOUBLE_EQ(s.avg_gates, 11.0);
    EXPECT_DOUBLE_EQ(s.avg_two_qubit, 1.0);
    EXPECT_DOUBLE_EQ(s.avg_depth, 3.0);
}

TEST(Solve, EpisodesRespectHorizonAndThresholdsArePassedThrough) {
    const PipelineConfig c = tiny_config();
    const SeedRun run = run_regime_seed(c, c.schedule[1], 3, {});
    ASSERT_EQ(run.episodes.size(), 8u);
    CurriculumState cur = curriculum_init(c.curriculum, fake_minimum_energy({2, 1.0, 5e-2, Boundary::Open}));
    for (const EpisodeLog& e : run.episodes) {
        EXPECT_GE(e.steps, 1);
        EXPECT_LE(e.steps, c.effective_t_max());
        EXPECT_EQ(e.threshold, cur.threshold);
        cur = curriculum_update(cur, {e.min_cost, e.success});
    }
    const double e0 = ground_state_oracle(build_tfim({2, 1.0, 5e-2, Boundary::Open})).energy;
    EXPECT_GE(run.best.energy, e0 - 1e-12);
    EXPECT_EQ(run.best.cost, run.store.entries().front().cost);
}

TEST(Pipeline, DeterministicAcrossRunsAndWorkerCounts) {
    const PipelineConfig c = tiny_config();
    const fs::path da = scratch("a"), db = scratch("b");
    const RunReport a = run_pipeline(c, {da, false, 1});
    const RunReport b = run_pipeline(c, {db, false, 2});
    EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
    EXPECT_EQ(read_text(da / "report.json"), read_text(db / "report.json"));
    EXPECT_EQ(read_text(da / "regime_0" / "gadgets.json"), read_text(db / "regime_0" / "gadgets.json"));
    ASSERT_EQ(a.rows.size(), 4u);
    for (const ReportRow& r : a.rows) {
        EXPECT_GE(r.error, 0.0);
        EXPECT_EQ(r.error, std::abs(r.energy - r.oracle_energy));
    }
}

TEST(Pipeline, ResumeSkipsCompletedRegimes) {
    const PipelineConfig c = tiny_config();
    const fs::path dir = scratch("resume");
    const RunReport full = run_pipeline(c, {dir, false, 1});
    fs::remove(dir / "regime_1" / "done.json");
    const auto stamp = fs::last_write_time(dir / "regime_0" / "seed_0" / "episodes.jsonl");
    const RunReport resumed = run_pipeline(c, {dir, true, 1});
    EXPECT_EQ(report_to_json(resumed).dump(), report_to_json(full).dump());
    EXPECT_EQ(fs::last_write_time(dir / "regime_0" / "seed_0" / "episodes.jsonl"), stamp);

    PipelineConfig other = c;
    other.seeds = {5};
    EXPECT_THROW(run_pipeline(other, {dir, true, 1}), std::invalid_argument);
}

TEST(Pipeline, ReportFromDiskMatchesAndDetectsTampering) {
    const PipelineConfig c = tiny_config();
    const fs::path dir = scratch("report");
    const RunReport live = run_pipeline(c, {dir, false, 1});
    EXPECT_EQ(report_to_json(report_from_run(dir)).dump(), report_to_json(live).dump());

    Json best = read_json(dir / "regime_1" / "seed_0" / "best.json");
    best["circuits"][0]["energy"] = best["circuits"][0]["energy"].get<double>() - 1e-6;
    write_json(dir / "regime_1" / "seed_0" / "best.json", best);
    EXPECT_THROW(report_from_run(dir), std::runtime_error);
    fs::remove(dir / "regime_1" / "done.json");
    EXPECT_THROW(report_from_run(dir), std::runtime_error);
}

TEST(Pipeline, ExtractedGadgetsExtendTheNextRegime) {
    PipelineConfig c = tiny_config();
    c.initial_library.push_back({{"g0", 1, 1, {{GateKind::SX, {0, 0}, -1}, {GateKind::RZ, {0, 0}, 0}}}, 0.0, 0.0});
    const RunReport r = run_pipeline(c, {scratch("gadgets"), false, 1});
    EXPECT_EQ(r.rows[0].gadgets, 1);
    EXPECT_EQ(r.rows[2].gadgets, static_cast<int>(r.library.size()));
    EXPECT_EQ(r.library[0].gadget.name, "g0");
    std::set<std::string> keys;
    for (const LibraryEntry& e : r.library) EXPECT_TRUE(keys.insert(fragment_of(e.gadget).key()).second);
}

TEST(Transpile, SingleCxBecomesOneCz) {
    Circuit c(2);
    c.append(GateInstruction::cx(0, 1));
    const CircuitMetrics m = transpile_metrics(c);
    EXPECT_EQ(m.count(GateKind::CZ), 1);
    EXPECT_EQ(m.count(GateKind::CX), 0);
    EXPECT_GT(m.total, 1);
}

}  // namespace
}  // namespace grl
