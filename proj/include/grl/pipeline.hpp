#pragma once

// Training orchestration: single-regime solves, the easy -> hard pipeline
// with gadget extraction between regimes, top-k persistence and the run
// report. Worker count comes from GRL_WORKERS (default 1); results never
// depend on it.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "grl/agent.hpp"
#include "grl/environment.hpp"
#include "grl/gadget_synth.hpp"
#include "grl/hamiltonian.hpp"
#include "grl/io.hpp"

namespace grl {

enum class GateSet { Native, Universal };

std::span<const GateKind> gate_kinds(GateSet set);

struct RegimeConfig {
    double field = 1.0;
    int episodes = 100;
    /// Extract gadgets from this regime's top-k before the next regime.
    bool extract = false;
};

struct PipelineConfig {
    int num_qubits = 2;
    double coupling = 1.0;
    Boundary boundary = Boundary::Open;
    GateSet gateset = GateSet::Native;
    /// 0 picks 20 for two qubits and 50 otherwise.
    int t_max = 0;
    std::vector<RegimeConfig> schedule;
    std::vector<std::uint64_t> seeds{0, 1, 2};
    std::string preset = "ci";
    AgentConfig agent = ci_agent_config();
    CurriculumConfig curriculum;
    SynthConfig synth;
    int k_top = 20;
    int max_new_gadgets = 2;
    int optimizer_evaluations = 1000;
    /// Gadgets available from the first regime on (cross-size transfer).
    std::vector<LibraryEntry> initial_library;

    int effective_t_max() const { return t_max > 0 ? t_max : (num_qubits == 2 ? 20 : 50); }
};

/// Shipped defaults: 5000/10000/15000 episodes at h = 1e-3, 5e-2, 1 with the 5 x 1000 agent.
PipelineConfig paper_pipeline_config();
/// The same schedule 25x shorter, with the 2x64 agent.
PipelineConfig ci_pipeline_config();

/// Reads a config file on top of the preset it names ("preset": "paper"|"ci").
PipelineConfig config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json config_to_json(const PipelineConfig& config);
/// Throws std::invalid_argument on an unusable config.
void validate(const PipelineConfig& config);

/// Best circuits by cost, at most one per structure; a repeated structure
/// keeps the lower cost (ties keep the earlier entry).
class TopKStore {
public:
    explicit TopKStore(int capacity) : capacity_(capacity) {}

    /// Cheap pre-check so callers can skip building circuits that would be dropped.
    bool admits(double cost) const;
    void offer(StoredCircuit entry);
    void merge(const TopKStore& other);
    const std::vector<StoredCircuit>& entries() const { return entries_; }
    int capacity() const { return capacity_; }

private:
    int capacity_;
    std::vector<StoredCircuit> entries_;  // ascending cost
};

struct EpisodeLog {
    int episode = 0;
    int steps = 0;
    double final_cost = 0.0;
    double final_energy = 0.0;
    double min_cost = 0.0;
    double threshold = 0.0;
    bool success = false;
};

Json episode_to_json(const EpisodeLog& log);

struct SeedRun {
    std::uint64_t seed = 0;
    std::vector<EpisodeLog> episodes;
    TopKStore store{20};
    StoredCircuit best;
    int successes = 0;
};

/// Trains a fresh agent for one regime and seed. `regime_index` decorrelates
/// the agent's random stream across regimes.
SeedRun run_regime_seed(const PipelineConfig& config, const RegimeConfig& regime, std::uint64_t seed,
                        const GadgetLibrary& library, int regime_index = 0);

/// Identity-cancels each stored circuit, then grows the library with the
/// current gadgets already in the grammar.
ExtractionResult extract_from_store(std::span<const StoredCircuit> corpus, const std::vector<LibraryEntry>& library,
                                    const PipelineConfig& config);

struct ReportRow {
    double field = 0.0;
    std::uint64_t seed = 0;
    int gadgets = 0;
    double energy = 0.0;
    double oracle_energy = 0.0;
    double error = 0.0;
    int successes = 0;
    int episodes = 0;
    CircuitMetrics metrics;  // of the best circuit as built
    CircuitMetrics native;   // after decomposition to native gates and simplification
};

struct RegimeSummary {
    double field = 0.0;
    int gadgets = 0;
    double min_error = 0.0;
    double avg_error = 0.0;
    double avg_gates = 0.0;
    double avg_two_qubit = 0.0;
    double avg_depth = 0.0;
};

struct RunReport {
    /// Artifact choices not fixed by the method, echoed so readers can tell.
    std::vector<int> episode_budgets;
    int k_top = 0;
    std::vector<ReportRow> rows;
    std::vector<RegimeSummary> regimes;
    std::vector<LibraryEntry> library;
};

RegimeSummary summarize(double field, int gadgets, std::span<const ReportRow> rows);
ReportRow make_report_row(const PipelineConfig& config, double field, const SeedRun& run, int gadgets);

Json report_to_json(const RunReport& report);
RunReport report_from_json(const Json& j);
/// Markdown table in the per-regime summary layout.
std::string report_markdown(const RunReport& report);

struct PipelineOptions {
    std::filesystem::path out_dir;
    bool resume = false;
    /// 0 reads GRL_WORKERS.
    int workers = 0;
};

/// Regimes in order; each writes its artifacts and a done marker under
/// out_dir/regime_<i>. With `resume`, completed regimes are loaded instead
/// of retrained.
RunReport run_pipeline(const PipelineConfig& config, const PipelineOptions& options);

/// Re-simulates every stored circuit under out_dir and rebuilds the report
/// from disk; throws std::runtime_error on missing artifacts or a stored
/// energy that does not reproduce within 1e-9.
RunReport report_from_run(const std::filesystem::path& out_dir);

int worker_count_from_env();

}  // namespace grl
