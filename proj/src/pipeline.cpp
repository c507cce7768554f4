#include "grl/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "grl/statevector.hpp"

namespace grl {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

TfimSpec tfim_for(const PipelineConfig& c, double field) { return {c.num_qubits, c.coupling, field, c.boundary}; }

const char* gateset_name(GateSet s) { return s == GateSet::Native ? "native" : "universal"; }

GateSet parse_gateset(const std::string& s) {
    if (s == "native") return GateSet::Native;
    if (s == "universal") return GateSet::Universal;
    throw std::invalid_argument("gateset must be \"native\" or \"universal\"");
}

Json metrics_to_json(const CircuitMetrics& m) {
    Json counts = Json::object();
    for (int k = 0; k < kNumGateKinds - 1; ++k) counts[std::string(kind_name(static_cast<GateKind>(k)))] = m.counts[k];
    return Json{{"counts", std::move(counts)}, {"total", m.total}, {"two_qubit", m.two_qubit}, {"depth", m.depth}};
}

CircuitMetrics metrics_from_json(const Json& j) {
    CircuitMetrics m;
    for (int k = 0; k < kNumGateKinds - 1; ++k) {
        m.counts[static_cast<std::size_t>(k)] = j.at("counts").at(std::string(kind_name(static_cast<GateKind>(k))));
    }
    m.total = j.at("total");
    m.two_qubit = j.at("two_qubit");
    m.depth = j.at("depth");
    return m;
}

Json row_to_json(const ReportRow& r) {
    return Json{{"field", r.field},
                {"seed", r.seed},
                {"gadgets", r.gadgets},
                {"energy", r.energy},
                {"oracle_energy", r.oracle_energy},
                {"error", r.error},
                {"successes", r.successes},
                {"episodes", r.episodes},
                {"metrics", metrics_to_json(r.metrics)},
                {"native", metrics_to_json(r.native)}};
}

ReportRow row_from_json(const Json& j) {
    ReportRow r;
    r.field = j.at("field");
    r.seed = j.at("seed");
    r.gadgets = j.at("gadgets");
    r.energy = j.at("energy");
    r.oracle_energy = j.at("oracle_energy");
    r.error = j.at("error");
    r.successes = j.at("successes");
    r.episodes = j.at("episodes");
    r.metrics = metrics_from_json(j.at("metrics"));
    r.native = metrics_from_json(j.at("native"));
    return r;
}

Json summary_to_json(const RegimeSummary& s) {
    return Json{{"field", s.field},       {"gadgets", s.gadgets},           {"min_error", s.min_error},
                {"avg_error", s.avg_error}, {"avg_gates", s.avg_gates}, {"avg_two_qubit", s.avg_two_qubit},
                {"avg_depth", s.avg_depth}};
}

RegimeSummary summary_from_json(const Json& j) {
    return {j.at("field"),     j.at("gadgets"),       j.at("min_error"), j.at("avg_error"),
            j.at("avg_gates"), j.at("avg_two_qubit"), j.at("avg_depth")};
}

std::string regime_dir_name(std::size_t i) { return "regime_" + std::to_string(i); }
std::string seed_dir_name(std::uint64_t s) { return "seed_" + std::to_string(s); }

std::string curve_csv(const std::vector<EpisodeLog>& episodes) {
    std::string csv = "episode,threshold,min_cost,final_energy,success\n";
    char line[160];
    for (const EpisodeLog& e : episodes) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%d\n", e.episode, e.threshold, e.min_cost,
                      e.final_energy, e.success ? 1 : 0);
        csv += line;
    }
    return csv;
}

double energy_of(const Circuit& circuit, const PauliHamiltonian& ham) { return expectation(simulate(circuit), ham); }

}  // namespace

ExtractionResult extract_from_store(std::span<const StoredCircuit> corpus, const std::vector<LibraryEntry>& library,
                                    const PipelineConfig& config) {
    std::vector<CorpusEntry> entries;
    for (const StoredCircuit& s : corpus) entries.push_back({simplify(s.circuit), s.energy, s.field});
    std::vector<Fragment> existing;
    for (const LibraryEntry& e : library) existing.push_back(fragment_of(e.gadget));
    return extract_gadgets(make_scored_corpus(std::move(entries), gadgets_of(library)), gate_kinds(config.gateset),
                           config.max_new_gadgets, config.synth, existing);
}

std::span<const GateKind> gate_kinds(GateSet set) {
    return set == GateSet::Native ? std::span<const GateKind>(kNativeKinds) : std::span<const GateKind>(kUniversalKinds);
}

PipelineConfig paper_pipeline_config() {
    PipelineConfig c;
    c.preset = "paper";
    c.agent = paper_agent_config();
    c.schedule = {{1e-3, 5000, true}, {5e-2, 10000, true}, {1.0, 15000, false}};
    return c;
}

PipelineConfig ci_pipeline_config() {
    PipelineConfig c;
    c.preset = "ci";
    c.agent = ci_agent_config();
    c.schedule = {{1e-3, 200, true}, {5e-2, 400, true}, {1.0, 600, false}};
    return c;
}

void validate(const PipelineConfig& c) {
    auto fail = [](const std::string& m) { throw std::invalid_argument("invalid config: " + m); };
    if (c.num_qubits < 1 || c.num_qubits > kMaxOracleQubits) fail("num_qubits outside the exact-oracle range");
    if (c.schedule.empty()) fail("empty schedule");
    for (std::size_t i = 0; i < c.schedule.size(); ++i) {
        if (c.schedule[i].episodes < 1) fail("episode budget must be positive");
        if (c.schedule[i].field < 0.0) fail("field must be non-negative");
        if (i > 0 && !(c.schedule[i].field > c.schedule[i - 1].field)) fail("fields must be strictly increasing");
    }
    if (c.seeds.empty()) fail("no seeds");
    for (std::size_t i = 0; i < c.seeds.size(); ++i) {
        if (std::count(c.seeds.begin(), c.seeds.end(), c.seeds[i]) > 1) fail("duplicate seed");
    }
    if (c.k_top < 1) fail("k_top must be positive");
    if (c.max_new_gadgets < 0) fail("max_new must be non-negative");
    if (c.optimizer_evaluations < 1) fail("optimizer budget must be positive");
    if (c.agent.dropout != 0.0) fail("dropout is not supported");
    (void)build_tfim(tfim_for(c, c.schedule.front().field));
    for (const LibraryEntry& e : c.initial_library) validate(e.gadget);
}

PipelineConfig config_from_json(const Json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    try {
        const std::string preset = j.value("preset", std::string("ci"));
        PipelineConfig c;
        if (preset == "paper") {
            c = paper_pipeline_config();
        } else if (preset == "ci") {
            c = ci_pipeline_config();
        } else {
            throw std::invalid_argument("preset must be \"paper\" or \"ci\"");
        }
        if (j.contains("model")) {
            const Json& m = j["model"];
            c.num_qubits = m.value("num_qubits", c.num_qubits);
            c.coupling = m.value("coupling", c.coupling);
            const std::string b = m.value("boundary", std::string("open"));
            if (b != "open" && b != "periodic") throw std::invalid_argument("boundary must be open or periodic");
            c.boundary = b == "open" ? Boundary::Open : Boundary::Periodic;
        }
        if (j.contains("gateset")) c.gateset = parse_gateset(j["gateset"]);
        c.t_max = j.value("t_max", c.t_max);
        if (j.contains("schedule")) {
            c.schedule.clear();
            for (const Json& r : j["schedule"]) {
                c.schedule.push_back({r.at("field").get<double>(), r.at("episodes").get<int>(), r.value("extract", false)});
            }
        }
        if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        if (j.contains("agent")) {
            const Json& a = j["agent"];
            AgentConfig& g = c.agent;
            g.hidden = a.value("hidden", g.hidden);
            g.batch_size = a.value("batch_size", g.batch_size);
            g.memory_capacity = a.value("memory_capacity", g.memory_capacity);
            g.dropout = a.value("dropout", g.dropout);
            g.learning_rate = a.value("learning_rate", g.learning_rate);
            g.target_update_period = a.value("target_update_period", g.target_update_period);
            g.gamma = a.value("gamma", g.gamma);
            const std::string mode = a.value("gamma_mode", std::string(g.gamma_mode == GammaMode::Fixed ? "fixed" : "annealed"));
            if (mode != "fixed" && mode != "annealed") throw std::invalid_argument("gamma_mode must be fixed or annealed");
            g.gamma_mode = mode == "fixed" ? GammaMode::Fixed : GammaMode::Annealed;
            g.gamma_final = a.value("gamma_final", g.gamma_final);
            g.gamma_decay = a.value("gamma_decay", g.gamma_decay);
            g.epsilon_decay = a.value("epsilon_decay", g.epsilon_decay);
            g.epsilon_min = a.value("epsilon_min", g.epsilon_min);
        }
        if (j.contains("curriculum")) {
            const Json& k = j["curriculum"];
            CurriculumConfig& u = c.curriculum;
            u.zeta_init = k.value("zeta_init", u.zeta_init);
            u.amortization = k.value("amortization", u.amortization);
            u.amortization_step = k.value("amortization_step", u.amortization_step);
            u.amortization_every = k.value("amortization_every", u.amortization_every);
            u.shift_radius = k.value("shift_radius", u.shift_radius);
            u.greedy_period = k.value("greedy_period", u.greedy_period);
            u.failure_streak_limit = k.value("failure_streak_limit", u.failure_streak_limit);
            u.min_threshold = k.value("min_threshold", u.min_threshold);
        }
        if (j.contains("gadgets")) {
            const Json& g = j["gadgets"];
            c.k_top = g.value("k_top", c.k_top);
            c.max_new_gadgets = g.value("max_new", c.max_new_gadgets);
            c.synth.max_arity = g.value("max_arity", c.synth.max_arity);
            c.synth.max_fragment_size = g.value("max_fragment_size", c.synth.max_fragment_size);
            c.synth.pseudocount = g.value("pseudocount", c.synth.pseudocount);
            c.synth.lambda = g.value("lambda", c.synth.lambda);
            c.synth.structure_penalty = g.value("structure_penalty", c.synth.structure_penalty);
            c.synth.min_support = g.value("min_support", c.synth.min_support);
            if (g.contains("initial_library")) {
                const Json& lib = g["initial_library"];
                if (lib.is_string()) {
                    std::filesystem::path p = lib.get<std::string>();
                    if (p.is_relative()) p = base_dir / p;
                    c.initial_library = library_from_json(read_json(p));
                } else {
                    c.initial_library = library_from_json(lib);
                }
            }
        }
        if (j.contains("optimizer")) c.optimizer_evaluations = j["optimizer"].value("max_evaluations", c.optimizer_evaluations);
        validate(c);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("invalid config: ") + e.what());
    }
}

Json config_to_json(const PipelineConfig& c) {
    Json schedule = Json::array();
    for (const RegimeConfig& r : c.schedule) schedule.push_back({{"field", r.field}, {"episodes", r.episodes}, {"extract", r.extract}});
    const AgentConfig& a = c.agent;
    const CurriculumConfig& u = c.curriculum;
    return Json{
        {"schema", "grl.config/1"},
        {"preset", c.preset},
        {"model",
         {{"num_qubits", c.num_qubits},
          {"coupling", c.coupling},
          {"boundary", c.boundary == Boundary::Open ? "open" : "periodic"}}},
        {"gateset", gateset_name(c.gateset)},
        {"t_max", c.effective_t_max()},
        {"schedule", std::move(schedule)},
        {"seeds", c.seeds},
        {"agent",
         {{"hidden", a.hidden},
          {"batch_size", a.batch_size},
          {"memory_capacity", a.memory_capacity},
          {"dropout", a.dropout},
          {"learning_rate", a.learning_rate},
          {"target_update_period", a.target_update_period},
          {"gamma", a.gamma},
          {"gamma_mode", a.gamma_mode == GammaMode::Fixed ? "fixed" : "annealed"},
          {"gamma_final", a.gamma_final},
          {"gamma_decay", a.gamma_decay},
          {"epsilon_decay", a.epsilon_decay},
          {"epsilon_min", a.epsilon_min}}},
        {"curriculum",
         {{"zeta_init", u.zeta_init},
          {"amortization", u.amortization},
          {"amortization_step", u.amortization_step},
          {"amortization_every", u.amortization_every},
          {"shift_radius", u.shift_radius},
          {"greedy_period", u.greedy_period},
          {"failure_streak_limit", u.failure_streak_limit},
          {"min_threshold", u.min_threshold}}},
        {"gadgets",
         {{"k_top", c.k_top},
          {"max_new", c.max_new_gadgets},
          {"max_arity", c.synth.max_arity},
          {"max_fragment_size", c.synth.max_fragment_size},
          {"pseudocount", c.synth.pseudocount},
          {"lambda", c.synth.lambda},
          {"structure_penalty", c.synth.structure_penalty},
          {"min_support", c.synth.min_support},
          {"initial_library", library_to_json(c.initial_library)}}},
        {"optimizer", {{"max_evaluations", c.optimizer_evaluations}}}};
}

bool TopKStore::admits(double cost) const {
    return static_cast<int>(entries_.size()) < capacity_ || cost < entries_.back().cost;
}

void TopKStore::offer(StoredCircuit entry) {
    const std::string key = structure_key(entry.circuit);
    const auto same = std::find_if(entries_.begin(), entries_.end(),
                                   [&](const StoredCircuit& e) { return structure_key(e.circuit) == key; });
    if (same != entries_.end()) {
        if (!(entry.cost < same->cost)) return;
        entries_.erase(same);
    }
    const auto pos = std::upper_bound(entries_.begin(), entries_.end(), entry.cost,
                                      [](double c, const StoredCircuit& e) { return c < e.cost; });
    entries_.insert(pos, std::move(entry));
    if (static_cast<int>(entries_.size()) > capacity_) entries_.pop_back();
}

void TopKStore::merge(const TopKStore& other) {
    for (const StoredCircuit& e : other.entries_) {
        if (admits(e.cost)) offer(e);
    }
}

Json episode_to_json(const EpisodeLog& e) {
    return Json{{"episode", e.episode},       {"steps", e.steps},         {"final_cost", e.final_cost},
                {"final_energy", e.final_energy}, {"min_cost", e.min_cost}, {"threshold", e.threshold},
                {"success", e.success}};
}

SeedRun run_regime_seed(const PipelineConfig& config, const RegimeConfig& regime, std::uint64_t seed,
                        const GadgetLibrary& library, int regime_index) {
    const TfimSpec spec = tfim_for(config, regime.field);
    EpisodeConfig ec = make_tfim_episode(spec, gate_kinds(config.gateset), library, config.effective_t_max());
    ec.optimizer_evaluations = config.optimizer_evaluations;
    Environment env(std::move(ec));

    AgentConfig ac = config.agent;
    ac.rng_seed = seed ^ (kGolden * static_cast<std::uint64_t>(regime_index + 1));
    DdqnAgent agent(ac, static_cast<int>(env.config().encoding.size()), env.num_actions());
    CurriculumState curriculum = curriculum_init(config.curriculum, env.config().fake_min);

    SeedRun run;
    run.seed = seed;
    run.store = TopKStore(config.k_top);
    for (int ep = 0; ep < regime.episodes; ++ep) {
        env.set_threshold(curriculum.threshold);
        StepOutcome obs = env.reset();
        double min_cost = std::numeric_limits<double>::infinity();
        while (!env.done()) {
            const int action = agent.act(obs.observation.data);
            StepOutcome next = env.step(action);
            agent.remember({obs.observation.data, action, next.reward, next.observation.data, next.done});
            agent.train_step();
            min_cost = std::min(min_cost, next.cost);
            if (run.store.admits(next.cost)) {
                run.store.offer({env.bound_circuit(), next.energy, next.cost, regime.field, seed});
            }
            obs = std::move(next);
        }
        run.episodes.push_back({ep, env.steps(), env.cost(), env.energy(), min_cost, curriculum.threshold, env.succeeded()});
        run.successes += env.succeeded() ? 1 : 0;
        curriculum = curriculum_update(curriculum, {min_cost, env.succeeded()});
    }
    run.best = run.store.entries().front();
    return run;
}

ReportRow make_report_row(const PipelineConfig& config, double field, const SeedRun& run, int gadgets) {
    ReportRow r;
    r.field = field;
    r.seed = run.seed;
    r.gadgets = gadgets;
    r.energy = run.best.energy;
    r.oracle_energy = ground_state_oracle(build_tfim(tfim_for(config, field))).energy;
    r.error = std::abs(r.energy - r.oracle_energy);
    r.successes = run.successes;
    r.episodes = static_cast<int>(run.episodes.size());
    r.metrics = metrics(run.best.circuit);
    r.native = transpile_metrics(run.best.circuit);
    return r;
}

RegimeSummary summarize(double field, int gadgets, std::span<const ReportRow> rows) {
    RegimeSummary s{field, gadgets, std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0, 0.0};
    if (rows.empty()) throw std::invalid_argument("no rows to summarize");
    for (const ReportRow& r : rows) {
        s.min_error = std::min(s.min_error, r.error);
        s.avg_error += r.error;
        s.avg_gates += r.metrics.total;
        s.avg_two_qubit += r.metrics.two_qubit;
        s.avg_depth += r.metrics.depth;
    }
    const double n = static_cast<double>(rows.size());
    s.avg_error /= n;
    s.avg_gates /= n;
    s.avg_two_qubit /= n;
    s.avg_depth /= n;
    return s;
}

Json report_to_json(const RunReport& report) {
    Json rows = Json::array();
    for (const ReportRow& r : report.rows) rows.push_back(row_to_json(r));
    Json regimes = Json::array();
    for (const RegimeSummary& s : report.regimes) regimes.push_back(summary_to_json(s));
    return Json{{"schema", "grl.report/1"},
                {"artifact_choices", {{"episode_budgets", report.episode_budgets}, {"k_top", report.k_top}}},
                {"regimes", std::move(regimes)},
                {"rows", std::move(rows)},
                {"library", library_to_json(report.library)}};
}

RunReport report_from_json(const Json& j) {
    if (!j.is_object() || j.value("schema", "") != "grl.report/1") throw std::invalid_argument("not a run report");
    RunReport r;
    r.episode_budgets = j.at("artifact_choices").at("episode_budgets").get<std::vector<int>>();
    r.k_top = j.at("artifact_choices").at("k_top");
    for (const Json& row : j.at("rows")) r.rows.push_back(row_from_json(row));
    for (const Json& s : j.at("regimes")) r.regimes.push_back(summary_from_json(s));
    r.library = library_from_json(j.at("library"));
    return r;
}

std::string report_markdown(const RunReport& report) {
    std::ostringstream md;
    char buf[256];
    md << "| h | gadgets | min error | avg error | avg gates | avg 2q gates | avg depth |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const RegimeSummary& s : report.regimes) {
        std::snprintf(buf, sizeof buf, "| %g | %d | %.3e | %.3e | %.2f | %.2f | %.2f |\n", s.field, s.gadgets,
                      s.min_error, s.avg_error, s.avg_gates, s.avg_two_qubit, s.avg_depth);
        md << buf;
    }
    md << "\n| h | seed | energy | error | successes | #CZ | #RZ | #SX | #X | depth (native) |\n";
    md << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const ReportRow& r : report.rows) {
        std::snprintf(buf, sizeof buf, "| %g | %llu | %.12f | %.3e | %d/%d | %d | %d | %d | %d | %d |\n", r.field,
                      static_cast<unsigned long long>(r.seed), r.energy, r.error, r.successes, r.episodes,
                      r.native.count(GateKind::CZ), r.native.count(GateKind::RZ), r.native.count(GateKind::SX),
                      r.native.count(GateKind::X), r.native.depth);
        md << buf;
    }
    md << "\nEpisode budgets (";
    for (std::size_t i = 0; i < report.episode_budgets.size(); ++i) md << (i ? ", " : "") << report.episode_budgets[i];
    md << ") and k_top = " << report.k_top << " are artifact defaults.\n";
    return md.str();
}

int worker_count_from_env() {
    const char* v = std::getenv("GRL_WORKERS");
    if (!v) return 1;
    const int n = std::atoi(v);
    return n > 0 ? n : 1;
}

RunReport run_pipeline(const PipelineConfig& config, const PipelineOptions& options) {
    validate(config);
    if (options.out_dir.empty()) throw std::invalid_argument("pipeline needs an output directory");
    namespace fs = std::filesystem;
    const fs::path out = options.out_dir;
    const Json config_json = config_to_json(config);
    if (options.resume && fs::exists(out / "config.json")) {
        if (read_json(out / "config.json") != config_json) {
            throw std::invalid_argument("--resume with a config that differs from " + (out / "config.json").string());
        }
    }
    write_json(out / "config.json", config_json);
    const int workers = options.workers > 0 ? options.workers : worker_count_from_env();

    RunReport report;
    report.k_top = config.k_top;
    for (const RegimeConfig& r : config.schedule) report.episode_budgets.push_back(r.episodes);
    std::vector<LibraryEntry> library = config.initial_library;

    for (std::size_t ri = 0; ri < config.schedule.size(); ++ri) {
        const RegimeConfig& regime = config.schedule[ri];
        const fs::path dir = out / regime_dir_name(ri);
        if (options.resume && fs::exists(dir / "done.json")) {
            const Json done = read_json(dir / "done.json");
            for (const Json& row : done.at("rows")) report.rows.push_back(row_from_json(row));
            report.regimes.push_back(summary_from_json(done.at("summary")));
            library = library_from_json(read_json(dir / "gadgets.json"));
            continue;
        }

        const GadgetLibrary gadgets = gadgets_of(library);
        std::vector<SeedRun> runs(config.seeds.size());
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(config.seeds.size());
        auto work = [&] {
            for (std::size_t i; (i = next++) < runs.size();) {
                try {
                    runs[i] = run_regime_seed(config, regime, config.seeds[i], gadgets, static_cast<int>(ri));
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int w = 1; w < std::min<int>(workers, static_cast<int>(runs.size())); ++w) pool.emplace_back(work);
        work();
        for (std::thread& t : pool) t.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }

        TopKStore merged(config.k_top);
        std::vector<ReportRow> rows;
        for (const SeedRun& run : runs) {
            const fs::path sd = dir / seed_dir_name(run.seed);
            std::string jsonl;
            for (const EpisodeLog& e : run.episodes) jsonl += episode_to_json(e).dump() + "\n";
            write_text(sd / "episodes.jsonl", jsonl);
            write_text(sd / "curve.csv", curve_csv(run.episodes));
            write_json(sd / "topk.json", corpus_to_json(run.store.entries()));
            write_json(sd / "best.json", corpus_to_json({run.best}));
            merged.merge(run.store);
            rows.push_back(make_report_row(config, regime.field, run, static_cast<int>(library.size())));
        }
        write_json(dir / "topk.json", corpus_to_json(merged.entries()));

        const RegimeSummary summary = summarize(regime.field, static_cast<int>(library.size()), rows);
        if (regime.extract && config.max_new_gadgets > 0) {
            const ExtractionResult ex = extract_from_store(merged.entries(), library, config);
            for (const AcceptedFragment& a : ex.accepted) {
                library.push_back({to_gadget(a.fragment, "g" + std::to_string(library.size())), regime.field,
                                   a.score_after - a.score_before});
            }
        }
        write_json(dir / "gadgets.json", library_to_json(library));

        Json done_rows = Json::array();
        for (const ReportRow& r : rows) done_rows.push_back(row_to_json(r));
        write_json(dir / "done.json", Json{{"schema", "grl.regime/1"}, {"rows", done_rows}, {"summary", summary_to_json(summary)}});
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        report.regimes.push_back(summary);
    }
    report.library = library;
    write_json(out / "report.json", report_to_json(report));
    write_text(out / "report.md", report_markdown(report));
    return report;
}

RunReport report_from_run(const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(out_dir / "config.json")) throw std::runtime_error("no config.json under " + out_dir.string());
    const PipelineConfig config = config_from_json(read_json(out_dir / "config.json"), out_dir);
    RunReport report;
    report.k_top = config.k_top;
    for (const RegimeConfig& r : config.schedule) report.episode_budgets.push_back(r.episodes);
    report.library = config.initial_library;

    auto check = [](const StoredCircuit& s, const PauliHamiltonian& ham, const fs::path& where) {
        const double e = energy_of(s.circuit, ham);
        if (!(std::abs(e - s.energy) <= 1e-9)) {
            throw std::runtime_error("stored energy does not reproduce in " + where.string());
        }
    };

    for (std::size_t ri = 0; ri < config.schedule.size(); ++ri) {
        const RegimeConfig& regime = config.schedule[ri];
        const fs::path dir = out_dir / regime_dir_name(ri);
        if (!fs::exists(dir / "done.json")) throw std::runtime_error("regime " + std::to_string(ri) + " is not complete");
        const PauliHamiltonian ham = build_tfim(tfim_for(config, regime.field));
        const int gadgets = static_cast<int>(report.library.size());
        std::vector<ReportRow> rows;
        for (std::uint64_t seed : config.seeds) {
            const fs::path sd = dir / seed_dir_name(seed);
            SeedRun run;
            run.seed = seed;
            run.best = corpus_from_json(read_json(sd / "best.json")).at(0);
            check(run.best, ham, sd / "best.json");
            for (const StoredCircuit& s : corpus_from_json(read_json(sd / "topk.json"))) check(s, ham, sd / "topk.json");
            std::istringstream lines(read_text(sd / "episodes.jsonl"));
            for (std::string line; std::getline(lines, line);) {
                const Json e = Json::parse(line);
                run.episodes.push_back({e.at("episode"), e.at("steps"), e.at("final_cost"), e.at("final_energy"),
                                        e.at("min_cost"), e.at("threshold"), e.at("success")});
                run.successes += run.episodes.back().success ? 1 : 0;
            }
            rows.push_back(make_report_row(config, regime.field, run, gadgets));
        }
        report.regimes.push_back(summarize(regime.field, gadgets, rows));
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        report.library = library_from_json(read_json(dir / "gadgets.json"));
    }
    return report;
}

}  // namespace grl
