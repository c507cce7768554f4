// Command-line front end for the pipeline and its standalone utilities.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "grl/gadget_synth.hpp"
#include "grl/hamiltonian.hpp"
#include "grl/io.hpp"
#include "grl/pipeline.hpp"
#include "grl/statevector.hpp"

namespace {

using namespace grl;
namespace fs = std::filesystem;

struct Common {
    std::string config;
    std::string preset;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool resume = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", c.preset, "agent/schedule preset")->check(CLI::IsMember({"paper", "ci"}));
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--seed", c.seed, "run only this seed");
    cmd->add_flag("--resume", c.resume, "skip regimes already marked done in --out");
}

PipelineConfig load_config(const Common& c) {
    Json j = Json::object();
    fs::path base;
    if (!c.config.empty()) {
        j = read_json(c.config);
        base = fs::path(c.config).parent_path();
    }
    if (!c.preset.empty()) j["preset"] = c.preset;
    PipelineConfig cfg = config_from_json(j, base);
    if (c.seed) cfg.seeds = {*c.seed};
    return cfg;
}

void print_report(const RunReport& r) { std::cout << report_markdown(r); }

int run_solve(const Common& c, std::optional<double> field, std::optional<int> episodes) {
    PipelineConfig cfg = load_config(c);
    RegimeConfig regime = cfg.schedule.back();
    if (field) regime.field = *field;
    if (episodes) regime.episodes = *episodes;
    regime.extract = false;
    cfg.schedule = {regime};
    print_report(run_pipeline(cfg, {c.out.empty() ? "runs/solve" : c.out, c.resume, 0}));
    return 0;
}

int run_grl(const Common& c, bool no_extract) {
    PipelineConfig cfg = load_config(c);
    if (no_extract) {
        for (RegimeConfig& r : cfg.schedule) r.extract = false;
    }
    print_report(run_pipeline(cfg, {c.out.empty() ? "runs/grl" : c.out, c.resume, 0}));
    return 0;
}

int run_extract(const std::string& corpus_path, int max_new, const std::string& gateset, const std::string& library_path,
                const std::string& out) {
    const std::vector<StoredCircuit> stored = corpus_from_json(read_json(corpus_path));
    std::vector<LibraryEntry> library;
    if (!library_path.empty()) library = library_from_json(read_json(library_path));
    std::vector<CorpusEntry> entries;
    for (const StoredCircuit& s : stored) entries.push_back({s.circuit, s.energy, s.field});
    const double field = stored.empty() ? 0.0 : stored.front().field;
    const ExtractionResult ex = extract_gadgets(make_scored_corpus(std::move(entries), gadgets_of(library)),
                                                gate_kinds(gateset == "native" ? GateSet::Native : GateSet::Universal),
                                                max_new);
    for (const AcceptedFragment& a : ex.accepted) {
        library.push_back({to_gadget(a.fragment, "g" + std::to_string(library.size())), field,
                           a.score_after - a.score_before});
        std::printf("%s  score %+.6f\n", a.fragment.program().c_str(), a.score_after - a.score_before);
    }
    if (ex.accepted.empty()) std::printf("no fragment improves the grammar score\n");
    const Json j = library_to_json(library);
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_json(out, j);
    }
    return 0;
}

int run_transpile(const std::string& path, const std::string& library_path) {
    const Json j = read_json(path);
    Circuit circuit = j.value("schema", "") == "grl.corpus/1" ? corpus_from_json(j).at(0).circuit : circuit_from_json(j);
    if (has_gadgets(circuit)) {
        if (library_path.empty()) throw std::invalid_argument("circuit uses gadgets; pass --gadgets");
        circuit = expand_gadgets(circuit, gadgets_of(library_from_json(read_json(library_path))));
    }
    if (!is_bound(circuit)) throw std::invalid_argument("transpile-count needs bound angles");
    const CircuitMetrics m = transpile_metrics(circuit);
    std::printf("#CZ #RZ #SX #X total depth\n%d %d %d %d %d %d\n", m.count(GateKind::CZ), m.count(GateKind::RZ),
                m.count(GateKind::SX), m.count(GateKind::X), m.total, m.depth);
    return 0;
}

int run_report(const std::string& run_dir, const std::string& out) {
    const RunReport r = report_from_run(run_dir);
    const fs::path dest = out.empty() ? fs::path(run_dir) : fs::path(out);
    write_json(dest / "report.json", report_to_json(r));
    write_text(dest / "report.md", report_markdown(r));

    std::string rows = "field,seed,gadgets,energy,oracle_energy,error,successes,episodes,total,two_qubit,depth,cz,rz,sx,x\n";
    char line[400];
    for (const ReportRow& row : r.rows) {
        std::snprintf(line, sizeof line, "%.17g,%llu,%d,%.17g,%.17g,%.17g,%d,%d,%d,%d,%d,%d,%d,%d,%d\n", row.field,
                      static_cast<unsigned long long>(row.seed), row.gadgets, row.energy, row.oracle_energy, row.error,
                      row.successes, row.episodes, row.metrics.total, row.metrics.two_qubit, row.metrics.depth,
                      row.native.count(GateKind::CZ), row.native.count(GateKind::RZ), row.native.count(GateKind::SX),
                      row.native.count(GateKind::X));
        rows += line;
    }
    write_text(dest / "report.csv", rows);

    // Threshold traces, one block per (regime, seed), straight from the episode logs.
    std::string traces = "regime,seed,episode,threshold,min_cost,success\n";
    const PipelineConfig cfg = config_from_json(read_json(fs::path(run_dir) / "config.json"), run_dir);
    for (std::size_t ri = 0; ri < cfg.schedule.size(); ++ri) {
        for (std::uint64_t seed : cfg.seeds) {
            std::istringstream in(read_text(fs::path(run_dir) / ("regime_" + std::to_string(ri)) /
                                            ("seed_" + std::to_string(seed)) / "episodes.jsonl"));
            for (std::string l; std::getline(in, l);) {
                const Json e = Json::parse(l);
                std::snprintf(line, sizeof line, "%zu,%llu,%d,%.17g,%.17g,%d\n", ri, static_cast<unsigned long long>(seed),
                              e.at("episode").get<int>(), e.at("threshold").get<double>(), e.at("min_cost").get<double>(),
                              e.at("success").get<bool>() ? 1 : 0);
                traces += line;
            }
        }
    }
    write_text(dest / "thresholds.csv", traces);
    print_report(r);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gadget reinforcement learning for TFIM ground-state circuits"};
    app.require_subcommand(1);

    Common solve_opts;
    std::optional<double> solve_field;
    std::optional<int> solve_episodes;
    auto* solve = app.add_subcommand("solve", "train one regime (last schedule entry unless --field)");
    add_common(solve, solve_opts);
    solve->add_option("--field", solve_field, "transverse field h");
    solve->add_option("--episodes", solve_episodes, "episode budget");

    Common grl_opts;
    bool no_extract = false;
    auto* grl = app.add_subcommand("grl-pipeline", "easy -> hard schedule with gadget extraction");
    add_common(grl, grl_opts);
    grl->add_flag("--no-extract", no_extract, "RL-only baseline: same schedule, no gadgets");

    std::string corpus, extract_out, extract_lib, gateset = "native";
    int max_new = 2;
    auto* extract = app.add_subcommand("extract-gadgets", "grow a gadget library from a top-k corpus");
    extract->add_option("--corpus", corpus, "corpus JSON (topk.json)")->required()->check(CLI::ExistingFile);
    extract->add_option("--max-new", max_new, "maximum gadgets to accept")->check(CLI::NonNegativeNumber);
    extract->add_option("--gadgets", extract_lib, "existing library to extend")->check(CLI::ExistingFile);
    extract->add_option("--gateset", gateset, "elementary primitives")->check(CLI::IsMember({"native", "universal"}));
    extract->add_option("--out", extract_out, "write the library here instead of stdout");

    int qubits = 2;
    double coupling = 1.0, field = 1.0;
    bool periodic = false;
    auto* exact = app.add_subcommand("exact-energy", "ground energy and gap by exact diagonalization");
    exact->add_option("--qubits", qubits)->check(CLI::Range(1, kMaxOracleQubits));
    exact->add_option("--coupling", coupling);
    exact->add_option("--field", field);
    exact->add_flag("--periodic", periodic);

    std::vector<double> fields;
    double scan_from = 1e-4, scan_to = 1.0;
    int scan_points = 25;
    auto* scan = app.add_subcommand("gap-scan", "CSV of E0 and gap over transverse fields");
    scan->add_option("--qubits", qubits)->check(CLI::Range(1, kMaxOracleQubits));
    scan->add_option("--coupling", coupling);
    scan->add_flag("--periodic", periodic);
    scan->add_option("--fields", fields, "explicit field values");
    scan->add_option("--from", scan_from, "log-spaced start")->check(CLI::PositiveNumber);
    scan->add_option("--to", scan_to, "log-spaced end")->check(CLI::PositiveNumber);
    scan->add_option("--points", scan_points)->check(CLI::Range(2, 100000));

    std::string circuit_path, transpile_lib;
    auto* transpile = app.add_subcommand("transpile-count", "native gate counts after decomposition and simplification");
    transpile->add_option("circuit", circuit_path, "circuit or corpus JSON")->required()->check(CLI::ExistingFile);
    transpile->add_option("--gadgets", transpile_lib, "library for gadget calls")->check(CLI::ExistingFile);

    std::string run_dir, report_out;
    auto* report = app.add_subcommand("report", "verify a run directory and emit tables and traces");
    report->add_option("run", run_dir, "pipeline output directory")->required()->check(CLI::ExistingDirectory);
    report->add_option("--out", report_out, "destination directory (defaults to the run)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return run_solve(solve_opts, solve_field, solve_episodes);
        if (*grl) return run_grl(grl_opts, no_extract);
        if (*extract) return run_extract(corpus, max_new, gateset, extract_lib, extract_out);
        if (*exact || *scan) {
            const TfimSpec spec{qubits, coupling, field, periodic ? Boundary::Periodic : Boundary::Open};
            if (*exact) {
                const GroundState gs = ground_state_oracle(build_tfim(spec));
                std::printf("E0 %.17g\ngap %.17g\nfake_min %.17g\n", gs.energy, gs.gap, fake_minimum_energy(spec));
                return 0;
            }
            if (fields.empty()) {
                for (int i = 0; i < scan_points; ++i) {
                    const double t = static_cast<double>(i) / (scan_points - 1);
                    fields.push_back(scan_from * std::pow(scan_to / scan_from, t));
                }
            }
            std::cout << gap_scan_csv(gap_scan(spec, fields));
            return 0;
        }
        if (*transpile) return run_transpile(circuit_path, transpile_lib);
        if (*report) return run_report(run_dir, report_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
