#pragma once

// Grammar fixtures shared by the unit and acceptance suites: a corpus with a
// planted [SX, RZ, SX] window and an exhaustive parse/score oracle.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "grl/gadget_synth.hpp"
#include "test_util.hpp"

namespace grl::testing {

inline Circuit planted_circuit(std::mt19937_64& rng) {
    static constexpr GateKind filler[] = {GateKind::CZ, GateKind::RZ, GateKind::SX, GateKind::X};
    Circuit c = random_circuit(2, 2, filler, rng);
    const int q = std::uniform_int_distribution<int>(0, 1)(rng);
    c.append(GateInstruction::sx(q));
    c.append(GateInstruction::rz(q, Angle::value(random_angle(rng))));
    c.append(GateInstruction::sx(q));
    const Circuit tail = random_circuit(2, 2, filler, rng);
    for (const auto& g : tail.instructions) c.append(g);
    return c;
}

inline ScoredCorpus planted_corpus() {
    std::mt19937_64 rng(41);
    std::vector<CorpusEntry> entries;
    for (int i = 0; i < 10; ++i) entries.push_back({planted_circuit(rng), -1.0, 1e-3});
    return make_scored_corpus(std::move(entries));
}

inline const std::string kPlantedKey = [] {
    Circuit c(1);
    c.append(GateInstruction::sx(0));
    c.append(GateInstruction::rz(0, Angle::value(0.3)));
    c.append(GateInstruction::sx(0));
    return abstract_window(c, 0, 3)->key();
}();

// Independent parse: enumerate every segmentation and keep the shortest,
// breaking ties on the id sequence. Matching is decided by canonical key
// equality rather than by searching qubit assignments.
inline std::vector<int> brute_force_parse(const Grammar& g, const Circuit& c) {
    std::vector<std::vector<int>> all;
    std::vector<int> cur;
    const int nf = static_cast<int>(g.fragments.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == c.size()) {
            all.push_back(cur);
            return;
        }
        for (int f = 0; f < nf; ++f) {
            const std::size_t len = g.fragments[static_cast<std::size_t>(f)].body.size();
            if (i + len > c.size()) continue;
            auto w = abstract_window(c, i, len);
            if (w && w->key() == g.fragments[static_cast<std::size_t>(f)].key()) {
                cur.push_back(f);
                rec(i + len);
                cur.pop_back();
            }
        }
        const auto it = std::find(g.elementary.begin(), g.elementary.end(), c.instructions[i].kind);
        cur.push_back(nf + static_cast<int>(it - g.elementary.begin()));
        rec(i + 1);
        cur.pop_back();
    };
    rec(0);
    return *std::min_element(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
}

inline double brute_force_score(const Grammar& g, const ScoredCorpus& corpus) {
    const std::size_t np = g.fragments.size() + g.elementary.size();
    std::vector<std::vector<int>> parses;
    std::vector<double> use(np, 0.0);
    for (std::size_t c = 0; c < corpus.entries.size(); ++c) {
        parses.push_back(brute_force_parse(g, corpus.entries[c].circuit));
        for (int id : parses.back()) use[static_cast<std::size_t>(id)] += corpus.weights[c];
    }
    double denom = 0.0;
    for (double u : use) denom += u + 10.0;
    double L = 0.0;
    for (std::size_t c = 0; c < corpus.entries.size(); ++c) {
        const double n = corpus.entries[c].circuit.num_qubits;
        for (int id : parses[c]) {
            const auto i = static_cast<std::size_t>(id);
            const int arity = i < g.fragments.size() ? g.fragments[i].arity
                                                     : kind_arity(g.elementary[i - g.fragments.size()]);
            const double placements = arity == 1 ? n : n * (n - 1);
            L += corpus.weights[c] * std::log((use[i] + 10.0) / denom / placements);
        }
    }
    double sizes = 0.0;
    for (const auto& f : g.fragments) sizes += f.size();
    sizes += static_cast<double>(g.elementary.size());
    return L - static_cast<double>(np) - sizes;
}

}  // namespace grl::testing
