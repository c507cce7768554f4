#include "grl/gadget_synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace grl {

namespace {

std::string format_angle(const Angle& a, const std::vector<std::string>& names) {
    if (!a.is_bound()) {
        const auto s = static_cast<std::size_t>(a.symbol());
        return s < names.size() ? names[s] : "t" + std::to_string(s);
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", a.value());
    return buf;
}

// Template gate for g, where qubit_of_var[v] is the qubit bound to variable v.
TemplateGate template_of(const GateInstruction& g, const std::array<int, 2>& qubit_of_var, int& next_slot) {
    TemplateGate t;
    t.kind = g.kind;
    for (int i = 0; i < g.arity; ++i) {
        t.vars[static_cast<std::size_t>(i)] = qubit_of_var[0] == g.qubits[static_cast<std::size_t>(i)] ? 0 : 1;
    }
    if (g.kind == GateKind::CZ && t.vars[0] > t.vars[1]) std::swap(t.vars[0], t.vars[1]);
    if (kind_is_parameterized(g.kind)) t.slot = next_slot++;
    return t;
}

std::string lower_name(GateKind kind) {
    std::string s{kind_name(kind)};
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

int permutations(int n, int k) {
    int p = 1;
    for (int i = 0; i < k; ++i) p *= n - i;
    return p;
}

bool same_gate(const TemplateGate& t, const GateInstruction& g, const std::array<int, 2>& qubit_of_var) {
    if (t.kind != g.kind) return false;
    const int a = kind_arity(t.kind);
    if (a == 1) return g.qubits[0] == qubit_of_var[static_cast<std::size_t>(t.vars[0])];
    const int q0 = qubit_of_var[static_cast<std::size_t>(t.vars[0])];
    const int q1 = qubit_of_var[static_cast<std::size_t>(t.vars[1])];
    if (g.qubits[0] == q0 && g.qubits[1] == q1) return true;
    return t.kind == GateKind::CZ && g.qubits[0] == q1 && g.qubits[1] == q0;
}

}  // namespace

std::string ProgramTree::to_string() const {
    std::vector<const ProgramNode*> chain;
    for (const ProgramNode* n = root.get(); n; n = n->sub.get()) chain.push_back(n);
    std::string s = "I_" + std::to_string(num_qubits);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const ProgramNode& n = **it;
        std::string next = lower_name(n.kind) + "(" + s;
        for (const Angle& a : n.params) next += "," + format_angle(a, parameters);
        for (int i = 0; i < n.arity; ++i) next += "," + std::to_string(n.qubits[static_cast<std::size_t>(i)]);
        s = next + ")";
    }
    return s;
}

ProgramTree to_program(const Circuit& circuit) {
    if (has_gadgets(circuit)) throw std::invalid_argument("to_program expects an elementary circuit");
    ProgramTree p{circuit.num_qubits, circuit.parameters, nullptr};
    for (const GateInstruction& g : circuit.instructions) {
        auto node = std::make_shared<ProgramNode>();
        node->kind = g.kind;
        node->qubits = g.qubits;
        node->arity = g.arity;
        node->params = g.params;
        node->sub = std::move(p.root);
        p.root = std::move(node);
    }
    return p;
}

Circuit linearize(const ProgramTree& program) {
    Circuit c(program.num_qubits);
    c.parameters = program.parameters;
    for (const ProgramNode* n = program.root.get(); n; n = n->sub.get()) {
        c.instructions.push_back({n->kind, n->qubits, n->arity, n->params, -1});
    }
    std::reverse(c.instructions.begin(), c.instructions.end());
    return c;
}

std::string Fragment::key() const {
    std::string k = "a" + std::to_string(arity) + "|";
    for (const TemplateGate& t : body) {
        k += kind_name(t.kind);
        k += ':';
        k += std::to_string(t.vars[0]);
        if (kind_arity(t.kind) == 2) k += "," + std::to_string(t.vars[1]);
        k += ';';
    }
    return k;
}

std::string Fragment::program() const {
    std::string head = "fn(";
    for (int v = 0; v < arity; ++v) head += (v ? ",q" : "q") + std::to_string(v);
    for (int s = 0; s < angle_slots; ++s) head += ",t" + std::to_string(s);
    std::string term = "_";
    for (const TemplateGate& t : body) {
        std::string next = lower_name(t.kind) + "(" + term;
        if (t.slot >= 0) next += ",t" + std::to_string(t.slot);
        for (int i = 0; i < kind_arity(t.kind); ++i) next += ",q" + std::to_string(t.vars[static_cast<std::size_t>(i)]);
        term = next + ")";
    }
    return head + ") " + term;
}

std::optional<Fragment> abstract_window(const Circuit& circuit, std::size_t first, std::size_t length,
                                        int max_arity) {
    if (first + length > circuit.instructions.size()) throw std::out_of_range("window past end of circuit");
    std::vector<int> qubits;
    for (std::size_t i = first; i < first + length; ++i) {
        const GateInstruction& g = circuit.instructions[i];
        if (g.kind == GateKind::Gadget) throw std::invalid_argument("fragments are cut from elementary circuits");
        for (int q : g.targets()) {
            if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) qubits.push_back(q);
        }
    }
    if (static_cast<int>(qubits.size()) > std::min(max_arity, 2)) return std::nullopt;

    std::optional<Fragment> best;
    std::array<int, 2> order{qubits[0], qubits.size() > 1 ? qubits[1] : -1};
    for (int flip = 0; flip < (qubits.size() > 1 ? 2 : 1); ++flip) {
        if (flip) std::swap(order[0], order[1]);
        Fragment f;
        f.arity = static_cast<int>(qubits.size());
        for (std::size_t i = first; i < first + length; ++i) {
            f.body.push_back(template_of(circuit.instructions[i], order, f.angle_slots));
        }
        if (!best || f.key() < best->key()) best = std::move(f);
    }
    return best;
}

std::optional<std::array<int, 2>> match_fragment(const Fragment& fragment, const Circuit& circuit,
                                                 std::size_t first) {
    if (first + fragment.body.size() > circuit.instructions.size()) return std::nullopt;
    const int n = circuit.num_qubits;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < (fragment.arity == 2 ? n : 1); ++b) {
            if (fragment.arity == 2 && a == b) continue;
            const std::array<int, 2> assign{a, fragment.arity == 2 ? b : -1};
            bool ok = true;
            for (std::size_t i = 0; ok && i < fragment.body.size(); ++i) {
                ok = same_gate(fragment.body[i], circuit.instructions[first + i], assign);
            }
            if (ok) return assign;
        }
    }
    return std::nullopt;
}

GadgetDef to_gadget(const Fragment& fragment, std::string name) {
    GadgetDef g{std::move(name), fragment.arity, fragment.angle_slots, fragment.body};
    validate(g);
    return g;
}

Fragment fragment_of(const GadgetDef& gadget) {
    validate(gadget);
    return {gadget.body, gadget.arity, gadget.angle_slots, 0.0, 0};
}

ScoredCorpus make_scored_corpus(std::vector<CorpusEntry> entries, const GadgetLibrary& library) {
    ScoredCorpus corpus;
    if (entries.empty()) return corpus;
    double top = -std::numeric_limits<double>::infinity();
    for (CorpusEntry& e : entries) {
        if (!std::isfinite(e.energy)) throw std::invalid_argument("corpus energy must be finite");
        if (has_gadgets(e.circuit)) e.circuit = expand_gadgets(e.circuit, library);
        top = std::max(top, -e.energy);
    }
    double total = 0.0;
    for (const CorpusEntry& e : entries) {
        corpus.weights.push_back(std::exp(-e.energy - top));
        total += corpus.weights.back();
    }
    for (double& w : corpus.weights) w *= static_cast<double>(entries.size()) / total;
    corpus.entries = std::move(entries);
    return corpus;
}

std::vector<Fragment> enumerate_fragments(const ScoredCorpus& corpus, const SynthConfig& config) {
    std::map<std::string, Fragment> seen;
    std::map<std::string, std::size_t> last_circuit;  // 1-based, 0 = none yet
    for (std::size_t c = 0; c < corpus.entries.size(); ++c) {
        const Circuit& circ = corpus.entries[c].circuit;
        for (std::size_t i = 0; i < circ.size(); ++i) {
            for (std::size_t len = 2; len <= static_cast<std::size_t>(config.max_fragment_size) && i + len <= circ.size();
                 ++len) {
                std::optional<Fragment> f = abstract_window(circ, i, len, config.max_arity);
                if (!f) break;  // wider windows only add qubits
                auto [it, fresh] = seen.try_emplace(f->key(), std::move(*f));
                it->second.weighted_count += corpus.weights[c];
                if (last_circuit[it->first] != c + 1) {
                    last_circuit[it->first] = c + 1;
                    ++it->second.support;
                }
            }
        }
    }
    std::vector<Fragment> out;
    out.reserve(seen.size());
    for (auto& [key, f] : seen) out.push_back(std::move(f));
    return out;
}

int Grammar::total_size() const {
    int s = static_cast<int>(elementary.size());
    for (const Fragment& f : fragments) s += f.size();
    return s;
}

Parse parse_circuit(const Grammar& grammar, const Circuit& circuit) {
    const std::size_t n = circuit.size();
    const int num_fragments = static_cast<int>(grammar.fragments.size());
    // best[i] parses the suffix starting at gate i.
    std::vector<Parse> best(n + 1);
    for (std::size_t i = n; i-- > 0;) {
        const GateInstruction& g = circuit.instructions[i];
        const auto elem = std::find(grammar.elementary.begin(), grammar.elementary.end(), g.kind);
        if (g.kind == GateKind::Gadget || elem == grammar.elementary.end()) {
            throw std::invalid_argument("gate kind " + std::string(kind_name(g.kind)) + " is not in the grammar");
        }
        std::optional<Parse> pick;
        auto offer = [&](int id, std::size_t len, std::array<int, 2> placement) {
            const Parse& rest = best[i + len];
            if (pick) {
                const std::size_t a = rest.primitives.size() + 1;
                const std::size_t b = pick->primitives.size();
                if (a > b) return;
                if (a == b) {
                    if (id > pick->primitives[0]) return;
                    if (id == pick->primitives[0] &&
                        !std::lexicographical_compare(rest.primitives.begin(), rest.primitives.end(),
                                                      pick->primitives.begin() + 1, pick->primitives.end())) {
                        return;
                    }
                }
            }
            Parse p;
            p.primitives.push_back(id);
            p.primitives.insert(p.primitives.end(), rest.primitives.begin(), rest.primitives.end());
            p.placements.push_back(placement);
            p.placements.insert(p.placements.end(), rest.placements.begin(), rest.placements.end());
            pick = std::move(p);
        };
        for (int f = 0; f < num_fragments; ++f) {
            if (auto m = match_fragment(grammar.fragments[static_cast<std::size_t>(f)], circuit, i)) {
                offer(f, grammar.fragments[static_cast<std::size_t>(f)].body.size(), *m);
            }
        }
        offer(num_fragments + static_cast<int>(elem - grammar.elementary.begin()), 1,
              {g.qubits[0], g.arity == 2 ? g.qubits[1] : -1});
        best[i] = std::move(*pick);
    }
    return best[0];
}

GrammarScore grammar_score(const Grammar& grammar, const ScoredCorpus& corpus, const SynthConfig& config) {
    const std::size_t num_primitives = grammar.fragments.size() + grammar.elementary.size();
    auto arity_of = [&](int id) {
        const auto f = static_cast<std::size_t>(id);
        return f < grammar.fragments.size() ? grammar.fragments[f].arity
                                            : kind_arity(grammar.elementary[f - grammar.fragments.size()]);
    };

    std::vector<Parse> parses;
    std::vector<double> usage(num_primitives, 0.0);
    for (std::size_t c = 0; c < corpus.entries.size(); ++c) {
        parses.push_back(parse_circuit(grammar, corpus.entries[c].circuit));
        for (int id : parses.back().primitives) usage[static_cast<std::size_t>(id)] += corpus.weights[c];
    }

    GrammarScore s;
    double total = 0.0;
    for (double u : usage) total += u + config.pseudocount;
    for (double u : usage) s.probabilities.push_back((u + config.pseudocount) / total);

    for (std::size_t c = 0; c < corpus.entries.size(); ++c) {
        const int n = corpus.entries[c].circuit.num_qubits;
        double log_p = 0.0;
        for (int id : parses[c].primitives) {
            log_p += std::log(s.probabilities[static_cast<std::size_t>(id)]) -
                     std::log(static_cast<double>(permutations(n, arity_of(id))));
        }
        s.likelihood += corpus.weights[c] * log_p;
    }
    s.regularizer = config.lambda * grammar.components() + config.structure_penalty * grammar.total_size();
    s.score = s.likelihood - s.regularizer;
    return s;
}

ExtractionResult extract_gadgets(const ScoredCorpus& corpus, std::span<const GateKind> base, int max_new,
                                 const SynthConfig& config, std::span<const Fragment> existing) {
    ExtractionResult result;
    result.grammar.elementary.assign(base.begin(), base.end());
    result.grammar.fragments.assign(existing.begin(), existing.end());
    if (corpus.entries.empty()) return result;

    const std::vector<Fragment> candidates = enumerate_fragments(corpus, config);
    std::vector<bool> taken(candidates.size(), false);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (const Fragment& f : existing) taken[c] = taken[c] || f.key() == candidates[c].key();
    }
    double current = grammar_score(result.grammar, corpus, config).score;

    for (int round = 0; round < max_new; ++round) {
        std::optional<std::size_t> pick;
        double pick_score = 0.0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (taken[c] || candidates[c].support < config.min_support) continue;
            Grammar trial = result.grammar;
            trial.fragments.push_back(candidates[c]);
            const double s = grammar_score(trial, corpus, config).score;
            // candidates are sorted by key, so the first of equal size wins ties
            if (!pick || s > pick_score ||
                (s == pick_score && candidates[c].size() < candidates[*pick].size())) {
                pick = c;
                pick_score = s;
            }
        }
        if (!pick || !(pick_score > current)) break;
        taken[*pick] = true;
        result.grammar.fragments.push_back(candidates[*pick]);
        result.accepted.push_back({candidates[*pick], current, pick_score});
        current = pick_score;
    }
    return result;
}

}  // namespace grl
