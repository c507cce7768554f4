#pragma once

// Library building over a corpus of good circuits. Circuits are read as
// right-nested programs, contiguous windows become candidate fragments with
// qubits and angles abstracted, and fragments are accepted greedily while
// they raise the grammar score
//   S = L - lambda |g| - k sum_p |p|.
// L is a unigram log-likelihood over minimum-description parses.

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grl/circuit.hpp"

namespace grl {

struct ProgramNode {
    GateKind kind = GateKind::X;
    std::array<int, 2> qubits{0, 0};
    int arity = 1;
    std::vector<Angle> params;
    /// Subcircuit this gate is applied to; null means the empty circuit I_N.
    std::shared_ptr<const ProgramNode> sub;
};

struct ProgramTree {
    int num_qubits = 0;
    std::vector<std::string> parameters;
    std::shared_ptr<const ProgramNode> root;

    /// e.g. "cz(x(I_2,0),0,1)"; angles print between the subterm and the qubits.
    std::string to_string() const;
};

ProgramTree to_program(const Circuit& circuit);
Circuit linearize(const ProgramTree& program);

/// A candidate gadget: an abstracted gate window. Each angle-taking gate owns
/// a fresh slot. Qubit variables are named so that the key is the smallest
/// over all renamings, which makes CZ's symmetry invisible to deduplication.
struct Fragment {
    std::vector<TemplateGate> body;
    int arity = 1;
    int angle_slots = 0;
    /// Sum of corpus weights over every (possibly overlapping) occurrence.
    double weighted_count = 0.0;
    /// Number of distinct corpus circuits containing the fragment.
    int support = 0;

    int size() const { return static_cast<int>(body.size()); }
    /// Canonical text used for deduplication and tie-breaking.
    std::string key() const;
    /// Lambda-style program form, e.g. "fn(q0,t0) sx(rz(sx(_,q0),t0,q0),q0)".
    std::string program() const;
};

/// Canonical fragment for gates [first, first + length) of an elementary
/// circuit, or nullopt when the window touches more than `max_arity` qubits.
std::optional<Fragment> abstract_window(const Circuit& circuit, std::size_t first, std::size_t length,
                                        int max_arity = 2);

/// Qubit assignment when `fragment` matches the circuit at `first`, else nullopt.
std::optional<std::array<int, 2>> match_fragment(const Fragment& fragment, const Circuit& circuit,
                                                 std::size_t first);

GadgetDef to_gadget(const Fragment& fragment, std::string name);
/// Inverse of to_gadget; counts are left at zero.
Fragment fragment_of(const GadgetDef& gadget);

struct CorpusEntry {
    Circuit circuit;
    double energy = 0.0;
    /// Field strength of the regime the circuit was found in (provenance only).
    double field = 0.0;
};

struct ScoredCorpus {
    std::vector<CorpusEntry> entries;
    /// softmax(-E) scaled by the corpus size, so the mean weight is 1.
    std::vector<double> weights;
};

/// Expands gadget calls against `library` and attaches energy weights.
ScoredCorpus make_scored_corpus(std::vector<CorpusEntry> entries, const GadgetLibrary& library = {});

struct SynthConfig {
    int max_arity = 2;
    int max_fragment_size = 6;
    double pseudocount = 10.0;
    double lambda = 1.0;
    double structure_penalty = 1.0;
    /// Candidates seen in fewer circuits are not common patterns. Without
    /// this a single long circuit always pays for itself as one gadget.
    int min_support = 2;
};

std::vector<Fragment> enumerate_fragments(const ScoredCorpus& corpus, const SynthConfig& config = {});

struct Grammar {
    std::vector<GateKind> elementary;
    std::vector<Fragment> fragments;

    int components() const { return static_cast<int>(elementary.size() + fragments.size()); }
    int total_size() const;
};

/// Primitive ids: fragments 0..F-1 in acceptance order, then elementary kinds.
struct Parse {
    std::vector<int> primitives;
    /// Placement (qubit assignment) of each use.
    std::vector<std::array<int, 2>> placements;
};

/// Fewest primitive uses; ties go to the lexicographically smallest id sequence.
Parse parse_circuit(const Grammar& grammar, const Circuit& circuit);

struct GrammarScore {
    double likelihood = 0.0;
    double regularizer = 0.0;
    double score = 0.0;
    /// (weighted uses + pseudocount) / total, indexed by primitive id.
    std::vector<double> probabilities;
};

/// Throws std::invalid_argument when a corpus gate kind is not a primitive.
GrammarScore grammar_score(const Grammar& grammar, const ScoredCorpus& corpus, const SynthConfig& config = {});

struct AcceptedFragment {
    Fragment fragment;
    double score_before = 0.0;
    double score_after = 0.0;
};

struct ExtractionResult {
    Grammar grammar;
    std::vector<AcceptedFragment> accepted;
};

/// Greedy growth from the elementary kinds in `base` plus the already
/// accepted `existing` fragments: add the supported candidate with the
/// highest score (ties: smaller |p|, then key) while it improves S.
/// Only newly accepted fragments are reported.
ExtractionResult extract_gadgets(const ScoredCorpus& corpus, std::span<const GateKind> base, int max_new,
                                 const SynthConfig& config = {}, std::span<const Fragment> existing = {});

}  // namespace grl
