#pragma once

// Circuit intermediate representation: gate instructions over a small fixed
// qubit register, symbolic or bound rotation angles, composite gates
// ("gadgets") and the structural passes used for gate counting.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace grl {

enum class GateKind : std::uint8_t { CZ, RZ, SX, X, RX, RY, CX, Gadget };

inline constexpr int kNumGateKinds = 8;

std::string_view kind_name(GateKind kind);
std::optional<GateKind> parse_kind(std::string_view name);

/// Qubits touched by an elementary kind; gadgets declare their own arity.
int kind_arity(GateKind kind);
bool kind_is_parameterized(GateKind kind);

/// Native instruction set of the target processor.
inline constexpr std::array<GateKind, 4> kNativeKinds{GateKind::CZ, GateKind::RZ, GateKind::SX,
                                                       GateKind::X};
/// Universal rotation + CNOT set used by the baseline agent.
inline constexpr std::array<GateKind, 4> kUniversalKinds{GateKind::CX, GateKind::RX, GateKind::RY,
                                                          GateKind::RZ};

/// A rotation angle that is either bound to a value (radians) or refers to a
/// free parameter of the enclosing circuit by index.
class Angle {
public:
    static Angle value(double radians) {
        Angle a;
        a.value_ = radians;
        return a;
    }
    static Angle symbol(int index) {
        Angle a;
        a.symbol_ = index;
        return a;
    }

    bool is_bound() const { return symbol_ < 0; }
    double value() const { return value_; }
    int symbol() const { return symbol_; }

    friend bool operator==(const Angle&, const Angle&) = default;

private:
    int symbol_ = -1;
    double value_ = 0.0;
};

struct GateInstruction {
    GateKind kind = GateKind::X;
    std::array<int, 2> qubits{0, 0};
    int arity = 1;
    /// One entry for RZ/RX/RY, one per angle slot for a gadget, none otherwise.
    std::vector<Angle> params;
    /// Index into the gadget library when kind == Gadget.
    int gadget = -1;

    std::span<const int> targets() const { return {qubits.data(), static_cast<std::size_t>(arity)}; }
    bool touches(int q) const { return qubits[0] == q || (arity == 2 && qubits[1] == q); }

    static GateInstruction x(int q) { return {GateKind::X, {q, 0}, 1, {}, -1}; }
    static GateInstruction sx(int q) { return {GateKind::SX, {q, 0}, 1, {}, -1}; }
    static GateInstruction rz(int q, Angle a) { return {GateKind::RZ, {q, 0}, 1, {a}, -1}; }
    static GateInstruction rx(int q, Angle a) { return {GateKind::RX, {q, 0}, 1, {a}, -1}; }
    static GateInstruction ry(int q, Angle a) { return {GateKind::RY, {q, 0}, 1, {a}, -1}; }
    static GateInstruction cz(int a, int b) { return {GateKind::CZ, {a, b}, 2, {}, -1}; }
    static GateInstruction cx(int control, int target) {
        return {GateKind::CX, {control, target}, 2, {}, -1};
    }
    static GateInstruction elementary(GateKind kind, std::span<const int> qubits,
                                      std::optional<Angle> angle = std::nullopt);
    static GateInstruction gadget_call(int id, std::span<const int> qubits, std::vector<Angle> params);

    friend bool operator==(const GateInstruction&, const GateInstruction&) = default;
};

struct Circuit {
    int num_qubits = 0;
    std::vector<GateInstruction> instructions;
    /// Free parameter names; Angle::symbol(i) refers to parameters[i].
    std::vector<std::string> parameters;

    Circuit() = default;
    explicit Circuit(int n) : num_qubits(n) {}

    /// Registers a new free parameter and returns its symbol index.
    int add_parameter(std::string name = {});
    void append(GateInstruction g) { instructions.push_back(std::move(g)); }
    std::size_t size() const { return instructions.size(); }
    bool empty() const { return instructions.empty(); }

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// One gate of a gadget body. `vars` index the gadget's qubit arguments and
/// `slot` its angle arguments (-1 when the gate takes no angle).
struct TemplateGate {
    GateKind kind = GateKind::X;
    std::array<int, 2> vars{0, 0};
    int slot = -1;

    friend bool operator==(const TemplateGate&, const TemplateGate&) = default;
};

struct GadgetDef {
    std::string name;
    int arity = 1;
    int angle_slots = 0;
    std::vector<TemplateGate> body;

    friend bool operator==(const GadgetDef&, const GadgetDef&) = default;
};

using GadgetLibrary = std::vector<GadgetDef>;

struct CircuitMetrics {
    std::array<int, kNumGateKinds> counts{};
    int total = 0;
    int two_qubit = 0;
    int depth = 0;

    int count(GateKind k) const { return counts[static_cast<std::size_t>(k)]; }
    friend bool operator==(const CircuitMetrics&, const CircuitMetrics&) = default;
};

/// Throws std::invalid_argument when an instruction breaks an IR invariant.
/// Gadget calls are checked against `library` when one is given.
void validate(const Circuit& circuit, const GadgetLibrary* library = nullptr);
void validate(const GadgetDef& gadget);

bool is_bound(const Circuit& circuit);
bool has_gadgets(const Circuit& circuit);
bool is_native(const Circuit& circuit);

/// Substitutes values[i] for parameter i everywhere; the result has no free parameters.
Circuit bind(const Circuit& circuit, std::span<const double> values);

/// Inlines every gadget call. Free parameters are preserved.
Circuit expand_gadgets(const Circuit& circuit, const GadgetLibrary& library);

/// Gate counts and moment depth (greedy left-packing). Requires an elementary circuit.
CircuitMetrics metrics(const Circuit& circuit);

/// Peephole identity removal run to a fixpoint.
Circuit simplify(const Circuit& circuit);

/// Rewrites RX/RY/CX into {CZ, RZ, SX, X}. RX/RY angles must be bound.
Circuit decompose_to_native(const Circuit& circuit);

/// decompose_to_native, then simplify, then metrics.
CircuitMetrics transpile_metrics(const Circuit& circuit);

/// Angle-free structural key; two circuits with the same gates on the same
/// qubits in the same order share a key regardless of angle values.
std::string structure_key(const Circuit& circuit);

}  // namespace grl
