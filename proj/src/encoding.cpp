#include "grl/encoding.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace grl {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

int index_of(const std::vector<GateKind>& kinds, GateKind k) {
    const auto it = std::find(kinds.begin(), kinds.end(), k);
    return it == kinds.end() ? -1 : static_cast<int>(it - kinds.begin());
}

void check_spec(const EncodingSpec& spec) {
    if (spec.num_qubits < 1) fail("encoding needs at least one qubit");
    if (spec.t_max < 0) fail("negative t_max");
}

}  // namespace

int EncodingSpec::rows() const {
    int r = num_qubits * static_cast<int>(two_qubit_kinds.size()) + static_cast<int>(one_qubit_kinds.size());
    for (const GadgetFootprint& g : gadgets) r += g.arity == 2 ? num_qubits : 1;
    return r;
}

std::size_t EncodingSpec::size() const {
    return static_cast<std::size_t>(t_max) * static_cast<std::size_t>(rows()) * static_cast<std::size_t>(num_qubits);
}

int EncodingSpec::gadget_row(int id) const {
    if (id < 0 || id >= static_cast<int>(gadgets.size())) fail("unknown gadget id " + std::to_string(id));
    int r = num_qubits * static_cast<int>(two_qubit_kinds.size()) + static_cast<int>(one_qubit_kinds.size());
    for (int g = 0; g < id; ++g) r += gadgets[static_cast<std::size_t>(g)].arity == 2 ? num_qubits : 1;
    return r;
}

EncodingSpec make_encoding_spec(int num_qubits, std::span<const GateKind> kinds, int t_max) {
    EncodingSpec spec;
    spec.num_qubits = num_qubits;
    spec.t_max = t_max;
    for (GateKind k : kinds) {
        if (k == GateKind::Gadget) fail("gadgets enter the encoding through extend_for_gadgets");
        auto& list = kind_arity(k) == 2 ? spec.two_qubit_kinds : spec.one_qubit_kinds;
        if (index_of(list, k) >= 0) fail("duplicate kind " + std::string(kind_name(k)));
        list.push_back(k);
    }
    check_spec(spec);
    return spec;
}

EncodingSpec extend_for_gadgets(const EncodingSpec& spec, std::span<const GadgetDef> gadgets) {
    EncodingSpec out = spec;
    for (const GadgetDef& g : gadgets) {
        if (g.arity < 1 || g.arity > 2) fail("gadget '" + g.name + "' has arity " + std::to_string(g.arity));
        out.gadgets.push_back({g.arity, g.angle_slots});
    }
    return out;
}

CircuitObservation empty_observation(const EncodingSpec& spec) {
    check_spec(spec);
    return {spec.shape(), std::vector<std::uint8_t>(spec.size(), 0)};
}

void encode_instruction(CircuitObservation& obs, int t, const GateInstruction& gate, const EncodingSpec& spec) {
    const int n = spec.num_qubits;
    if (t < 0 || t >= spec.t_max) fail("instruction index exceeds t_max");
    for (int q : gate.targets()) {
        if (q < 0 || q >= n) fail("qubit index out of range");
    }
    int row = 0;
    int col = gate.qubits[0];
    if (gate.kind == GateKind::Gadget) {
        if (gate.gadget < 0 || gate.gadget >= static_cast<int>(spec.gadgets.size())) fail("gadget not in encoding");
        if (spec.gadgets[static_cast<std::size_t>(gate.gadget)].arity != gate.arity) fail("gadget arity mismatch");
        row = spec.gadget_row(gate.gadget);
        if (gate.arity == 2) {
            row += gate.qubits[0];
            col = gate.qubits[1];
        }
    } else if (gate.arity == 2) {
        const int k = index_of(spec.two_qubit_kinds, gate.kind);
        if (k < 0) fail("kind " + std::string(kind_name(gate.kind)) + " not in encoding");
        row = k * n + gate.qubits[0];
        col = gate.qubits[1];
    } else {
        const int k = index_of(spec.one_qubit_kinds, gate.kind);
        if (k < 0) fail("kind " + std::string(kind_name(gate.kind)) + " not in encoding");
        row = n * static_cast<int>(spec.two_qubit_kinds.size()) + k;
    }
    if (gate.arity == 2 && gate.qubits[0] == gate.qubits[1]) fail("two-qubit gate on repeated qubit");
    obs.data[obs.index(t, row, col)] = 1;
}

CircuitObservation encode(const Circuit& circuit, const EncodingSpec& spec) {
    if (circuit.num_qubits != spec.num_qubits) fail("qubit-count mismatch");
    if (static_cast<int>(circuit.size()) > spec.t_max) fail("circuit longer than t_max");
    CircuitObservation obs = empty_observation(spec);
    for (std::size_t t = 0; t < circuit.size(); ++t) encode_instruction(obs, static_cast<int>(t), circuit.instructions[t], spec);
    return obs;
}

Circuit decode(const CircuitObservation& obs, const EncodingSpec& spec) {
    if (obs.shape != spec.shape() || obs.data.size() != spec.size()) fail("observation shape does not match spec");
    const int n = spec.num_qubits;
    const int n2 = static_cast<int>(spec.two_qubit_kinds.size());
    const int n1 = static_cast<int>(spec.one_qubit_kinds.size());
    Circuit c(n);
    bool ended = false;
    for (int t = 0; t < spec.t_max; ++t) {
        int hits = 0, row = -1, col = -1;
        for (int r = 0; r < spec.rows(); ++r) {
            for (int q = 0; q < n; ++q) {
                const std::uint8_t v = obs.at(t, r, q);
                if (v > 1) fail("non-binary entry in slice " + std::to_string(t));
                if (v == 1) {
                    ++hits;
                    row = r;
                    col = q;
                }
            }
        }
        if (hits == 0) {
            ended = true;
            continue;
        }
        if (hits > 1) fail("slice " + std::to_string(t) + " encodes more than one gate");
        if (ended) fail("slice " + std::to_string(t) + " follows an empty slice");

        if (row < n * n2) {
            const int control = row % n;
            if (control == col) fail("two-qubit entry on the diagonal in slice " + std::to_string(t));
            c.append(GateInstruction::elementary(spec.two_qubit_kinds[static_cast<std::size_t>(row / n)],
                                                 std::array<int, 2>{control, col}));
            continue;
        }
        if (row < n * n2 + n1) {
            const GateKind k = spec.one_qubit_kinds[static_cast<std::size_t>(row - n * n2)];
            const int qs[1] = {col};
            if (kind_is_parameterized(k)) {
                c.append(GateInstruction::elementary(k, qs, Angle::symbol(c.add_parameter())));
            } else {
                c.append(GateInstruction::elementary(k, qs));
            }
            continue;
        }
        int base = n * n2 + n1;
        for (std::size_t id = 0; id < spec.gadgets.size(); ++id) {
            const GadgetFootprint& fp = spec.gadgets[id];
            const int height = fp.arity == 2 ? n : 1;
            if (row < base + height) {
                std::vector<Angle> params;
                for (int s = 0; s < fp.angle_slots; ++s) params.push_back(Angle::symbol(c.add_parameter()));
                if (fp.arity == 2) {
                    const int control = row - base;
                    if (control == col) fail("two-qubit gadget entry on the diagonal in slice " + std::to_string(t));
                    c.append(GateInstruction::gadget_call(static_cast<int>(id), std::array<int, 2>{control, col},
                                                          std::move(params)));
                } else {
                    c.append(GateInstruction::gadget_call(static_cast<int>(id), std::array<int, 1>{col},
                                                          std::move(params)));
                }
                break;
            }
            base += height;
        }
    }
    return c;
}

}  // namespace grl
