#include "grl/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace grl {

namespace {

constexpr std::array<std::string_view, kNumGateKinds> kKindNames{"CZ", "RZ", "SX", "X",
                                                                 "RX", "RY", "CX", "GADGET"};

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

bool is_identity_rz(double angle) {
    return std::abs(std::remainder(angle, 2.0 * kPi)) < 1e-12;
}

void check_qubits(const GateInstruction& g, int num_qubits) {
    for (int q : g.targets()) {
        if (q < 0 || q >= num_qubits) {
            fail("qubit index " + std::to_string(q) + " out of range for " +
                 std::to_string(num_qubits) + "-qubit circuit");
        }
    }
    if (g.arity == 2 && g.qubits[0] == g.qubits[1]) fail("two-qubit gate on repeated qubit");
}

}  // namespace

std::string_view kind_name(GateKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<GateKind> parse_kind(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<GateKind>(i);
    }
    return std::nullopt;
}

int kind_arity(GateKind kind) {
    switch (kind) {
        case GateKind::CZ:
        case GateKind::CX: return 2;
        case GateKind::Gadget: return 0;
        default: return 1;
    }
}

bool kind_is_parameterized(GateKind kind) {
    return kind == GateKind::RZ || kind == GateKind::RX || kind == GateKind::RY;
}

GateInstruction GateInstruction::elementary(GateKind kind, std::span<const int> qubits,
                                            std::optional<Angle> angle) {
    if (kind == GateKind::Gadget) fail("elementary() called with GADGET kind");
    GateInstruction g;
    g.kind = kind;
    g.arity = kind_arity(kind);
    if (static_cast<int>(qubits.size()) != g.arity) fail("wrong qubit count for " + std::string(kind_name(kind)));
    for (int i = 0; i < g.arity; ++i) g.qubits[i] = qubits[i];
    if (kind_is_parameterized(kind)) {
        if (!angle) fail(std::string(kind_name(kind)) + " requires an angle");
        g.params.push_back(*angle);
    }
    return g;
}

GateInstruction GateInstruction::gadget_call(int id, std::span<const int> qubits,
                                             std::vector<Angle> params) {
    if (qubits.empty() || qubits.size() > 2) fail("gadget arity must be 1 or 2");
    GateInstruction g;
    g.kind = GateKind::Gadget;
    g.gadget = id;
    g.arity = static_cast<int>(qubits.size());
    for (int i = 0; i < g.arity; ++i) g.qubits[i] = qubits[i];
    g.params = std::move(params);
    return g;
}

int Circuit::add_parameter(std::string name) {
    if (name.empty()) name = "t" + std::to_string(parameters.size());
    parameters.push_back(std::move(name));
    return static_cast<int>(parameters.size()) - 1;
}

void validate(const GadgetDef& gadget) {
    if (gadget.arity < 1 || gadget.arity > 2) fail("gadget arity must be 1 or 2");
    if (gadget.body.empty()) fail("gadget body is empty");
    for (const TemplateGate& t : gadget.body) {
        if (t.kind == GateKind::Gadget) fail("nested gadgets are not supported");
        const int ar = kind_arity(t.kind);
        for (int i = 0; i < ar; ++i) {
            if (t.vars[i] < 0 || t.vars[i] >= gadget.arity) fail("gadget body uses undeclared qubit variable");
        }
        if (ar == 2 && t.vars[0] == t.vars[1]) fail("gadget body applies a two-qubit gate to one variable");
        if (kind_is_parameterized(t.kind) != (t.slot >= 0)) fail("gadget angle slot mismatch");
        if (t.slot >= gadget.angle_slots) fail("gadget angle slot out of range");
    }
}

void validate(const Circuit& circuit, const GadgetLibrary* library) {
    if (circuit.num_qubits < 1) fail("circuit must have at least one qubit");
    std::vector<std::string> names = circuit.parameters;
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end()) fail("duplicate parameter name");
    const int nparams = static_cast<int>(circuit.parameters.size());
    for (const GateInstruction& g : circuit.instructions) {
        check_qubits(g, circuit.num_qubits);
        std::size_t expected_params = 0;
        if (g.kind == GateKind::Gadget) {
            if (g.gadget < 0) fail("gadget call without id");
            if (library != nullptr) {
                if (g.gadget >= static_cast<int>(library->size())) fail("unknown gadget id");
                const GadgetDef& def = (*library)[g.gadget];
                if (def.arity != g.arity) fail("gadget call arity mismatch");
                expected_params = static_cast<std::size_t>(def.angle_slots);
            } else {
                expected_params = g.params.size();
            }
        } else {
            if (g.arity != kind_arity(g.kind)) fail("arity mismatch for " + std::string(kind_name(g.kind)));
            expected_params = kind_is_parameterized(g.kind) ? 1 : 0;
        }
        if (g.params.size() != expected_params) fail("wrong parameter count for " + std::string(kind_name(g.kind)));
        for (const Angle& a : g.params) {
            if (!a.is_bound() && a.symbol() >= nparams) fail("instruction references unknown parameter");
        }
    }
}

bool is_bound(const Circuit& circuit) {
    for (const auto& g : circuit.instructions) {
        for (const auto& a : g.params) {
            if (!a.is_bound()) return false;
        }
    }
    return true;
}

bool has_gadgets(const Circuit& circuit) {
    return std::any_of(circuit.instructions.begin(), circuit.instructions.end(),
                       [](const GateInstruction& g) { return g.kind == GateKind::Gadget; });
}

bool is_native(const Circuit& circuit) {
    return std::all_of(circuit.instructions.begin(), circuit.instructions.end(), [](const GateInstruction& g) {
        return std::find(kNativeKinds.begin(), kNativeKinds.end(), g.kind) != kNativeKinds.end();
    });
}

Circuit bind(const Circuit& circuit, std::span<const double> values) {
    if (values.size() != circuit.parameters.size()) {
        fail("bind: expected " + std::to_string(circuit.parameters.size()) + " values, got " +
             std::to_string(values.size()));
    }
    Circuit out(circuit.num_qubits);
    out.instructions = circuit.instructions;
    for (GateInstruction& g : out.instructions) {
        for (Angle& a : g.params) {
            if (!a.is_bound()) a = Angle::value(values[static_cast<std::size_t>(a.symbol())]);
        }
    }
    return out;
}

Circuit expand_gadgets(const Circuit& circuit, const GadgetLibrary& library) {
    Circuit out(circuit.num_qubits);
    out.parameters = circuit.parameters;
    out.instructions.reserve(circuit.instructions.size());
    for (const GateInstruction& g : circuit.instructions) {
        if (g.kind != GateKind::Gadget) {
            out.instructions.push_back(g);
            continue;
        }
        if (g.gadget < 0 || g.gadget >= static_cast<int>(library.size())) fail("unknown gadget id");
        const GadgetDef& def = library[static_cast<std::size_t>(g.gadget)];
        if (def.arity != g.arity || static_cast<int>(g.params.size()) != def.angle_slots) {
            fail("gadget call does not match definition '" + def.name + "'");
        }
        for (const TemplateGate& t : def.body) {
            GateInstruction e;
            e.kind = t.kind;
            e.arity = kind_arity(t.kind);
            for (int i = 0; i < e.arity; ++i) e.qubits[i] = g.qubits[t.vars[i]];
            if (t.slot >= 0) e.params.push_back(g.params[static_cast<std::size_t>(t.slot)]);
            out.instructions.push_back(std::move(e));
        }
    }
    return out;
}

CircuitMetrics metrics(const Circuit& circuit) {
    CircuitMetrics m;
    std::vector<int> frontier(static_cast<std::size_t>(std::max(circuit.num_qubits, 0)), 0);
    for (const GateInstruction& g : circuit.instructions) {
        if (g.kind == GateKind::Gadget) fail("metrics: expand gadgets first");
        ++m.counts[static_cast<std::size_t>(g.kind)];
        ++m.total;
        if (g.arity == 2) ++m.two_qubit;
        int moment = 0;
        for (int q : g.targets()) moment = std::max(moment, frontier[static_cast<std::size_t>(q)]);
        for (int q : g.targets()) frontier[static_cast<std::size_t>(q)] = moment + 1;
        m.depth = std::max(m.depth, moment + 1);
    }
    return m;
}

Circuit simplify(const Circuit& circuit) {
    std::vector<GateInstruction> gates = circuit.instructions;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<bool> dead(gates.size(), false);
        auto next_on = [&](std::size_t from, int q) -> std::size_t {
            for (std::size_t j = from + 1; j < gates.size(); ++j) {
                if (!dead[j] && gates[j].touches(q)) return j;
            }
            return gates.size();
        };
        for (std::size_t i = 0; i < gates.size(); ++i) {
            if (dead[i]) continue;
            GateInstruction& g = gates[i];
            if (g.kind == GateKind::RZ && g.params[0].is_bound() && is_identity_rz(g.params[0].value())) {
                dead[i] = true;
                changed = true;
                continue;
            }
            if (g.kind == GateKind::Gadget) continue;
            if (g.arity == 1) {
                const std::size_t j = next_on(i, g.qubits[0]);
                if (j == gates.size()) continue;
                GateInstruction& h = gates[j];
                if (h.kind != g.kind || h.arity != 1) continue;
                if (g.kind == GateKind::X) {
                    dead[i] = dead[j] = true;
                    changed = true;
                } else if (g.kind == GateKind::SX) {
                    g = GateInstruction::x(g.qubits[0]);
                    dead[j] = true;
                    changed = true;
                } else if (g.kind == GateKind::RZ && g.params[0].is_bound() && h.params[0].is_bound()) {
                    g.params[0] = Angle::value(g.params[0].value() + h.params[0].value());
                    dead[j] = true;
                    changed = true;
                }
            } else if (g.kind == GateKind::CZ || g.kind == GateKind::CX) {
                const std::size_t j = next_on(i, g.qubits[0]);
                if (j == gates.size() || j != next_on(i, g.qubits[1])) continue;
                const GateInstruction& h = gates[j];
                if (h.kind != g.kind) continue;
                const bool same = h.qubits == g.qubits;
                const bool swapped = h.qubits[0] == g.qubits[1] && h.qubits[1] == g.qubits[0];
                if (same || (g.kind == GateKind::CZ && swapped)) {
                    dead[i] = dead[j] = true;
                    changed = true;
                }
            }
        }
        std::vector<GateInstruction> kept;
        kept.reserve(gates.size());
        for (std::size_t i = 0; i < gates.size(); ++i) {
            if (!dead[i]) kept.push_back(std::move(gates[i]));
        }
        gates = std::move(kept);
    }
    Circuit out(circuit.num_qubits);
    out.parameters = circuit.parameters;
    out.instructions = std::move(gates);
    return out;
}

namespace {

// Z-SX-Z-SX-Z Euler form of RZ(phi) RY(theta) RZ(lambda), up to global phase.
void emit_zsx(std::vector<GateInstruction>& out, int q, double theta, double phi, double lambda) {
    out.push_back(GateInstruction::rz(q, Angle::value(lambda)));
    out.push_back(GateInstruction::sx(q));
    out.push_back(GateInstruction::rz(q, Angle::value(theta + kPi)));
    out.push_back(GateInstruction::sx(q));
    out.push_back(GateInstruction::rz(q, Angle::value(phi + kPi)));
}

void emit_hadamard(std::vector<GateInstruction>& out, int q) {
    out.push_back(GateInstruction::rz(q, Angle::value(kPi / 2)));
    out.push_back(GateInstruction::sx(q));
    out.push_back(GateInstruction::rz(q, Angle::value(kPi / 2)));
}

}  // namespace

Circuit decompose_to_native(const Circuit& circuit) {
    Circuit out(circuit.num_qubits);
    out.parameters = circuit.parameters;
    for (const GateInstruction& g : circuit.instructions) {
        switch (g.kind) {
            case GateKind::CZ:
            case GateKind::RZ:
            case GateKind::SX:
            case GateKind::X: out.instructions.push_back(g); break;
            case GateKind::RX:
            case GateKind::RY: {
                if (!g.params[0].is_bound()) fail("decompose_to_native: bind RX/RY angles first");
                const double theta = g.params[0].value();
                if (g.kind == GateKind::RX) {
                    emit_zsx(out.instructions, g.qubits[0], theta, -kPi / 2, kPi / 2);
                } else {
                    emit_zsx(out.instructions, g.qubits[0], theta, 0.0, 0.0);
                }
                break;
            }
            case GateKind::CX:
                emit_hadamard(out.instructions, g.qubits[1]);
                out.instructions.push_back(GateInstruction::cz(g.qubits[0], g.qubits[1]));
                emit_hadamard(out.instructions, g.qubits[1]);
                break;
            case GateKind::Gadget: fail("decompose_to_native: expand gadgets first");
        }
    }
    return out;
}

CircuitMetrics transpile_metrics(const Circuit& circuit) {
    return metrics(simplify(decompose_to_native(circuit)));
}

std::string structure_key(const Circuit& circuit) {
    std::string key = std::to_string(circuit.num_qubits) + "|";
    for (const GateInstruction& g : circuit.instructions) {
        if (g.kind == GateKind::Gadget) {
            key += "G" + std::to_string(g.gadget);
        } else {
            key += kind_name(g.kind);
        }
        key += ':';
        key += std::to_string(g.qubits[0]);
        if (g.arity == 2) {
            key += ',';
            key += std::to_string(g.qubits[1]);
        }
        key += ';';
    }
    return key;
}

}  // namespace grl
