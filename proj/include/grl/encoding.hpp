#pragma once

// Binary tensor observation of a circuit's structure. Layout is
// [t_max x rows x N], flattened t-major, then row, then column:
//   rows [k*N, (k+1)*N)      two-qubit kind k: entry [t, control, target]
//   row  N*n2q + k           one-qubit kind k: entry [t, row, qubit]
//   then per gadget          1 row (arity 1) or N rows (arity 2), same scheme
// Angles are never encoded.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "grl/circuit.hpp"

namespace grl {

struct GadgetFootprint {
    int arity = 1;
    int angle_slots = 0;

    friend bool operator==(const GadgetFootprint&, const GadgetFootprint&) = default;
};

struct EncodingSpec {
    int num_qubits = 0;
    std::vector<GateKind> one_qubit_kinds;
    std::vector<GateKind> two_qubit_kinds;
    /// Indexed by gadget id.
    std::vector<GadgetFootprint> gadgets;
    int t_max = 0;

    int rows() const;
    std::array<int, 3> shape() const { return {t_max, rows(), num_qubits}; }
    std::size_t size() const;
    /// First row of the block for gadget `id`.
    int gadget_row(int id) const;

    friend bool operator==(const EncodingSpec&, const EncodingSpec&) = default;
};

/// Splits `kinds` by arity, keeping their relative order.
EncodingSpec make_encoding_spec(int num_qubits, std::span<const GateKind> kinds, int t_max);

/// Appends one row block per gadget. Throws on arity outside 1..2.
EncodingSpec extend_for_gadgets(const EncodingSpec& spec, std::span<const GadgetDef> gadgets);

struct CircuitObservation {
    std::array<int, 3> shape{0, 0, 0};
    std::vector<std::uint8_t> data;

    std::size_t index(int t, int row, int col) const {
        return (static_cast<std::size_t>(t) * static_cast<std::size_t>(shape[1]) + static_cast<std::size_t>(row)) *
                   static_cast<std::size_t>(shape[2]) +
               static_cast<std::size_t>(col);
    }
    std::uint8_t at(int t, int row, int col) const { return data[index(t, row, col)]; }

    friend bool operator==(const CircuitObservation&, const CircuitObservation&) = default;
};

CircuitObservation empty_observation(const EncodingSpec& spec);

/// Writes instruction `gate` into slice t. The slice must be empty.
void encode_instruction(CircuitObservation& obs, int t, const GateInstruction& gate, const EncodingSpec& spec);

CircuitObservation encode(const Circuit& circuit, const EncodingSpec& spec);

/// Structure-only inverse of encode: every angle becomes a fresh symbol.
Circuit decode(const CircuitObservation& obs, const EncodingSpec& spec);

}  // namespace grl
