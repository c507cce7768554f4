#pragma once

// Dense statevector simulation. Qubit 0 is the most significant bit of the
// basis index, so X on qubit 0 of |00> gives |10> = index 2.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "grl/circuit.hpp"
#include "grl/hamiltonian.hpp"
#include "grl/simd/kernels.hpp"

namespace grl {

using cplx = std::complex<double>;

class Statevector {
public:
    /// |0...0> on `num_qubits` qubits.
    explicit Statevector(int num_qubits);

    static Statevector basis(int num_qubits, std::uint64_t index);
    static Statevector from_amplitudes(int num_qubits, std::vector<cplx> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;
    /// Bit mask of qubit q in the basis index.
    std::size_t mask(int q) const { return std::size_t{1} << (num_qubits_ - 1 - q); }

private:
    int num_qubits_;
    std::vector<cplx> amps_;
};

/// 2x2 matrix of an elementary single-qubit kind.
simd::Mat2 single_qubit_matrix(GateKind kind, double angle = 0.0);

/// 4x4 matrix of CZ/CX in the basis |q_first q_second>.
Eigen::Matrix4cd two_qubit_matrix(GateKind kind);

void apply_gate_inplace(Statevector& state, const GateInstruction& gate);
Statevector apply_gate(Statevector state, const GateInstruction& gate);

/// Runs a bound elementary circuit on `state`.
void run_circuit(Statevector& state, const Circuit& circuit);

/// U|0...0> for a bound elementary circuit.
Statevector simulate(const Circuit& circuit);

/// |<a|b>|
double overlap_abs(const Statevector& a, const Statevector& b);

double expectation(const Statevector& state, const PauliHamiltonian& ham);

using DenseOperator = Eigen::MatrixXcd;

DenseOperator to_dense(const PauliHamiltonian& ham);

inline constexpr int kMaxOracleQubits = 12;

struct GroundState {
    double energy = 0.0;
    double gap = 0.0;  // E1 - E0, counting degeneracy
};

/// Exact E0 and E1 - E0 by dense Hermitian diagonalization (N <= 12).
GroundState ground_state_oracle(const PauliHamiltonian& ham);

/// Pre-resolved evaluation of <0|U(theta)^dag H U(theta)|0> for a fixed
/// elementary circuit. Not thread-safe: owns its scratch state.
class EnergyEvaluator {
public:
    EnergyEvaluator(const Circuit& circuit, const PauliHamiltonian& ham);

    std::size_t num_parameters() const { return num_params_; }
    double operator()(std::span<const double> theta);
    const Statevector& last_state() const { return state_; }

private:
    struct Op {
        GateKind kind;
        std::size_t mask0;
        std::size_t mask1;
        int symbol;  // -1 when the angle is bound
        double angle;
        simd::Mat2 fixed;
    };
    struct Term {
        std::uint64_t xmask;
        std::uint64_t zmask;
        cplx phase;  // coefficient * i^(number of Y)
    };

    std::vector<Op> ops_;
    std::vector<Term> terms_;
    std::size_t num_params_;
    Statevector state_;
};

}  // namespace grl
