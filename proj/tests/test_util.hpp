#pragma once

// Shared fixtures for unit tests: random circuits and Kronecker-product
// reference matrices built independently of the library code paths.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "grl/circuit.hpp"
#include "grl/hamiltonian.hpp"
#include "grl/statevector.hpp"

namespace grl::testing {

inline Eigen::Matrix2cd pauli_matrix(Pauli p) {
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    switch (p) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, C(0, -1), C(0, 1), 0; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Dense H via Kronecker products with qubit 0 as the leftmost factor.
inline Eigen::MatrixXcd kron_hamiltonian(const PauliHamiltonian& ham) {
    const Eigen::Index dim = Eigen::Index{1} << ham.num_qubits;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : ham.terms) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
        for (Pauli p : t.ops) m = kron(m, pauli_matrix(p));
        h += t.coefficient * m;
    }
    return h;
}

inline Eigen::VectorXcd to_eigen(const Statevector& s) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
    return v;
}

inline Statevector random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::complex<double>> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& x : a) {
        x = {g(rng), g(rng)};
        norm += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(norm);
    return Statevector::from_amplitudes(n, std::move(a));
}

inline double random_angle(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(-2 * std::numbers::pi, 2 * std::numbers::pi)(rng);
}

/// Random bound circuit over `kinds` (N >= 2 when a two-qubit kind is listed).
inline Circuit random_circuit(int n, int length, std::span<const GateKind> kinds, std::mt19937_64& rng) {
    Circuit c(n);
    std::uniform_int_distribution<std::size_t> pick(0, kinds.size() - 1);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    while (static_cast<int>(c.size()) < length) {
        const GateKind k = kinds[pick(rng)];
        const int a = qubit(rng);
        if (kind_arity(k) == 2) {
            if (n < 2) continue;
            int b = qubit(rng);
            while (b == a) b = qubit(rng);
            const int qs[2] = {a, b};
            c.append(GateInstruction::elementary(k, qs));
        } else {
            const int qs[1] = {a};
            if (kind_is_parameterized(k))
                c.append(GateInstruction::elementary(k, qs, Angle::value(random_angle(rng))));
            else
                c.append(GateInstruction::elementary(k, qs));
        }
    }
    return c;
}

inline constexpr GateKind kAllElementary[] = {GateKind::CZ, GateKind::RZ, GateKind::SX, GateKind::X,
                                              GateKind::RX, GateKind::RY, GateKind::CX};

}  // namespace grl::testing
