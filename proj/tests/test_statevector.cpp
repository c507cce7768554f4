#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "grl/statevector.hpp"
#include "test_util.hpp"

using namespace grl;
using grl::testing::kron_hamiltonian;
using grl::testing::random_circuit;
using grl::testing::random_state;
using grl::testing::to_eigen;

TEST(Statevector, QubitZeroIsMostSignificant) {
    const Statevector s = apply_gate(Statevector(2), GateInstruction::x(0));
    EXPECT_EQ(s[2], cplx(1.0, 0.0));
    EXPECT_EQ(s[0], cplx(0.0, 0.0));
}

TEST(Statevector, RzKeepsBasisProbabilities) {
    for (std::uint64_t b = 0; b < 4; ++b) {
        const Statevector s = apply_gate(Statevector::basis(2, b), GateInstruction::rz(1, Angle::value(0.77)));
        EXPECT_NEAR(std::norm(s[b]), 1.0, 1e-15);
    }
}

TEST(Statevector, SxTwiceIsX) {
    Statevector s(1);
    apply_gate_inplace(s, GateInstruction::sx(0));
    apply_gate_inplace(s, GateInstruction::sx(0));
    EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
    EXPECT_NEAR(s[1].real(), 1.0, 1e-15);
    EXPECT_NEAR(s[1].imag(), 0.0, 1e-15);

    // Independent 2x2 product.
    const simd::Mat2 m = single_qubit_matrix(GateKind::SX);
    Eigen::Matrix2cd e;
    e << m.m[0], m.m[1], m.m[2], m.m[3];
    const Eigen::Matrix2cd sq = e * e;
    EXPECT_NEAR(std::abs(sq(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(sq(0, 1) - 1.0), 0.0, 1e-15);
}

TEST(Statevector, EveryGateIsUnitary) {
    for (GateKind k : {GateKind::RZ, GateKind::SX, GateKind::X, GateKind::RX, GateKind::RY}) {
        for (double a : {0.0, 0.4, -2.1, 3.0}) {
            const simd::Mat2 m = single_qubit_matrix(k, a);
            Eigen::Matrix2cd e;
            e << m.m[0], m.m[1], m.m[2], m.m[3];
            EXPECT_TRUE((e.adjoint() * e).isIdentity(1e-12)) << kind_name(k);
        }
    }
    for (GateKind k : {GateKind::CZ, GateKind::CX}) {
        const Eigen::Matrix4cd m = two_qubit_matrix(k);
        EXPECT_TRUE((m.adjoint() * m).isIdentity(1e-12));
    }
}

TEST(Statevector, CzSymmetricAndRzZeroIdentity) {
    std::mt19937_64 rng(3);
    const Statevector psi = random_state(3, rng);
    const Statevector a = apply_gate(psi, GateInstruction::cz(0, 2));
    const Statevector b = apply_gate(psi, GateInstruction::cz(2, 0));
    for (std::size_t i = 0; i < a.dim(); ++i) EXPECT_EQ(a[i], b[i]);
    const Statevector c = apply_gate(psi, GateInstruction::rz(1, Angle::value(0.0)));
    EXPECT_NEAR(overlap_abs(psi, c), 1.0, 1e-15);
}

TEST(Statevector, GateMatchesKroneckerReference) {
    // Every gate on every placement agrees with the 2^N matrix built by Kronecker products.
    std::mt19937_64 rng(11);
    const int n = 3;
    for (int trial = 0; trial < 50; ++trial) {
        const Circuit c = random_circuit(n, 1, grl::testing::kAllElementary, rng);
        const GateInstruction& g = c.instructions[0];
        const Statevector psi = random_state(n, rng);
        Eigen::MatrixXcd full;
        if (g.arity == 1) {
            const simd::Mat2 m = single_qubit_matrix(g.kind, g.params.empty() ? 0.0 : g.params[0].value());
            Eigen::Matrix2cd e;
            e << m.m[0], m.m[1], m.m[2], m.m[3];
            full = Eigen::MatrixXcd::Identity(1, 1);
            for (int q = 0; q < n; ++q)
                full = grl::testing::kron(full, q == g.qubits[0] ? Eigen::MatrixXcd(e) : Eigen::MatrixXcd::Identity(2, 2));
        } else {
            // Permutation-free construction: act column by column on basis states.
            const Eigen::Matrix4cd m = two_qubit_matrix(g.kind);
            full = Eigen::MatrixXcd::Zero(8, 8);
            for (int col = 0; col < 8; ++col) {
                const int bc = (col >> (n - 1 - g.qubits[0])) & 1;
                const int bt = (col >> (n - 1 - g.qubits[1])) & 1;
                for (int out = 0; out < 4; ++out) {
                    int row = col;
                    row = (row & ~(1 << (n - 1 - g.qubits[0]))) | ((out >> 1) << (n - 1 - g.qubits[0]));
                    row = (row & ~(1 << (n - 1 - g.qubits[1]))) | ((out & 1) << (n - 1 - g.qubits[1]));
                    full(row, col) += m(out, bc * 2 + bt);
                }
            }
        }
        const Eigen::VectorXcd want = full * to_eigen(psi);
        const Eigen::VectorXcd got = to_eigen(apply_gate(psi, g));
        EXPECT_LT((want - got).norm(), 1e-12) << kind_name(g.kind);
    }
}

TEST(Statevector, NormConservedOverLongCircuits) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Statevector s = simulate(random_circuit(3, 200, grl::testing::kAllElementary, rng));
        EXPECT_NEAR(s.norm(), 1.0, 1e-10);
    }
}

TEST(Statevector, Errors) {
    Statevector s(2);
    EXPECT_THROW(apply_gate_inplace(s, GateInstruction::x(2)), std::out_of_range);
    EXPECT_THROW(apply_gate_inplace(s, GateInstruction::cz(1, 1)), std::invalid_argument);
    EXPECT_THROW(apply_gate_inplace(s, GateInstruction::rz(0, Angle::symbol(0))), std::invalid_argument);
    EXPECT_THROW(expectation(Statevector(3), build_tfim({2, 1.0, 1.0})), std::invalid_argument);
    EXPECT_THROW(ground_state_oracle(build_tfim({13, 1.0, 1.0})), std::invalid_argument);
}

TEST(Expectation, BasisStates) {
    const PauliHamiltonian h = build_tfim({2, 1.0, 0.37});
    EXPECT_NEAR(expectation(Statevector::basis(2, 0), h), -1.0, 1e-15);
    EXPECT_NEAR(expectation(Statevector::basis(2, 1), h), 1.0, 1e-15);
}

TEST(Expectation, MatchesDenseForRandomPauliSums) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> op(0, 3);
    std::normal_distribution<double> coeff(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 4;
        PauliHamiltonian h{n, {}};
        for (int t = 0; t < 6; ++t) {
            PauliString p{{}, coeff(rng)};
            for (int q = 0; q < n; ++q) p.ops.push_back(static_cast<Pauli>(op(rng)));
            h.terms.push_back(p);
        }
        const Statevector psi = random_state(n, rng);
        const Eigen::VectorXcd v = to_eigen(psi);
        const Eigen::MatrixXcd ref = kron_hamiltonian(h);
        const double want = (v.adjoint() * ref * v)(0).real();
        EXPECT_NEAR(expectation(psi, h), want, 1e-10);
        EXPECT_LT((to_dense(h) - ref).norm(), 1e-12);
        EXPECT_TRUE(to_dense(h).isApprox(to_dense(h).adjoint(), 1e-12));
    }
}

TEST(Oracle, TwoQubitTfim) {
    const GroundState gs = ground_state_oracle(build_tfim({2, 1.0, 1.0}));
    EXPECT_NEAR(gs.energy, -std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(gs.gap, std::sqrt(5.0) - 1.0, 1e-12);
    // Brute-force 4x4 solve on the Kronecker reference.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(kron_hamiltonian(build_tfim({2, 1.0, 1.0})));
    EXPECT_NEAR(gs.energy, es.eigenvalues()(0), 1e-12);
}

TEST(Oracle, WeakFieldDegenerate) {
    const GroundState gs = ground_state_oracle(build_tfim({2, 1.0, 1e-6}));
    EXPECT_LT(gs.gap, 1e-9);
}

TEST(Oracle, SingleQubitField) {
    const double h = 0.7;
    const GroundState gs = ground_state_oracle(PauliHamiltonian{1, {PauliString{{Pauli::X}, -h}}});
    EXPECT_NEAR(gs.energy, -h, 1e-14);
    EXPECT_NEAR(gs.gap, 2 * h, 1e-14);
}

TEST(Oracle, ComplexHamiltonianPath) {
    // H = Y: eigenvalues +-1 through the complex solver.
    const GroundState gs = ground_state_oracle(PauliHamiltonian{1, {PauliString{{Pauli::Y}, 1.0}}});
    EXPECT_NEAR(gs.energy, -1.0, 1e-14);
}

TEST(Oracle, LowerBoundsRandomCircuits) {
    std::mt19937_64 rng(23);
    for (int n : {2, 3}) {
        const PauliHamiltonian h = build_tfim({n, 1.0, 0.6});
        const double e0 = ground_state_oracle(h).energy;
        for (int trial = 0; trial < 500; ++trial) {
            const Statevector s = simulate(random_circuit(n, 12, kNativeKinds, rng));
            EXPECT_GE(expectation(s, h), e0 - 1e-10);
        }
    }
}

TEST(EnergyEvaluator, MatchesBindAndSimulate) {
    std::mt19937_64 rng(29);
    Circuit c(3);
    const int t0 = c.add_parameter();
    const int t1 = c.add_parameter();
    c.append(GateInstruction::sx(0));
    c.append(GateInstruction::rz(0, Angle::symbol(t0)));
    c.append(GateInstruction::cx(0, 1));
    c.append(GateInstruction::ry(2, Angle::symbol(t1)));
    c.append(GateInstruction::rx(1, Angle::value(0.3)));
    c.append(GateInstruction::cz(1, 2));
    const PauliHamiltonian h = build_tfim({3, 1.0, 0.4});
    EnergyEvaluator eval(c, h);
    ASSERT_EQ(eval.num_parameters(), 2u);
    for (int trial = 0; trial < 20; ++trial) {
        const double theta[2] = {grl::testing::random_angle(rng), grl::testing::random_angle(rng)};
        EXPECT_NEAR(eval(theta), expectation(simulate(bind(c, theta)), h), 1e-12);
    }
}
