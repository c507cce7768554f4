#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "grl/circuit.hpp"
#include "grl/statevector.hpp"
#include "test_util.hpp"

using namespace grl;
using grl::testing::random_circuit;
using grl::testing::random_state;

namespace {

constexpr double kPi = std::numbers::pi;

/// Columns are U|b> for each basis state b.
Eigen::MatrixXcd unitary_of(const Circuit& c) {
    const std::size_t dim = std::size_t{1} << c.num_qubits;
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t b = 0; b < dim; ++b) {
        Statevector s = Statevector::basis(c.num_qubits, b);
        run_circuit(s, c);
        for (std::size_t r = 0; r < dim; ++r) u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(b)) = s[r];
    }
    return u;
}

/// Frobenius distance between a and b after removing the best global phase.
double phase_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    const std::complex<double> tr = (b.adjoint() * a).trace();
    const std::complex<double> phase = std::abs(tr) > 0 ? tr / std::abs(tr) : 1.0;
    return (a - phase * b).norm();
}

int brute_force_depth(const Circuit& c) {
    const int k = static_cast<int>(c.size());
    if (k == 0) return 0;
    for (int moments = 1; moments <= k; ++moments) {
        std::vector<int> m(static_cast<std::size_t>(k), 0);
        while (true) {
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                for (int j = i + 1; j < k && ok; ++j) {
                    bool share = false;
                    for (int q : c.instructions[i].targets()) share |= c.instructions[j].touches(q);
                    if (share && m[i] >= m[j]) ok = false;
                }
            if (ok) return moments;
            int p = 0;
            while (p < k && ++m[p] == moments) m[p++] = 0;
            if (p == k) break;
        }
    }
    return k;
}

}  // namespace

TEST(Circuit, BindSubstitutes) {
    Circuit c(1);
    const int a = c.add_parameter();
    const int b = c.add_parameter();
    c.append(GateInstruction::rz(0, Angle::symbol(a)));
    c.append(GateInstruction::rz(0, Angle::symbol(b)));
    const double v[2] = {0.1, 0.2};
    const Circuit bound = bind(c, v);
    EXPECT_TRUE(is_bound(bound));
    EXPECT_EQ(bound.instructions[0].params[0].value(), 0.1);
    EXPECT_EQ(bound.instructions[1].params[0].value(), 0.2);
    EXPECT_TRUE(bind(Circuit(2), {}).empty());
    const double wrong[1] = {0.0};
    EXPECT_THROW(bind(c, wrong), std::invalid_argument);
}

TEST(Circuit, ValidateInvariants) {
    Circuit c(2);
    c.append(GateInstruction::cz(0, 0));
    EXPECT_THROW(validate(c), std::invalid_argument);
    Circuit d(2);
    d.append(GateInstruction::rz(0, Angle::symbol(0)));
    EXPECT_THROW(validate(d), std::invalid_argument);
    d.add_parameter();
    EXPECT_NO_THROW(validate(d));
    GateInstruction bad = GateInstruction::x(0);
    bad.params.push_back(Angle::value(1.0));
    Circuit e(1);
    e.append(bad);
    EXPECT_THROW(validate(e), std::invalid_argument);
}

TEST(Circuit, GadgetExpansionSimulatesLikeBody) {
    GadgetLibrary lib{{"g0", 2, 1, {{GateKind::SX, {1, 0}, -1}, {GateKind::RZ, {1, 0}, 0}, {GateKind::CZ, {0, 1}, -1}}}};
    validate(lib[0]);
    Circuit c(3);
    const int t = c.add_parameter();
    const int qs[2] = {2, 0};
    c.append(GateInstruction::gadget_call(0, qs, {Angle::symbol(t)}));
    validate(c, &lib);
    const Circuit flat = expand_gadgets(c, lib);
    ASSERT_EQ(flat.size(), 3u);
    EXPECT_EQ(flat.instructions[0], GateInstruction::sx(0));
    EXPECT_EQ(flat.instructions[1], GateInstruction::rz(0, Angle::symbol(t)));
    EXPECT_EQ(flat.instructions[2], GateInstruction::cz(2, 0));

    Circuit manual(3);
    manual.append(GateInstruction::sx(0));
    manual.append(GateInstruction::rz(0, Angle::value(0.9)));
    manual.append(GateInstruction::cz(2, 0));
    const double v[1] = {0.9};
    EXPECT_NEAR(overlap_abs(simulate(bind(flat, v)), simulate(manual)), 1.0, 1e-12);
}

TEST(Metrics, Examples) {
    Circuit c(2);
    c.append(GateInstruction::x(0));
    c.append(GateInstruction::x(1));
    c.append(GateInstruction::cz(0, 1));
    const CircuitMetrics m = metrics(c);
    EXPECT_EQ(m.total, 3);
    EXPECT_EQ(m.two_qubit, 1);
    EXPECT_EQ(m.depth, 2);
    EXPECT_EQ(m.count(GateKind::X), 2);
    EXPECT_EQ(metrics(Circuit(2)), CircuitMetrics{});
}

TEST(Metrics, GreedyDepthEqualsBruteForce) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 3;
        const int len = trial % 7;
        const Circuit c = random_circuit(n, len, grl::testing::kAllElementary, rng);
        const CircuitMetrics m = metrics(c);
        EXPECT_EQ(m.depth, brute_force_depth(c));
        EXPECT_LE(m.depth, m.total);
        EXPECT_EQ(m.two_qubit, m.count(GateKind::CZ) + m.count(GateKind::CX));
    }
}

TEST(Simplify, Rules) {
    Circuit xx(1);
    xx.append(GateInstruction::x(0));
    xx.append(GateInstruction::x(0));
    EXPECT_TRUE(simplify(xx).empty());

    Circuit sxsx(1);
    sxsx.append(GateInstruction::sx(0));
    sxsx.append(GateInstruction::sx(0));
    const Circuit s = simplify(sxsx);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.instructions[0], GateInstruction::x(0));

    Circuit rz(1);
    rz.append(GateInstruction::rz(0, Angle::value(0.3)));
    rz.append(GateInstruction::rz(0, Angle::value(-0.3)));
    EXPECT_TRUE(simplify(rz).empty());

    Circuit czcz(3);
    czcz.append(GateInstruction::cz(0, 1));
    czcz.append(GateInstruction::x(2));
    czcz.append(GateInstruction::cz(1, 0));
    const Circuit c = simplify(czcz);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.instructions[0], GateInstruction::x(2));

    Circuit blocked(2);
    blocked.append(GateInstruction::x(0));
    blocked.append(GateInstruction::cz(0, 1));
    blocked.append(GateInstruction::x(0));
    EXPECT_EQ(simplify(blocked).size(), 3u);

    Circuit cascade(1);
    for (int i = 0; i < 4; ++i) cascade.append(GateInstruction::sx(0));
    EXPECT_TRUE(simplify(cascade).empty());
}

TEST(Simplify, PreservesActionAndNeverGrows) {
    std::mt19937_64 rng(43);
    // A small alphabet makes cancellations frequent.
    const GateKind kinds[] = {GateKind::X, GateKind::SX, GateKind::CZ, GateKind::CX, GateKind::RZ};
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 3;
        Circuit c = random_circuit(n, 1 + trial % 30, n == 1 ? std::span<const GateKind>(kinds, 2) : kinds, rng);
        for (auto& g : c.instructions)
            if (g.kind == GateKind::RZ && trial % 2 == 0) g.params[0] = Angle::value(0.5 * std::round(g.params[0].value()));
        const Circuit s = simplify(c);
        EXPECT_LE(s.size(), c.size());
        const Statevector psi = random_state(n, rng);
        Statevector a = psi, b = psi;
        run_circuit(a, c);
        run_circuit(b, s);
        EXPECT_NEAR(overlap_abs(a, b), 1.0, 1e-9);
        EXPECT_LT(phase_distance(unitary_of(c), unitary_of(s)), 1e-9);
    }
}

TEST(Decompose, CxOnBasisStatesAndUnitary) {
    Circuit cx(2);
    cx.append(GateInstruction::cx(0, 1));
    const Circuit native = decompose_to_native(cx);
    EXPECT_TRUE(is_native(native));
    EXPECT_EQ(metrics(native).count(GateKind::CZ), 1);
    EXPECT_LT(phase_distance(unitary_of(native), two_qubit_matrix(GateKind::CX)), 1e-12);
}

TEST(Decompose, RxPiActsAsX) {
    Circuit rx(1);
    rx.append(GateInstruction::rx(0, Angle::value(kPi)));
    Circuit x(1);
    x.append(GateInstruction::x(0));
    EXPECT_LT(phase_distance(unitary_of(decompose_to_native(rx)), unitary_of(x)), 1e-12);
}

TEST(Decompose, NativeIsFixedPoint) {
    Circuit c(2);
    c.append(GateInstruction::rz(0, Angle::value(0.4)));
    c.append(GateInstruction::cz(0, 1));
    EXPECT_EQ(decompose_to_native(c), c);
}

TEST(Decompose, RandomCircuitsPreserveAction) {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 3;
        const GateKind one_q[] = {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::SX};
        const Circuit c = n == 1 ? random_circuit(n, 1 + trial % 30, one_q, rng)
                                 : random_circuit(n, 1 + trial % 30, grl::testing::kAllElementary, rng);
        const Circuit d = decompose_to_native(c);
        const CircuitMetrics m = transpile_metrics(c);
        EXPECT_EQ(m.count(GateKind::RX) + m.count(GateKind::RY) + m.count(GateKind::CX), 0);
        EXPECT_LT(phase_distance(unitary_of(c), unitary_of(d)), 1e-9);
        EXPECT_LT(phase_distance(unitary_of(c), unitary_of(simplify(d))), 1e-9);
    }
}

TEST(Decompose, SymbolicRotationRejected) {
    Circuit c(1);
    c.add_parameter();
    c.append(GateInstruction::ry(0, Angle::symbol(0)));
    EXPECT_THROW(decompose_to_native(c), std::invalid_argument);
}

TEST(StructureKey, IgnoresAngles) {
    Circuit a(2), b(2);
    a.append(GateInstruction::rz(1, Angle::value(0.1)));
    b.append(GateInstruction::rz(1, Angle::value(2.0)));
    EXPECT_EQ(structure_key(a), structure_key(b));
    b.append(GateInstruction::cz(0, 1));
    EXPECT_NE(structure_key(a), structure_key(b));
}
