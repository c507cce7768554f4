#include "grl/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace grl {

namespace {

const cplx kI{0.0, 1.0};

struct PauliMasks {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    int num_y = 0;
};

PauliMasks pauli_masks(const PauliString& p, int num_qubits) {
    PauliMasks m;
    for (int q = 0; q < num_qubits; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (num_qubits - 1 - q);
        switch (p.ops[static_cast<std::size_t>(q)]) {
            case Pauli::I: break;
            case Pauli::X: m.x |= bit; break;
            case Pauli::Y:
                m.x |= bit;
                m.z |= bit;
                ++m.num_y;
                break;
            case Pauli::Z: m.z |= bit; break;
        }
    }
    return m;
}

cplx i_power(int k) {
    switch (k & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

void check_term_shapes(const PauliHamiltonian& ham) {
    for (const auto& t : ham.terms) {
        if (static_cast<int>(t.ops.size()) != ham.num_qubits) {
            throw std::invalid_argument("Pauli string length does not match qubit count");
        }
    }
}

void apply_cx(Statevector& state, std::size_t cmask, std::size_t tmask) {
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(amps[i], amps[i | tmask]);
    }
}

}  // namespace

Statevector::Statevector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 30) throw std::invalid_argument("unsupported qubit count");
    amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

Statevector Statevector::basis(int num_qubits, std::uint64_t index) {
    Statevector s(num_qubits);
    if (index >= s.dim()) throw std::out_of_range("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

Statevector Statevector::from_amplitudes(int num_qubits, std::vector<cplx> amplitudes) {
    Statevector s(num_qubits);
    if (amplitudes.size() != s.dim()) throw std::invalid_argument("amplitude count must be 2^N");
    s.amps_ = std::move(amplitudes);
    return s;
}

double Statevector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

simd::Mat2 single_qubit_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    switch (kind) {
        case GateKind::X: return {{0.0, 1.0, 1.0, 0.0}};
        case GateKind::SX:
            return {{cplx{0.5, 0.5}, cplx{0.5, -0.5}, cplx{0.5, -0.5}, cplx{0.5, 0.5}}};
        case GateKind::RZ: return {{std::exp(-kI * (angle / 2)), 0.0, 0.0, std::exp(kI * (angle / 2))}};
        case GateKind::RX: return {{c, -kI * s, -kI * s, c}};
        case GateKind::RY: return {{c, -s, s, c}};
        default: throw std::invalid_argument("not a single-qubit kind: " + std::string(kind_name(kind)));
    }
}

Eigen::Matrix4cd two_qubit_matrix(GateKind kind) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    if (kind == GateKind::CZ) {
        m(3, 3) = -1.0;
    } else if (kind == GateKind::CX) {
        m(2, 2) = m(3, 3) = 0.0;
        m(2, 3) = m(3, 2) = 1.0;
    } else {
        throw std::invalid_argument("not a two-qubit kind: " + std::string(kind_name(kind)));
    }
    return m;
}

void apply_gate_inplace(Statevector& state, const GateInstruction& gate) {
    const int n = state.num_qubits();
    for (int q : gate.targets()) {
        if (q < 0 || q >= n) throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
    }
    if (gate.arity == 2 && gate.qubits[0] == gate.qubits[1]) {
        throw std::invalid_argument("two-qubit gate on repeated qubit");
    }
    for (const Angle& a : gate.params) {
        if (!a.is_bound()) throw std::invalid_argument("unbound parameter in " + std::string(kind_name(gate.kind)));
    }
    const auto& k = simd::kernels();
    auto amps = state.amplitudes();
    switch (gate.kind) {
        case GateKind::CZ:
            k.phase_flip(amps.data(), amps.size(), state.mask(gate.qubits[0]) | state.mask(gate.qubits[1]));
            break;
        case GateKind::CX: apply_cx(state, state.mask(gate.qubits[0]), state.mask(gate.qubits[1])); break;
        case GateKind::RZ: {
            const double half = gate.params[0].value() / 2;
            k.apply_diag_1q(amps.data(), amps.size(), state.mask(gate.qubits[0]), std::exp(-kI * half),
                            std::exp(kI * half));
            break;
        }
        case GateKind::X:
        case GateKind::SX:
        case GateKind::RX:
        case GateKind::RY: {
            const double angle = gate.params.empty() ? 0.0 : gate.params[0].value();
            k.apply_1q(amps.data(), amps.size(), state.mask(gate.qubits[0]), single_qubit_matrix(gate.kind, angle));
            break;
        }
        case GateKind::Gadget: throw std::invalid_argument("expand gadgets before simulation");
    }
}

Statevector apply_gate(Statevector state, const GateInstruction& gate) {
    apply_gate_inplace(state, gate);
    return state;
}

void run_circuit(Statevector& state, const Circuit& circuit) {
    if (circuit.num_qubits != state.num_qubits()) throw std::invalid_argument("qubit-count mismatch");
    for (const GateInstruction& g : circuit.instructions) apply_gate_inplace(state, g);
}

Statevector simulate(const Circuit& circuit) {
    Statevector s(circuit.num_qubits);
    run_circuit(s, circuit);
    return s;
}

double overlap_abs(const Statevector& a, const Statevector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("qubit-count mismatch");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return std::abs(acc);
}

double expectation(const Statevector& state, const PauliHamiltonian& ham) {
    if (ham.num_qubits != state.num_qubits()) throw std::invalid_argument("qubit-count mismatch");
    check_term_shapes(ham);
    const auto& k = simd::kernels();
    cplx total{0.0, 0.0};
    for (const PauliString& term : ham.terms) {
        const PauliMasks m = pauli_masks(term, ham.num_qubits);
        total += term.coefficient * i_power(m.num_y) *
                 k.pauli_expectation(state.amplitudes().data(), state.dim(), m.x, m.z);
    }
    if (std::abs(total.imag()) > 1e-10) {
        throw std::logic_error("expectation has imaginary part " + std::to_string(total.imag()));
    }
    return total.real();
}

DenseOperator to_dense(const PauliHamiltonian& ham) {
    check_term_shapes(ham);
    const std::size_t dim = std::size_t{1} << ham.num_qubits;
    DenseOperator op = DenseOperator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const PauliString& term : ham.terms) {
        const PauliMasks m = pauli_masks(term, ham.num_qubits);
        const cplx phase = term.coefficient * i_power(m.num_y);
        for (std::size_t i = 0; i < dim; ++i) {
            const double sign = (std::popcount(static_cast<std::uint64_t>(i) & m.z) & 1U) ? -1.0 : 1.0;
            op(static_cast<Eigen::Index>(i ^ m.x), static_cast<Eigen::Index>(i)) += sign * phase;
        }
    }
    return op;
}

GroundState ground_state_oracle(const PauliHamiltonian& ham) {
    if (ham.num_qubits < 1 || ham.num_qubits > kMaxOracleQubits) {
        throw std::invalid_argument("exact diagonalization supports 1.." + std::to_string(kMaxOracleQubits) +
                                    " qubits");
    }
    const DenseOperator dense = to_dense(ham);
    Eigen::VectorXd evals;
    if (ham.is_real()) {
        const Eigen::MatrixXd real = dense.real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(real, Eigen::EigenvaluesOnly);
        evals = solver.eigenvalues();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense, Eigen::EigenvaluesOnly);
        evals = solver.eigenvalues();
    }
    return {evals(0), evals(1) - evals(0)};
}

EnergyEvaluator::EnergyEvaluator(const Circuit& circuit, const PauliHamiltonian& ham)
    : num_params_(circuit.parameters.size()), state_(circuit.num_qubits) {
    if (circuit.num_qubits != ham.num_qubits) throw std::invalid_argument("qubit-count mismatch");
    check_term_shapes(ham);
    validate(circuit);
    ops_.reserve(circuit.instructions.size());
    for (const GateInstruction& g : circuit.instructions) {
        if (g.kind == GateKind::Gadget) throw std::invalid_argument("expand gadgets before simulation");
        Op op{g.kind, state_.mask(g.qubits[0]), g.arity == 2 ? state_.mask(g.qubits[1]) : 0, -1, 0.0, {}};
        if (!g.params.empty()) {
            if (g.params[0].is_bound()) {
                op.angle = g.params[0].value();
            } else {
                op.symbol = g.params[0].symbol();
            }
        }
        if (g.arity == 1 && g.kind != GateKind::RZ && op.symbol < 0) {
            op.fixed = single_qubit_matrix(g.kind, op.angle);
        }
        ops_.push_back(op);
    }
    for (const PauliString& t : ham.terms) {
        const PauliMasks m = pauli_masks(t, ham.num_qubits);
        terms_.push_back({m.x, m.z, t.coefficient * i_power(m.num_y)});
    }
}

double EnergyEvaluator::operator()(std::span<const double> theta) {
    if (theta.size() != num_params_) throw std::invalid_argument("parameter count mismatch");
    const auto& k = simd::kernels();
    auto amps = state_.amplitudes();
    std::fill(amps.begin(), amps.end(), cplx{0.0, 0.0});
    amps[0] = 1.0;
    for (const Op& op : ops_) {
        const double angle = op.symbol >= 0 ? theta[static_cast<std::size_t>(op.symbol)] : op.angle;
        switch (op.kind) {
            case GateKind::CZ: k.phase_flip(amps.data(), amps.size(), op.mask0 | op.mask1); break;
            case GateKind::CX: apply_cx(state_, op.mask0, op.mask1); break;
            case GateKind::RZ:
                k.apply_diag_1q(amps.data(), amps.size(), op.mask0, std::exp(-kI * (angle / 2)),
                                std::exp(kI * (angle / 2)));
                break;
            default:
                k.apply_1q(amps.data(), amps.size(), op.mask0,
                           op.symbol >= 0 ? single_qubit_matrix(op.kind, angle) : op.fixed);
                break;
        }
    }
    cplx total{0.0, 0.0};
    for (const Term& t : terms_) total += t.phase * k.pauli_expectation(amps.data(), amps.size(), t.xmask, t.zmask);
    return total.real();
}

}  // namespace grl
