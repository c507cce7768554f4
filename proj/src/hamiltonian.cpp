#include "grl/hamiltonian.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "grl/statevector.hpp"

namespace grl {

std::string PauliString::label() const {
    std::string s;
    for (Pauli p : ops) s += "IXYZ"[static_cast<int>(p)];
    return s;
}

bool PauliHamiltonian::is_real() const {
    return std::all_of(terms.begin(), terms.end(), [](const PauliString& t) {
        return std::count(t.ops.begin(), t.ops.end(), Pauli::Y) % 2 == 0;
    });
}

namespace {

void check_spec(const TfimSpec& spec) {
    if (spec.num_qubits < 1) throw std::invalid_argument("TFIM needs at least one spin");
    if (spec.coupling < 0.0 || spec.field < 0.0) throw std::invalid_argument("TFIM expects J >= 0 and h >= 0");
    if (spec.boundary == Boundary::Periodic && spec.num_qubits < 3) {
        throw std::invalid_argument("periodic TFIM needs at least three spins");
    }
}

}  // namespace

PauliHamiltonian build_tfim(const TfimSpec& spec) {
    check_spec(spec);
    const int n = spec.num_qubits;
    PauliHamiltonian ham{n, {}};
    const int bonds = spec.boundary == Boundary::Open ? n - 1 : n;
    for (int b = 0; b < bonds; ++b) {
        PauliString zz{std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::I), -spec.coupling};
        zz.ops[static_cast<std::size_t>(b)] = Pauli::Z;
        zz.ops[static_cast<std::size_t>((b + 1) % n)] = Pauli::Z;
        ham.terms.push_back(std::move(zz));
    }
    for (int q = 0; q < n; ++q) {
        PauliString x{std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::I), -spec.field};
        x.ops[static_cast<std::size_t>(q)] = Pauli::X;
        ham.terms.push_back(std::move(x));
    }
    return ham;
}

double fake_minimum_energy(const TfimSpec& spec) {
    check_spec(spec);
    return (spec.num_qubits - 1) * (-spec.coupling) + spec.num_qubits * (-spec.field);
}

std::vector<GapPoint> gap_scan(const TfimSpec& base, std::span<const double> fields) {
    std::vector<GapPoint> out;
    out.reserve(fields.size());
    for (double h : fields) {
        TfimSpec spec = base;
        spec.field = h;
        const GroundState gs = ground_state_oracle(build_tfim(spec));
        out.push_back({h, gs.energy, gs.gap});
    }
    return out;
}

std::string gap_scan_csv(std::span<const GapPoint> points) {
    std::string csv = "h,ground_energy,gap\n";
    char line[128];
    for (const GapPoint& p : points) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p.field, p.ground_energy, p.gap);
        csv += line;
    }
    return csv;
}

}  // namespace grl
