#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace grl {

enum class Pauli : std::uint8_t { I, X, Y, Z };

struct PauliString {
    std::vector<Pauli> ops;  // ops[q] acts on qubit q
    double coefficient = 1.0;

    std::string label() const;
};

struct PauliHamiltonian {
    int num_qubits = 0;
    std::vector<PauliString> terms;

    /// True when every term has an even number of Y factors (real symmetric matrix).
    bool is_real() const;
};

enum class Boundary { Open, Periodic };

/// H = -J sum_<i,j> Z_i Z_j - h sum_i X_i on a chain of `num_qubits` spins.
struct TfimSpec {
    int num_qubits = 2;
    double coupling = 1.0;
    double field = 1.0;
    Boundary boundary = Boundary::Open;
};

/// Open chains have N-1 bonds, periodic chains N (periodic needs N >= 3).
PauliHamiltonian build_tfim(const TfimSpec& spec);

/// (N-1)(-J) + N(-h): the target energy anchoring the curriculum threshold.
double fake_minimum_energy(const TfimSpec& spec);

struct GapPoint {
    double field = 0.0;
    double ground_energy = 0.0;
    double gap = 0.0;
};

std::vector<GapPoint> gap_scan(const TfimSpec& base, std::span<const double> fields);

/// CSV with header "h,ground_energy,gap".
std::string gap_scan_csv(std::span<const GapPoint> points);

}  // namespace grl
