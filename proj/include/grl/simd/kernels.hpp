#pragma once

// Data-parallel inner loops shared by the statevector simulator and the
// Q-network. Each kernel has a scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The active table is chosen once at startup from CPUID;
// setting GRL_SIMD=scalar in the environment forces the reference path.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace grl::simd {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix [m00, m01, m10, m11].
struct Mat2 {
    cplx m[4];
};

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;

    /// Applies `u` to every amplitude pair (i, i | mask) with bit `mask` clear.
    void (*apply_1q)(cplx* amp, std::size_t dim, std::size_t mask, const Mat2& u);

    /// Multiplies amplitudes with bit `mask` clear by d0 and set by d1.
    void (*apply_diag_1q)(cplx* amp, std::size_t dim, std::size_t mask, cplx d0, cplx d1);

    /// Negates amplitudes where every bit of `mask` is set (CZ for a two-bit mask).
    void (*phase_flip)(cplx* amp, std::size_t dim, std::size_t mask);

    /// sum_i conj(amp[i ^ xmask]) * (-1)^popcount(i & zmask) * amp[i]
    cplx (*pauli_expectation)(const cplx* amp, std::size_t dim, std::uint64_t xmask,
                              std::uint64_t zmask);

    double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

/// Returns nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_has_avx2();

/// The table selected for this process.
const KernelTable& kernels();

std::string_view isa_name(Isa isa);

}  // namespace grl::simd
