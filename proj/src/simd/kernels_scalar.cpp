#include "grl/simd/kernels.hpp"

#include <bit>

namespace grl::simd {
namespace {

void apply_1q(cplx* amp, std::size_t dim, std::size_t mask, const Mat2& u) {
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t off = 0; off < mask; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + mask;
            const cplx a0 = amp[i0];
            const cplx a1 = amp[i1];
            amp[i0] = u.m[0] * a0 + u.m[1] * a1;
            amp[i1] = u.m[2] * a0 + u.m[3] * a1;
        }
    }
}

void apply_diag_1q(cplx* amp, std::size_t dim, std::size_t mask, cplx d0, cplx d1) {
    for (std::size_t i = 0; i < dim; ++i) amp[i] *= (i & mask) ? d1 : d0;
}

void phase_flip(cplx* amp, std::size_t dim, std::size_t mask) {
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mask) == mask) amp[i] = -amp[i];
    }
}

cplx pauli_expectation(const cplx* amp, std::size_t dim, std::uint64_t xmask,
                       std::uint64_t zmask) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) {
        const cplx term = std::conj(amp[i ^ xmask]) * amp[i];
        if (std::popcount(static_cast<std::uint64_t>(i) & zmask) & 1U) {
            acc -= term;
        } else {
            acc += term;
        }
    }
    return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

constexpr KernelTable kTable{Isa::Scalar, apply_1q, apply_diag_1q, phase_flip,
                             pauli_expectation, dot};

}  // namespace

const KernelTable& scalar_kernels() { return kTable; }

}  // namespace grl::simd
