// Compiled with -mavx2 -mfma. Nothing in this file may run before
// cpu_has_avx2() has returned true.

#include "grl/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <bit>

namespace grl::simd {
namespace {

// Interleaved layout: one __m256d holds two complex numbers [re0, im0, re1, im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// v * (cr + i ci), both complex lanes scaled by the same scalar.
inline __m256d cmul_scalar(__m256d v, __m256d cr, __m256d ci) {
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmaddsub_pd(v, cr, _mm256_mul_pd(swapped, ci));
}

// Lane-wise complex product a * b.
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d br = _mm256_movedup_pd(b);
    const __m256d bi = _mm256_permute_pd(b, 0b1111);
    const __m256d as = _mm256_permute_pd(a, 0b0101);
    return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(as, bi));
}

inline __m128d cmul128(__m128d v, __m128d c) {
    const __m128d cr = _mm_movedup_pd(c);
    const __m128d ci = _mm_permute_pd(c, 0b11);
    const __m128d vs = _mm_permute_pd(v, 0b01);
    return _mm_fmaddsub_pd(v, cr, _mm_mul_pd(vs, ci));
}

inline __m128d load1(const cplx* p) { return _mm_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store1(cplx* p, __m128d v) { _mm_storeu_pd(reinterpret_cast<double*>(p), v); }

void apply_1q(cplx* amp, std::size_t dim, std::size_t mask, const Mat2& u) {
    if (mask == 1) {
        const __m128d m00 = load1(&u.m[0]);
        const __m128d m01 = load1(&u.m[1]);
        const __m128d m10 = load1(&u.m[2]);
        const __m128d m11 = load1(&u.m[3]);
        for (std::size_t i = 0; i < dim; i += 2) {
            const __m128d a0 = load1(amp + i);
            const __m128d a1 = load1(amp + i + 1);
            store1(amp + i, _mm_add_pd(cmul128(a0, m00), cmul128(a1, m01)));
            store1(amp + i + 1, _mm_add_pd(cmul128(a0, m10), cmul128(a1, m11)));
        }
        return;
    }
    const __m256d r00 = _mm256_set1_pd(u.m[0].real()), i00 = _mm256_set1_pd(u.m[0].imag());
    const __m256d r01 = _mm256_set1_pd(u.m[1].real()), i01 = _mm256_set1_pd(u.m[1].imag());
    const __m256d r10 = _mm256_set1_pd(u.m[2].real()), i10 = _mm256_set1_pd(u.m[2].imag());
    const __m256d r11 = _mm256_set1_pd(u.m[3].real()), i11 = _mm256_set1_pd(u.m[3].imag());
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t off = 0; off < mask; off += 2) {
            cplx* p0 = amp + base + off;
            cplx* p1 = p0 + mask;
            const __m256d a0 = load2(p0);
            const __m256d a1 = load2(p1);
            store2(p0, _mm256_add_pd(cmul_scalar(a0, r00, i00), cmul_scalar(a1, r01, i01)));
            store2(p1, _mm256_add_pd(cmul_scalar(a0, r10, i10), cmul_scalar(a1, r11, i11)));
        }
    }
}

void apply_diag_1q(cplx* amp, std::size_t dim, std::size_t mask, cplx d0, cplx d1) {
    const __m256d f00 = _mm256_setr_pd(d0.real(), d0.imag(), d0.real(), d0.imag());
    const __m256d f11 = _mm256_setr_pd(d1.real(), d1.imag(), d1.real(), d1.imag());
    const __m256d f01 = _mm256_setr_pd(d0.real(), d0.imag(), d1.real(), d1.imag());
    for (std::size_t i = 0; i < dim; i += 2) {
        __m256d f;
        if (mask == 1) {
            f = f01;
        } else {
            f = (i & mask) ? f11 : f00;
        }
        store2(amp + i, cmul(load2(amp + i), f));
    }
}

void phase_flip(cplx* amp, std::size_t dim, std::size_t mask) {
    const __m256d neg_lo = _mm256_setr_pd(-0.0, -0.0, 0.0, 0.0);
    const __m256d neg_hi = _mm256_setr_pd(0.0, 0.0, -0.0, -0.0);
    for (std::size_t i = 0; i < dim; i += 2) {
        __m256d s = _mm256_setzero_pd();
        if ((i & mask) == mask) s = _mm256_or_pd(s, neg_lo);
        if (((i + 1) & mask) == mask) s = _mm256_or_pd(s, neg_hi);
        store2(amp + i, _mm256_xor_pd(load2(amp + i), s));
    }
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx pauli_expectation(const cplx* amp, std::size_t dim, std::uint64_t xmask,
                       std::uint64_t zmask) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const bool swap_pair = (xmask & 1U) != 0;
    for (std::size_t i = 0; i < dim; i += 2) {
        const std::size_t j = i ^ xmask;
        __m256d a = load2(amp + (swap_pair ? j - 1 : j));
        if (swap_pair) a = _mm256_permute4x64_pd(a, 0x4E);
        const __m256d b = load2(amp + i);
        const double s0 = (std::popcount(static_cast<std::uint64_t>(i) & zmask) & 1U) ? -1.0 : 1.0;
        const double s1 = (std::popcount(static_cast<std::uint64_t>(i + 1) & zmask) & 1U) ? -1.0 : 1.0;
        const __m256d s = _mm256_setr_pd(s0, s0, s1, s1);
        const __m256d as = _mm256_mul_pd(a, s);
        // conj(a) * b: re = ar*br + ai*bi, im = ar*bi - ai*br
        acc_re = _mm256_fmadd_pd(as, b, acc_re);
        acc_im = _mm256_fmadd_pd(as, _mm256_permute_pd(b, 0b0101), acc_im);
    }
    const __m256d odd_neg = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    return {hsum(acc_re), hsum(_mm256_mul_pd(acc_im, odd_neg))};
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
    }
    for (; i + 4 <= n; i += 4) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    }
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

constexpr KernelTable kTable{Isa::Avx2, apply_1q, apply_diag_1q, phase_flip,
                             pauli_expectation, dot};

}  // namespace

const KernelTable* avx2_kernels() { return &kTable; }

}  // namespace grl::simd

#else

namespace grl::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace grl::simd

#endif
