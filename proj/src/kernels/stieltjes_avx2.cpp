#include "rogers/kernels.hpp"

#include <immintrin.h>

namespace rogers::kernels {

std::complex<double> stieltjes_sum_avx2(const double* a, const double* lam, std::size_t n,
                                        std::complex<double> tau) {
    const double ti = tau.imag();
    const __m256d vtr = _mm256_set1_pd(tau.real());
    const __m256d vti = _mm256_set1_pd(ti);
    const __m256d vti2 = _mm256_set1_pd(ti * ti);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d x = _mm256_add_pd(vtr, _mm256_loadu_pd(lam + k));
        __m256d den = _mm256_fmadd_pd(x, x, vti2);
        __m256d inv = _mm256_div_pd(_mm256_loadu_pd(a + k), den);
        acc_re = _mm256_fmadd_pd(x, inv, acc_re);
        acc_im = _mm256_fnmadd_pd(vti, inv, acc_im);
    }
    __m128d re2 = _mm_add_pd(_mm256_castpd256_pd128(acc_re), _mm256_extractf128_pd(acc_re, 1));
    __m128d im2 = _mm_add_pd(_mm256_castpd256_pd128(acc_im), _mm256_extractf128_pd(acc_im, 1));
    double sr = _mm_cvtsd_f64(_mm_add_sd(re2, _mm_unpackhi_pd(re2, re2)));
    double si = _mm_cvtsd_f64(_mm_add_sd(im2, _mm_unpackhi_pd(im2, im2)));
    const double tr = tau.real(), ti2 = ti * ti;
    for (; k < n; ++k) {
        double x = tr + lam[k];
        double inv = a[k] / (x * x + ti2);
        sr += x * inv;
        si -= ti * inv;
    }
    return {sr, si};
}

}  // namespace rogers::kernels
