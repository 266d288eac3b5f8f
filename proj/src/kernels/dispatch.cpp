#include "rogers/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace rogers::kernels {

namespace {

Isa detect() {
    const char* force = std::getenv("ROGERS_FORCE_SCALAR");
    if (force && std::strcmp(force, "1") == 0) return Isa::scalar;
#if defined(ROGERS_HAVE_AVX2)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
    return Isa::scalar;
}

}  // namespace

Isa active_isa() {
    static const Isa isa = detect();
    return isa;
}

StieltjesFn variant(Isa isa) {
#if defined(ROGERS_HAVE_AVX2)
    if (isa == Isa::avx2) return &stieltjes_sum_avx2;
#endif
    (void)isa;
    return &stieltjes_sum_scalar;
}

std::complex<double> stieltjes_sum(const double* a, const double* lam, std::size_t n,
                                   std::complex<double> tau) {
    static const StieltjesFn fn = variant(active_isa());
    return fn(a, lam, n, tau);
}

void stieltjes_sum_batch(const double* a, const double* lam, std::size_t n,
                         const std::complex<double>* taus, std::size_t m,
                         std::complex<double>* out) {
    static const StieltjesFn fn = variant(active_isa());
    for (std::size_t j = 0; j < m; ++j) out[j] = fn(a, lam, n, taus[j]);
}

}  // namespace rogers::kernels
