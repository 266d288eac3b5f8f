#pragma once

#include <complex>
#include <cstddef>

namespace rogers::kernels {

enum class Isa { scalar, avx2 };

// Sum_k a[k] / (tau + lam[k]) for real weights and nodes.
using StieltjesFn = std::complex<double> (*)(const double* a, const double* lam, std::size_t n,
                                             std::complex<double> tau);

std::complex<double> stieltjes_sum_scalar(const double* a, const double* lam, std::size_t n,
                                          std::complex<double> tau);
#if defined(ROGERS_HAVE_AVX2)
std::complex<double> stieltjes_sum_avx2(const double* a, const double* lam, std::size_t n,
                                        std::complex<double> tau);
#endif

// Chosen once per process from cpuid; ROGERS_FORCE_SCALAR=1 in the
// environment pins the scalar path.
Isa active_isa();
StieltjesFn variant(Isa isa);

std::complex<double> stieltjes_sum(const double* a, const double* lam, std::size_t n,
                                   std::complex<double> tau);

void stieltjes_sum_batch(const double* a, const double* lam, std::size_t n,
                         const std::complex<double>* taus, std::size_t m,
                         std::complex<double>* out);

}  // namespace rogers::kernels
