#include "rogers/kernels.hpp"

namespace rogers::kernels {

std::complex<double> stieltjes_sum_scalar(const double* a, const double* lam, std::size_t n,
                                          std::complex<double> tau) {
    const double tr = tau.real(), ti = tau.imag(), ti2 = ti * ti;
    // four interleaved accumulators, same association as the vector path
    double re[4] = {0, 0, 0, 0}, im[4] = {0, 0, 0, 0};
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        for (int l = 0; l < 4; ++l) {
            double x = tr + lam[k + l];
            double inv = a[k + l] / (x * x + ti2);
            re[l] += x * inv;
            im[l] -= ti * inv;
        }
    }
    double sr = (re[0] + re[2]) + (re[1] + re[3]);
    double si = (im[0] + im[2]) + (im[1] + im[3]);
    for (; k < n; ++k) {
        double x = tr + lam[k];
        double inv = a[k] / (x * x + ti2);
        sr += x * inv;
        si -= ti * inv;
    }
    return {sr, si};
}

}  // namespace rogers::kernels
