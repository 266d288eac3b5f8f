#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace rogers {

using cplx = std::complex<double>;
using ComplexPoint = cplx;

inline constexpr double kPi = 3.14159265358979323846;

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
    std::vector<double> singular_points;  // strictly increasing
};

// Integration domain. Infinite ranges are compactified: s = tan(u) on the
// full line, s = a + t/(1-t) on a half-line.
struct Domain {
    enum class Kind { full_line, half_line, finite };
    Kind kind = Kind::finite;
    double a = 0.0;
    double b = 0.0;

    static Domain full() { return {Kind::full_line, 0.0, 0.0}; }
    static Domain half(double a) { return {Kind::half_line, a, 0.0}; }
    static Domain finite(double a, double b) { return {Kind::finite, a, b}; }
};

struct QuadResult {
    cplx value;
    double err_estimate = 0.0;
    int subdivisions = 0;
};

// Global adaptive Gauss-Kronrod (7-15) with panels split at the declared
// singular points; panels touching a singular point use s = a + h v^2.
// Throws ConvergenceError carrying the partial sum when the budget runs out.
QuadResult integrate_adaptive(const std::function<cplx(double)>& f, const Domain& dom,
                              const QuadratureConfig& cfg = {});

// Root of a nondecreasing g on [lo, hi]. Constant sign returns the matching
// endpoint: lo when g > 0 throughout, hi when g < 0 throughout.
double bisect_monotone(const std::function<double(double)>& g, double lo, double hi,
                       double tol);

// Bracketing root finder (TOMS 748) for the same contract, used where many
// roots are needed; falls back to the endpoint rule like bisect_monotone.
double root_monotone(const std::function<double(double)>& g, double lo, double hi,
                     double tol);

// Principal branch; throws DomainError on (-inf, 0].
cplx principal_log(cplx z);

// log(1 + z) without cancellation for small |z|; respects signed zeros.
cplx log1p_c(cplx z);

// Polynomial extrapolation of samples v(h_i) to h = 0 (Neville).
double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& v);
cplx extrapolate_to_zero(const std::vector<double>& h, const std::vector<cplx>& v);

cplx central_difference(const std::function<cplx(cplx)>& f, cplx z, double h);

// Deterministic generator: mt19937_64 with hand-written transforms so that
// variates do not depend on the standard library's distribution classes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform();        // [0, 1)
    double uniform_pos();    // (0, 1]
    double exponential(double rate);
    double normal();
    double inverse_gaussian(double mu, double lambda);
    std::uint64_t next_u64() { return eng_(); }

    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rogers
