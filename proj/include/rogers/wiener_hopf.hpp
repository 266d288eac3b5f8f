#pragma once

#include "rogers/core.hpp"
#include "rogers/spine.hpp"

#include <memory>
#include <variant>

namespace rogers {

enum class Side { plus, minus };
enum class WhMethod { bd, spine, phi };

const char* side_name(Side s);
const char* method_name(WhMethod m);
Side parse_side(const std::string& s);
WhMethod parse_method(const std::string& s);

// Boundary-angle profiles of f on both half-lines together with the constant
// of the exponential representation.
struct PhiCache {
    PhiProfile plus, minus;
    double c = 1;
    bool exact = false;
};

struct PhiCacheConfig {
    double window_lo = 1e-8;  // relative to the smallest scale of f
    double window_hi = 1e8;   // relative to the largest scale of f
    int cells_per_decade = 192;
    double max_jump = 0.05;
    double max_midpoint_dev = 2e-6;
    double min_rel_width = 1e-13;
    // the window grows by decades until phi changes by less than this
    double settle_tol = 1e-10;
    int outer_cells_per_decade = 16;
};

std::shared_ptr<const PhiCache> build_phi_cache(const RogersFn& f, const PhiCacheConfig& cfg = {});

// Evaluator for one Wiener-Hopf factor, normalized by c+ = c- = sqrt(c).
// rescaled(k) multiplies c+ by k and c- by 1/k.
class FactorHandle {
public:
    FactorHandle(std::shared_ptr<const PhiCache> cache, Side side, double scale = 1.0);
    static FactorHandle from_spec(const RogersSpec& spec, Side side);
    static FactorHandle from_fn(const RogersFn& f, Side side);

    cplx eval(cplx xi) const;
    Side side() const { return side_; }
    double constant() const { return cache_->c; }
    const PhiProfile& profile() const { return side_ == Side::plus ? cache_->plus : cache_->minus; }
    const std::shared_ptr<const PhiCache>& cache() const { return cache_; }
    FactorHandle rescaled(double k) const;

private:
    std::shared_ptr<const PhiCache> cache_;
    Side side_;
    double scale_;
};

cplx wh_eval_from_phi(const FactorHandle& h, cplx xi);

struct FactorResult {
    double value = 0;
    double err_estimate = 0;
};

// Shared state for repeated factor queries on f_tau = tau + f: the spine
// measure and the phi caches are built on first use.
class WhSolver {
public:
    explicit WhSolver(FnPtr f);

    // x >= 0 for every argument; x = 0 means the limit from the right
    FactorResult ratio(WhMethod m, Side side, double tau, double x1, double x2);
    FactorResult product(WhMethod m, double tau, double x1, double x2, double R = 1.0);

    const FnPtr& fn() const { return f_; }
    SpineMeasure& spine();
    const PhiCache& phi(double tau) { return *phi_ptr(tau); }
    std::shared_ptr<const PhiCache> phi_ptr(double tau);

private:
    FnPtr f_;
    std::unique_ptr<SpineMeasure> spine_;
    std::vector<std::pair<double, std::shared_ptr<const PhiCache>>> phi_;
};

FactorResult wh_ratio(const RogersSpec& spec, WhMethod method, Side side, double xi1, double xi2);
FactorResult wh_product(const RogersSpec& spec, WhMethod method, double xi1, double xi2, double R = 1.0);

VerifyReport factorization_check(const RogersSpec& spec, const std::vector<cplx>& samples,
                                 double tol = 1e-4);
VerifyReport factorization_check(const RogersFn& f, const std::vector<cplx>& samples, double tol = 1e-4);

// Closed-form oracles.
// bm_drift: f = xi^2/2 - i b xi + sigma = (1/2)(-i xi + r+)(i xi + r-).
struct BmDrift {
    double b = 0;
    double sigma = 0;
};
// stable: f(xi) = c xi^alpha on xi > 0, extended by f(-xi) = conj f(xi).
struct StableLaw {
    cplx c = 1;
    double alpha = 1;
};
using ClosedFamily = std::variant<BmDrift, StableLaw>;

double closed_form_factors(const ClosedFamily& family, Side side, double xi);
double stable_positivity(const StableLaw& law);
double bm_root(const BmDrift& bm, Side side);

}  // namespace rogers
