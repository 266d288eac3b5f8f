#pragma once

#include "rogers/numerics.hpp"
#include "rogers/phi_profile.hpp"
#include "rogers/spec.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rogers {

struct LimitsResult {
    double f_at_zero = 0;
    bool zero_infinite = false;
    double f_at_infinity = 0;
    bool infinity_infinite = false;
};

struct Witness {
    std::string check;
    cplx point;
    double margin = 0;
    std::string detail;
};

// margin > 0 means the check held with that much room; failures have margin < 0
struct VerifyReport {
    std::string suite;
    int n_checks = 0;
    int n_failures = 0;
    double worst_margin = HUGE_VAL;
    std::vector<Witness> witnesses;

    void record(const std::string& check, cplx point, double margin, const std::string& detail = {});
    void merge(const VerifyReport& other);
    bool passed() const { return n_failures == 0; }
    nlohmann::json to_json() const;
};

// Evaluatable Rogers function. eval() is defined off the imaginary axis; a
// point with real part +0.0 yields the limit from the right half-plane.
class RogersFn {
public:
    virtual ~RogersFn() = default;
    virtual cplx eval(cplx xi) const = 0;
    virtual LimitsResult limits() const = 0;
    // s where the boundary angle may jump or kink
    virtual std::vector<double> phi_hints() const = 0;
    // exact boundary-angle profiles (plus side, minus side) when known
    virtual std::optional<std::pair<PhiProfile, PhiProfile>> exact_phi() const { return std::nullopt; }
    virtual std::optional<double> exp_constant() const { return std::nullopt; }
    // right-limit value at i*y, throwing DomainError outside the domain
    cplx eval_axis(double y) const { return eval(cplx(0.0, y)); }
};

using FnPtr = std::shared_ptr<const RogersFn>;

FnPtr make_fn(const RogersSpec& spec);
// tau + f, with tau >= 0; native for LevyAtomic
FnPtr shifted(const RogersSpec& spec, double tau);
FnPtr shifted(const FnPtr& f, double tau);

struct ValidationResult {
    RogersSpec spec;
    std::string method = "sampled";
    int n_samples = 0;
    double worst_margin = HUGE_VAL;
};

ValidationResult validate_spec(const RogersSpec& spec, int n_samples = 400);
// structural checks and canonical ordering only
RogersSpec normalize_spec(const RogersSpec& spec);

cplx eval_f(const RogersSpec& spec, cplx xi);
double levy_density(const RogersSpec& spec, double x);
LimitsResult f_limits(const RogersSpec& spec);

std::vector<double> default_eps_ladder(double s);
double estimate_phi(const RogersSpec& spec, double s, const std::vector<double>& eps_ladder = {});
double estimate_phi(const RogersFn& f, double s, const std::vector<double>& eps_ladder = {});
// phi from the boundary value itself, falling back to the ladder when the
// boundary value is not finite
double boundary_phi(const RogersFn& f, double s);

VerifyReport check_function_bounds(const RogersSpec& spec, const std::vector<cplx>& samples);
VerifyReport check_function_bounds(const RogersFn& f, const std::vector<cplx>& samples);

std::vector<cplx> log_polar_samples(int n, double r_lo, double r_hi, std::uint64_t seed);

// Compound Poisson bookkeeping for LevyAtomic specs.
struct JumpSummary {
    double compensator = 0;  // drift absorbed by the jump part
    double jump_rate = 0;    // total Levy mass
    bool compound_poisson = false;
};
JumpSummary jump_summary(const LevyAtomic& spec);

// f(xi) = -i b xi for some b (no Gaussian, no jumps, no killing)
bool is_pure_drift(const RogersFn& f);

}  // namespace rogers
