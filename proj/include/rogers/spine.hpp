#pragma once

#include "rogers/core.hpp"

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace rogers {

inline constexpr double kZAngleTol = 1e-7;

struct SpinePoint {
    double r = 0;
    double theta = 0;
    cplx zeta;
    double lambda = 0;
    bool in_Z = false;
    // lambda came from the eps-ladder because the axis value was singular
    bool boundary_interpolated = false;
};

struct SpineTable {
    std::vector<SpinePoint> points;
    std::vector<std::pair<double, double>> z_intervals;
    double r_min = 0, r_max = 0;
    int n = 0;
    // relative mismatch of one-sided lambda values at each Z boundary
    std::vector<double> boundary_mismatch;
};

enum class Region { D_plus, D_minus, on_spine };
const char* region_name(Region r);

double theta_at(const RogersFn& f, double r, double angle_tol = 1e-12);
double theta_at(const RogersSpec& spec, double r, double angle_tol = 1e-12);
double lambda_at(const RogersFn& f, double r);
double lambda_at(const RogersSpec& spec, double r);
SpinePoint spine_point(const RogersFn& f, double r);

SpineTable build_spine_table(const RogersFn& f, double r_min, double r_max, int n);
SpineTable build_spine_table(const RogersSpec& spec, double r_min, double r_max, int n);

Region classify_point(const RogersFn& f, cplx xi);
Region classify_point(const RogersSpec& spec, cplx xi);

VerifyReport spine_invariant_report(const SpineTable& table, const RogersFn& f,
                                    std::optional<double> exp_constant = std::nullopt);
VerifyReport spine_invariant_report(const SpineTable& table, const RogersSpec& spec);

// f is constant: the spine does not exist
bool is_constant(const RogersFn& f);

// Discretized Stieltjes measure of the profile: for a weight g on the spine,
// int g(r) dlambda(r) / (tau + lambda(r)) ~ sum_k a_k / (tau + lam_k).
struct StieltjesNodes {
    std::vector<double> lam;
    std::vector<double> a;
    cplx sum(cplx tau) const;
};

class SpineMeasure {
public:
    explicit SpineMeasure(FnPtr f);

    // g may be discontinuous only at the radii listed in splits
    StieltjesNodes discretize(const std::function<double(const SpinePoint&)>& g,
                              std::vector<double> splits, double tol = 1e-10);

    const SpinePoint& point(double r);
    const std::vector<double>& z_boundaries() const { return boundaries_; }
    double r_lo() const { return r_lo_; }
    double r_hi() const { return r_hi_; }
    size_t cache_size() const { return cache_.size(); }

private:
    FnPtr f_;
    std::map<double, SpinePoint> cache_;
    std::vector<double> boundaries_;
    std::vector<double> flips_;
    double r_lo_ = 0, r_hi_ = 0;
};

}  // namespace rogers
