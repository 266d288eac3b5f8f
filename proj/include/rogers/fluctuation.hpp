#pragma once

#include "rogers/wiener_hopf.hpp"

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace rogers {

struct SpaceTimeQuery {
    double sigma = 1;  // killing intensity of the exponential horizon
    double tau = 0;
    double xi = 0;
    Side side = Side::plus;

    void validate() const;
};

struct FluctResult {
    double value = 0;
    double err_estimate = 0;
    std::vector<std::string> method_chain;
};

enum class CmMode { cm_differences, stieltjes_arg, cbf_arg };
const char* cm_mode_name(CmMode m);
CmMode parse_cm_mode(const std::string& s);

struct CmCheckConfig {
    CmMode mode = CmMode::cm_differences;
    std::vector<double> grid;    // cm_differences
    std::vector<cplx> samples;   // arg modes; upper half-plane
    int order = 8;
    double tol = 1e-9;

    void validate() const;
};

// cm_differences: (-1)^k times the k-th divided difference, rescaled to a
// forward difference and normalized by max |h|, is >= -tol for k <= order.
// cbf_arg: 0 <= Arg h <= Arg xi; stieltjes_arg: -Arg xi <= Arg h <= 0.
VerifyReport cm_cbf_check(const std::function<cplx(cplx)>& h, const CmCheckConfig& cfg);

// Upper half-plane samples with |xi| log-uniform on [r_lo, r_hi] and
// Arg xi uniform on [margin, pi - margin].
std::vector<cplx> upper_half_plane_samples(int n, double r_lo, double r_hi, std::uint64_t seed,
                                           double margin = 0.05);

// Ladder-height quantities of tau + f. Absolute values of kappa are never
// formed; everything is a ratio, or the kappa-circ-including product.
class Fluctuation {
public:
    explicit Fluctuation(const RogersSpec& spec);
    explicit Fluctuation(FnPtr f);

    const FnPtr& fn() const { return solver_.fn(); }
    bool compound_poisson() const;

    // kappa(tau, xi1) / kappa(tau, xi2); xi = 0 is the limit from the right
    FluctResult kappa_ratio_xi(double tau, double xi1, double xi2, Side side,
                               WhMethod method = WhMethod::bd);
    // kappa(tau1, xi) / kappa(tau2, xi); f must be unbounded
    FluctResult kappa_ratio_tau(double xi, double tau1, double tau2, Side side);
    double kappa_circ(double tau) const;

    // E exp(-xi sup - tau argmax) over an Exp(sigma) horizon; the minus side
    // gives the infimum
    FluctResult pr_laplace(const SpaceTimeQuery& q);
    // P(sup > x) over an Exp(sigma) horizon, by Stieltjes inversion
    FluctResult sup_tail(double sigma, double x, Side side = Side::plus,
                         const std::vector<double>& eps_ladder = {});

    // Continuations in tau off (-inf, 0] from the spine measure.
    // kappa(tau, xi1) / kappa(tau, xi2)
    std::function<cplx(cplx)> ratio_xi_in_tau(double xi1, double xi2, Side side);
    // kappa(tau, xi) / kappa(tau_ref, xi)
    std::function<cplx(cplx)> kappa_in_tau(double xi, double tau_ref, Side side);
    // kappa_circ(tau) kappa+(tau, xi1) kappa-(tau, xi2)
    std::function<cplx(cplx)> product_in_tau(double xi1, double xi2);
    // kappa(tau, xi) / kappa(tau, xi_ref) for complex xi off (-inf, 0]
    std::function<cplx(cplx)> kappa_in_xi(double tau, double xi_ref, Side side);
    // sigma -> kappa+(sigma, 0) / (sigma kappa+(sigma, xi)): Laplace transform
    // in t of E exp(-xi sup over [0, t])
    std::function<cplx(cplx)> laplace_in_sigma(double xi, Side side);

private:
    FactorResult tau_log(double xi, double tau1, double tau2, Side side) const;
    SpineMeasure& spine();

    WhSolver solver_;
    LimitsResult limits_;
    struct TailKey {
        double sigma, eps;
        int side;
        bool operator<(const TailKey& o) const {
            return std::tie(sigma, eps, side) < std::tie(o.sigma, o.eps, o.side);
        }
    };
    std::map<TailKey, std::map<double, double>> tail_memo_;
};

FluctResult kappa_ratio_xi(const RogersSpec& spec, double tau, double xi1, double xi2, Side side,
                           WhMethod method = WhMethod::bd);
FluctResult kappa_ratio_tau(const RogersSpec& spec, double xi, double tau1, double tau2, Side side);
double kappa_circ(const RogersSpec& spec, double tau);
FluctResult pr_laplace(const RogersSpec& spec, double sigma, double tau, double xi, Side side);
FluctResult sup_tail(const RogersSpec& spec, double sigma, double x, const std::vector<double>& eps_ladder = {});

// Relative deviation in the space-time factorization at real xi:
// (tau + f(xi)) / ((1 + f(0+)) kappa_circ(tau)) against kappa+(tau, -i xi) kappa-(tau, i xi),
// the latter assembled from tau-ratios at xi = 0 normalized at tau = 1 and
// factor ratios of tau + f.
struct SpaceTimeCheck {
    cplx lhs;
    cplx rhs;
    double rel_error = 0;
};
SpaceTimeCheck space_time_check(Fluctuation& fl, double tau, double xi);

}  // namespace rogers
