#pragma once

#include "rogers/spec.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace rogers {

struct SupSample {
    double sup_value = 0;
    double argmax_time = 0;  // first time the supremum is attained
    double horizon = 0;      // end of the observed lifetime
    bool killed = false;
};

struct SupSampleSet {
    std::vector<SupSample> samples;
    std::uint64_t seed = 0;
};

// X_t = drift t + sqrt(variance) W_t + compound Poisson jumps, killed at rate kill.
struct JumpComponent {
    double rate = 0;
    double s = 0;  // jump size Exp(|s|), sign of s
};
struct LevyTriplet {
    double variance = 0;
    double drift = 0;
    double kill = 0;
    std::vector<JumpComponent> jumps;
    double jump_rate = 0;
    bool compound_poisson = false;

    // characteristic exponent rebuilt from the triplet
    std::complex<double> exponent(std::complex<double> xi) const;
};
LevyTriplet levy_triplet(const LevyAtomic& spec);

struct McConfig {
    int shard_size = 4096;
    int threads = 0;  // 0: hardware concurrency
};

// Supremum over [0, min(S, kill time)) with S ~ Exp(sigma), sampled exactly.
// Shard k uses the seed derived from (seed, k), so output depends only on
// (spec, sigma, n, seed, shard_size).
SupSampleSet simulate_sup_samples(const RogersSpec& spec, double sigma, std::size_t n, std::uint64_t seed,
                                  const McConfig& cfg = {});

struct McQuery {
    enum class Kind { laplace, tail, joint };
    Kind kind = Kind::laplace;
    double xi = 0;
    double x = 0;
    double tau = 0;

    static McQuery laplace(double xi) { return {Kind::laplace, xi, 0, 0}; }
    static McQuery tail(double x) { return {Kind::tail, 0, x, 0}; }
    static McQuery joint(double xi, double tau) { return {Kind::joint, xi, 0, tau}; }
};

struct McEstimate {
    double mean = 0;
    double std_error = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

// laplace: E e^{-xi sup}; tail: P(sup > x); joint: E e^{-xi sup - tau argmax}
std::vector<McEstimate> mc_estimates(const SupSampleSet& set, const std::vector<McQuery>& queries);

void write_samples_csv(std::ostream& os, const std::vector<SupSample>& samples);

}  // namespace rogers
