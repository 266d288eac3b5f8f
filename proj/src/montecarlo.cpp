#include "rogers/montecarlo.hpp"

#include "rogers/core.hpp"
#include "rogers/errors.hpp"
#include "rogers/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

namespace rogers {

cplx LevyTriplet::exponent(cplx xi) const {
    cplx v = 0.5 * variance * xi * xi - cplx(0, drift) * xi + kill;
    for (const auto& j : jumps) {
        double a = std::abs(j.s);
        cplx cf = j.s > 0 ? a / (a - cplx(0, 1) * xi) : a / (a + cplx(0, 1) * xi);
        v += j.rate * (1.0 - cf);
    }
    return v;
}

LevyTriplet levy_triplet(const LevyAtomic& spec) {
    LevyTriplet t;
    JumpSummary js = jump_summary(spec);
    t.variance = 2 * spec.a;
    t.kill = spec.c;
    t.compound_poisson = js.compound_poisson;
    t.drift = js.compound_poisson ? 0.0 : spec.b - js.compensator;
    for (const auto& at : spec.atoms) {
        double rate = at.w / (kPi * std::abs(at.s));
        t.jumps.push_back({rate, at.s});
        t.jump_rate += rate;
    }
    return t;
}

namespace {

struct Segment {
    double max_gain, time_to_max, drop, time_after;
};

// Drifted Brownian motion run for an Exp(q) time: the maximum and the drop
// from it are independent exponentials, and each duration is the first
// passage time of the level for the tilted drift sqrt(d^2 + 2 v q).
class SegmentSampler {
public:
    SegmentSampler(double v, double d, double q) : v_(v), d_(d), q_(q) {
        if (v > 0) {
            dq_ = std::sqrt(d * d + 2 * v * q);
            rp_ = (dq_ - d) / v;
            rm_ = (dq_ + d) / v;
        }
    }

    Segment draw(Rng& rng) const {
        if (v_ == 0) {
            double e = rng.exponential(q_);
            if (d_ > 0) return {d_ * e, e, 0, 0};
            return {0, 0, -d_ * e, e};
        }
        double m = rng.exponential(rp_);
        double g = m > 0 ? rng.inverse_gaussian(m / dq_, m * m / v_) : 0.0;
        double m2 = rng.exponential(rm_);
        double g2 = m2 > 0 ? rng.inverse_gaussian(m2 / dq_, m2 * m2 / v_) : 0.0;
        return {m, g, m2, g2};
    }

private:
    double v_, d_, q_;
    double dq_ = 0, rp_ = 0, rm_ = 0;
};

class PathSampler {
public:
    PathSampler(const LevyTriplet& t, double sigma)
        : t_(t), sigma_(sigma), q_(sigma + t.kill + t.jump_rate), seg_(t.variance, t.drift, q_) {}

    SupSample draw(Rng& rng) const {
        SupSample out;
        double x = 0, time = 0;
        for (;;) {
            Segment s = seg_.draw(rng);
            if (x + s.max_gain > out.sup_value) {
                out.sup_value = x + s.max_gain;
                out.argmax_time = time + s.time_to_max;
            }
            x += s.max_gain - s.drop;
            time += s.time_to_max + s.time_after;
            // which clock rang
            double u = rng.uniform() * q_;
            if (u < sigma_) break;
            if (u < sigma_ + t_.kill) {
                out.killed = true;
                break;
            }
            x += jump(rng, u - sigma_ - t_.kill);
            if (x > out.sup_value) {
                out.sup_value = x;
                out.argmax_time = time;
            }
        }
        out.horizon = time;
        return out;
    }

private:
    double jump(Rng& rng, double u) const {
        for (const auto& j : t_.jumps) {
            if (u < j.rate) return (j.s > 0 ? 1.0 : -1.0) * rng.exponential(std::abs(j.s));
            u -= j.rate;
        }
        const auto& j = t_.jumps.back();
        return (j.s > 0 ? 1.0 : -1.0) * rng.exponential(std::abs(j.s));
    }

    LevyTriplet t_;
    double sigma_, q_;
    SegmentSampler seg_;
};

}  // namespace

SupSampleSet simulate_sup_samples(const RogersSpec& spec, double sigma, std::size_t n, std::uint64_t seed,
                                  const McConfig& cfg) {
    if (!std::holds_alternative<LevyAtomic>(spec))
        throw MethodUnsupported("simulation needs a levy_atomic spec, got " + type_name(spec));
    if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive", "sigma");
    if (cfg.shard_size < 1) throw ArgumentError("shard_size must be positive", "shard_size");
    LevyTriplet t = levy_triplet(std::get<LevyAtomic>(spec));
    PathSampler ps(t, sigma);

    SupSampleSet out;
    out.seed = seed;
    out.samples.resize(n);
    std::size_t shards = (n + cfg.shard_size - 1) / cfg.shard_size;
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next++) < shards;) {
            Rng rng(Rng::derive_seed(seed, k));
            std::size_t lo = k * cfg.shard_size, hi = std::min(n, lo + cfg.shard_size);
            for (std::size_t i = lo; i < hi; ++i) out.samples[i] = ps.draw(rng);
        }
    };
    unsigned nt = cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, shards));
    if (nt <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nt; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return out;
}

std::vector<McEstimate> mc_estimates(const SupSampleSet& set, const std::vector<McQuery>& queries) {
    if (set.samples.empty()) throw ArgumentError("no samples", "samples");
    std::vector<McEstimate> out;
    std::size_t n = set.samples.size();
    for (const auto& q : queries) {
        if (q.kind != McQuery::Kind::tail && !(q.xi >= 0)) throw ArgumentError("xi must be >= 0", "xi");
        if (q.kind == McQuery::Kind::joint && !(q.tau >= 0)) throw ArgumentError("tau must be >= 0", "tau");
        // Welford
        double mean = 0, m2 = 0;
        std::size_t k = 0;
        for (const auto& s : set.samples) {
            double v;
            switch (q.kind) {
                case McQuery::Kind::laplace: v = std::exp(-q.xi * s.sup_value); break;
                case McQuery::Kind::tail: v = s.sup_value > q.x ? 1.0 : 0.0; break;
                default: v = std::exp(-q.xi * s.sup_value - q.tau * s.argmax_time); break;
            }
            ++k;
            double d = v - mean;
            mean += d / k;
            m2 += d * (v - mean);
        }
        double var = n > 1 ? m2 / (n - 1) : 0.0;
        out.push_back({mean, std::sqrt(var / n), n, set.seed});
    }
    return out;
}

void write_samples_csv(std::ostream& os, const std::vector<SupSample>& samples) {
    auto old = os.precision(17);
    os << "sup_value,argmax_time,horizon,killed\n";
    for (const auto& s : samples)
        os << s.sup_value << ',' << s.argmax_time << ',' << s.horizon << ',' << (s.killed ? 1 : 0) << '\n';
    os.precision(old);
}

}  // namespace rogers
