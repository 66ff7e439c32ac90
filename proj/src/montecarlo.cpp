#include "divtest/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divtest/asymptotics.hpp"
#include "divtest/errors.hpp"
#include "divtest/genchisq.hpp"

namespace divtest {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<std::int64_t> sample_type(const Distribution& p, std::int64_t n,
                                      std::mt19937_64& rng) {
    if (n < 1) throw DomainError("sample_type: n must be >= 1");
    int k = p.size();
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    std::int64_t remaining = n;
    double rest = 1.0;
    for (int i = 0; i < k - 1 && remaining > 0; ++i) {
        double cond = std::min(1.0, std::max(0.0, p[i] / rest));
        std::binomial_distribution<std::int64_t> bin(remaining, cond);
        std::int64_t c = bin(rng);
        counts[static_cast<std::size_t>(i)] = c;
        remaining -= c;
        rest -= p[i];
        if (rest <= 0.0) rest = std::numeric_limits<double>::min();
    }
    counts[static_cast<std::size_t>(k - 1)] = remaining;
    return counts;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw DomainError("wilson_interval: trials must be positive");
    if (successes > trials) throw DomainError("wilson_interval: successes exceed trials");
    constexpr double z = 1.959963984540054;  // two-sided 95%
    double nn = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / nn;
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (phat + z2 / (2.0 * nn)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    WilsonInterval w;
    w.center = phat;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

ConvergenceReport statistic_convergence(const Divergence& d, const Distribution& p,
                                        std::int64_t n, std::uint64_t samples,
                                        std::uint64_t seed, int grid_points) {
    if (samples == 0) throw DomainError("statistic_convergence: need at least one sample");
    if (grid_points < 1) throw DomainError("statistic_convergence: need a nonempty grid");
    // Limiting law of the scaled statistic under p.
    std::vector<double> lambda = limit_eigenvalues(hessian_matrix(d, p).value, p);
    GenChiSq limit = from_eigenvalues(lambda);

    ConvergenceReport rep;
    rep.samples = samples;
    rep.grid.resize(static_cast<std::size_t>(grid_points));
    rep.limit_tail.resize(static_cast<std::size_t>(grid_points));
    for (int j = 1; j <= grid_points; ++j) {
        double tail = static_cast<double>(j) / (grid_points + 1.0);
        rep.limit_tail[static_cast<std::size_t>(j - 1)] = tail;
        rep.grid[static_cast<std::size_t>(j - 1)] = inverse_tail(limit, tail);
    }

    std::uint64_t state = seed;
    std::mt19937_64 rng(splitmix64(state));
    std::vector<double> scaled;
    scaled.reserve(samples);
    double mean = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        TypeDistribution t(sample_type(p, n, rng));
        double v = static_cast<double>(n) * d(t, p);
        scaled.push_back(v);
        mean += (v - mean) / static_cast<double>(s + 1);
    }
    std::sort(scaled.begin(), scaled.end());

    rep.empirical_tail.resize(static_cast<std::size_t>(grid_points));
    rep.sup_distance = 0.0;
    for (int j = 0; j < grid_points; ++j) {
        double c = rep.grid[static_cast<std::size_t>(j)];
        auto it = std::lower_bound(scaled.begin(), scaled.end(), c);
        double emp = static_cast<double>(scaled.end() - it) / static_cast<double>(samples);
        rep.empirical_tail[static_cast<std::size_t>(j)] = emp;
        rep.sup_distance = std::max(
            rep.sup_distance, std::fabs(emp - rep.limit_tail[static_cast<std::size_t>(j)]));
    }
    rep.scaled_mean = mean;
    return rep;
}

ErrorEstimate estimate_errors(const Divergence& d, const Distribution& p,
                              const Distribution& q, std::int64_t n, double threshold,
                              std::uint64_t samples, std::uint64_t seed) {
    if (p.size() != q.size()) {
        throw DimensionMismatch("estimate_errors: alphabet sizes differ");
    }
    if (samples == 0) throw DomainError("estimate_errors: need at least one sample");
    std::uint64_t state = seed;
    std::mt19937_64 rng_p(splitmix64(state));
    std::mt19937_64 rng_q(splitmix64(state));
    std::uint64_t rejects_under_p = 0;
    std::uint64_t accepts_under_q = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        TypeDistribution tp(sample_type(p, n, rng_p));
        if (d(tp, p) >= threshold) ++rejects_under_p;
        TypeDistribution tq(sample_type(q, n, rng_q));
        if (d(tq, p) < threshold) ++accepts_under_q;
    }
    ErrorEstimate est;
    est.threshold = threshold;
    est.alpha = wilson_interval(rejects_under_p, samples);
    est.beta = wilson_interval(accepts_under_q, samples);
    est.samples = samples;
    return est;
}

}  // namespace divtest
