#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "divtest/distribution.hpp"
#include "divtest/divergence.hpp"

namespace divtest {

// Deterministic stream splitter; each call advances the state and yields an
// independent-looking 64-bit seed.
std::uint64_t splitmix64(std::uint64_t& state);

// One multinomial draw as a vector of counts, via sequential binomial
// conditioning on the remaining tail mass.
std::vector<std::int64_t> sample_type(const Distribution& p, std::int64_t n,
                                      std::mt19937_64& rng);

struct WilsonInterval {
    double center;  // point estimate successes/trials
    double lo;
    double hi;
};

// 95% score interval.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

// Compares the empirical law of n * d(That, p) under sampling from p against
// its large-n limit (a weighted chi-square mixture) on a tail-quantile grid.
struct ConvergenceReport {
    std::vector<double> grid;            // probe points for the scaled statistic
    std::vector<double> limit_tail;      // exact limiting tail mass at each probe
    std::vector<double> empirical_tail;  // observed fraction of samples >= probe
    double sup_distance;                 // max abs gap over the grid
    double scaled_mean;                  // sample mean of n * d(That, p)
    std::uint64_t samples;
};

ConvergenceReport statistic_convergence(const Divergence& d, const Distribution& p,
                                        std::int64_t n, std::uint64_t samples,
                                        std::uint64_t seed, int grid_points = 200);

// Simulated operating point of the test "accept p iff d(That, p) < threshold".
struct ErrorEstimate {
    double threshold;
    WilsonInterval alpha;  // P(reject | samples from p)
    WilsonInterval beta;   // P(accept | samples from q)
    std::uint64_t samples;
};

ErrorEstimate estimate_errors(const Divergence& d, const Distribution& p,
                              const Distribution& q, std::int64_t n, double threshold,
                              std::uint64_t samples, std::uint64_t seed);

}  // namespace divtest
