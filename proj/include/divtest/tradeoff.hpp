#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divtest/asymptotics.hpp"
#include "divtest/distribution.hpp"
#include "divtest/divergence.hpp"
#include "divtest/types_enum.hpp"

namespace divtest {

// One deterministic operating point: accept the null iff statistic < threshold.
struct TradeoffPoint {
    double threshold;
    double alpha;  // exact type-I error (null rejected)
    double beta;   // exact type-II error (alternative accepted)
};

// Exact error trade-off over all distinct-statistic breakpoints, sorted by
// threshold. alpha is nonincreasing and beta nondecreasing along the list;
// the first point is the reject-all side (alpha=1, beta=0) and the last the
// accept-all side (alpha=0, beta=1).
struct TradeoffCurve {
    TestKind kind;
    std::string statistic;
    std::int64_t n;
    std::vector<TradeoffPoint> points;
};

// Acceptance region {D(type || P) < r}; exact masses by full enumeration.
TradeoffCurve divergence_tradeoff_curve(const Divergence& d, const Distribution& p,
                                        const Distribution& q, std::int64_t n,
                                        std::uint64_t cap = kDefaultEnumCap);

// Likelihood-ratio test. The stored statistic is the per-sample log-likelihood
// ratio toward Q, sum_i counts_i ln(Q_i/P_i), so acceptance keeps the
// "statistic < threshold" convention shared by every curve.
TradeoffCurve np_tradeoff_curve(const Distribution& p, const Distribution& q,
                                std::int64_t n, std::uint64_t cap = kDefaultEnumCap);

struct CalibratedThreshold {
    double threshold;       // smallest breakpoint whose exact alpha is <= eps
    double alpha;           // exact type-I error at threshold
    double prev_threshold;  // previous breakpoint (NaN when threshold is the lowest)
    double prev_alpha;      // exact alpha there; > eps by construction
};

CalibratedThreshold calibrate_threshold(const Divergence& d, const Distribution& p,
                                        std::int64_t n, double eps,
                                        std::uint64_t cap = kDefaultEnumCap);

// Smallest type-II error among points with type-I error <= alpha; requires
// alpha >= the curve's minimum achievable level (the accept-all point has
// alpha = 0, so any alpha in [0,1] works).
double beta_at_alpha(const TradeoffCurve& curve, double alpha);

// CSV with header threshold,alpha,beta,ln_alpha,ln_beta (ln of 0 prints -inf).
std::string tradeoff_csv(const TradeoffCurve& curve);
// Parses the column format written by tradeoff_csv; kind/statistic/n are not
// part of the column data and must be supplied by the caller.
TradeoffCurve tradeoff_from_csv(const std::string& text, TestKind kind,
                                std::string statistic, std::int64_t n);

}  // namespace divtest
