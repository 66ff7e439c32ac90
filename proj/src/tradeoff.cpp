#include "divtest/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace divtest {

namespace {

// Compensated (Neumaier) accumulation; keeps the 1e-12-level closure
// guarantees independent of summation length.
struct NeumaierSum {
    double s = 0.0;
    double c = 0.0;
    void add(double v) {
        double t = s + v;
        if (std::fabs(s) >= std::fabs(v)) {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    double value() const { return s + c; }
};

struct Triple {
    double s;
    double pmass;
    double qmass;
};

struct Level {
    double s;
    double pmass;
    double qmass;
};

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::vector<Level> group_levels(std::vector<Triple>& triples) {
    std::sort(triples.begin(), triples.end(),
              [](const Triple& a, const Triple& b) { return a.s < b.s; });
    std::vector<Level> levels;
    std::size_t i = 0;
    while (i < triples.size()) {
        std::size_t j = i;
        NeumaierSum p, q;
        while (j < triples.size() && triples[j].s == triples[i].s) {
            p.add(triples[j].pmass);
            q.add(triples[j].qmass);
            ++j;
        }
        levels.push_back(Level{triples[i].s, p.value(), q.value()});
        i = j;
    }
    return levels;
}

std::vector<TradeoffPoint> points_from_levels(const std::vector<Level>& levels) {
    std::size_t m = levels.size();
    // alpha at threshold s_j is the P-mass at statistic >= s_j (suffix incl. j);
    // beta is the Q-mass strictly below (prefix excl. j).
    std::vector<double> alpha(m);
    NeumaierSum suffix;
    for (std::size_t j = m; j-- > 0;) {
        suffix.add(levels[j].pmass);
        alpha[j] = clamp01(suffix.value());
    }
    std::vector<TradeoffPoint> pts;
    pts.reserve(m + 1);
    NeumaierSum prefix;
    for (std::size_t j = 0; j < m; ++j) {
        pts.push_back(TradeoffPoint{levels[j].s, alpha[j], clamp01(prefix.value())});
        prefix.add(levels[j].qmass);
    }
    // Accept-all side: any threshold beyond the largest statistic.
    pts.push_back(TradeoffPoint{std::nextafter(levels.back().s,
                                               std::numeric_limits<double>::infinity()),
                                0.0, clamp01(prefix.value())});
    return pts;
}

}  // namespace

TradeoffCurve divergence_tradeoff_curve(const Divergence& d, const Distribution& p,
                                        const Distribution& q, std::int64_t n,
                                        std::uint64_t cap) {
    if (p.size() != q.size()) {
        throw DimensionMismatch("divergence_tradeoff_curve: alphabet sizes differ");
    }
    std::vector<Triple> triples;
    triples.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(
        count_types(n, p.size()), 1u << 20)));
    for_each_type(n, p.size(), [&](const std::vector<std::int64_t>& counts) {
        TypeDistribution t(counts);
        double s = d(t, p);
        triples.push_back(Triple{s, std::exp(type_log_prob(t, p)),
                                 std::exp(type_log_prob(t, q))});
    }, cap);
    std::vector<Level> levels = group_levels(triples);
    TradeoffCurve curve;
    curve.kind = TestKind::DivergenceTest;
    curve.statistic = d.label();
    curve.n = n;
    curve.points = points_from_levels(levels);
    return curve;
}

TradeoffCurve np_tradeoff_curve(const Distribution& p, const Distribution& q,
                                std::int64_t n, std::uint64_t cap) {
    if (p.size() != q.size()) {
        throw DimensionMismatch("np_tradeoff_curve: alphabet sizes differ");
    }
    std::vector<double> llr(static_cast<std::size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) {
        llr[static_cast<std::size_t>(i)] = std::log(q[i] / p[i]);
    }
    std::vector<Triple> triples;
    for_each_type(n, p.size(), [&](const std::vector<std::int64_t>& counts) {
        TypeDistribution t(counts);
        double s = 0.0;
        for (int i = 0; i < p.size(); ++i) {
            s += static_cast<double>(counts[static_cast<std::size_t>(i)]) *
                 llr[static_cast<std::size_t>(i)];
        }
        triples.push_back(Triple{s, std::exp(type_log_prob(t, p)),
                                 std::exp(type_log_prob(t, q))});
    }, cap);
    std::vector<Level> levels = group_levels(triples);
    TradeoffCurve curve;
    curve.kind = TestKind::NeymanPearson;
    curve.statistic = "log_likelihood_ratio";
    curve.n = n;
    curve.points = points_from_levels(levels);
    return curve;
}

CalibratedThreshold calibrate_threshold(const Divergence& d, const Distribution& p,
                                        std::int64_t n, double eps, std::uint64_t cap) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
        throw DomainError("calibrate_threshold: eps must lie in (0,1)");
    }
    std::vector<Triple> triples;
    for_each_type(n, p.size(), [&](const std::vector<std::int64_t>& counts) {
        TypeDistribution t(counts);
        triples.push_back(Triple{d(t, p), std::exp(type_log_prob(t, p)), 0.0});
    }, cap);
    std::vector<Level> levels = group_levels(triples);
    std::size_t m = levels.size();
    std::vector<double> alpha(m);
    NeumaierSum suffix;
    for (std::size_t j = m; j-- > 0;) {
        suffix.add(levels[j].pmass);
        alpha[j] = clamp01(suffix.value());
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (alpha[j] <= eps) {
            double prev_t = std::numeric_limits<double>::quiet_NaN();
            double prev_a = std::numeric_limits<double>::quiet_NaN();
            if (j > 0) {
                prev_t = levels[j - 1].s;
                prev_a = alpha[j - 1];
            }
            return CalibratedThreshold{levels[j].s, alpha[j], prev_t, prev_a};
        }
    }
    // Even the top breakpoint keeps too much mass; only accept-all works.
    double top = levels.back().s;
    return CalibratedThreshold{
        std::nextafter(top, std::numeric_limits<double>::infinity()), 0.0, top,
        alpha[m - 1]};
}

double beta_at_alpha(const TradeoffCurve& curve, double alpha) {
    if (curve.points.empty()) throw DomainError("beta_at_alpha: empty curve");
    auto it = std::partition_point(curve.points.begin(), curve.points.end(),
                                   [&](const TradeoffPoint& pt) { return pt.alpha > alpha; });
    if (it == curve.points.end()) {
        throw DomainError("beta_at_alpha: no point with type-I error <= " +
                          std::to_string(alpha));
    }
    return it->beta;
}

std::string tradeoff_csv(const TradeoffCurve& curve) {
    std::ostringstream os;
    os << "threshold,alpha,beta,ln_alpha,ln_beta\n";
    char buf[512];
    for (const auto& pt : curve.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", pt.threshold,
                      pt.alpha, pt.beta, std::log(pt.alpha), std::log(pt.beta));
        os << buf;
    }
    return os.str();
}

TradeoffCurve tradeoff_from_csv(const std::string& text, TestKind kind,
                                std::string statistic, std::int64_t n) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "threshold,alpha,beta,ln_alpha,ln_beta") {
        throw ConfigError("tradeoff_from_csv: unexpected header: " + line);
    }
    TradeoffCurve curve;
    curve.kind = kind;
    curve.statistic = std::move(statistic);
    curve.n = n;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        TradeoffPoint pt{};
        std::size_t pos = 0;
        double* fields[3] = {&pt.threshold, &pt.alpha, &pt.beta};
        for (double* f : fields) {
            std::size_t next = line.find(',', pos);
            *f = std::stod(line.substr(pos, next - pos));
            pos = (next == std::string::npos) ? line.size() : next + 1;
        }
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace divtest
