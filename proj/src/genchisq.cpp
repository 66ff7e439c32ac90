#include "divtest/genchisq.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

#include "divtest/errors.hpp"
#include "divtest/special.hpp"

namespace divtest {

int GenChiSq::total_dof() const {
    int k = 0;
    for (int d : dofs) k += d;
    return k;
}

GenChiSq make_genchisq(std::vector<double> weights, std::vector<int> dofs) {
    if (weights.size() != dofs.size() || weights.empty()) {
        throw DimensionMismatch("GenChiSq: weights and dofs must have equal, nonzero length");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw NonPositiveWeight("GenChiSq: weights must be strictly positive");
        }
    }
    for (int d : dofs) {
        if (d < 1) throw DomainError("GenChiSq: dofs must be >= 1");
    }
    return GenChiSq{std::move(weights), std::move(dofs)};
}

GenChiSq from_eigenvalues(const std::vector<double>& lambda) {
    if (lambda.empty()) throw DimensionMismatch("from_eigenvalues: empty eigenvalue list");
    for (double v : lambda) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw NonPositiveWeight("from_eigenvalues: eigenvalues must be strictly positive");
        }
    }
    return GenChiSq{lambda, std::vector<int>(lambda.size(), 1)};
}

namespace {

constexpr double kTailTarget = 1e-10;     // truncation bound we aim for
constexpr double kTailFailure = 1e-7;     // beyond this the result is rejected
constexpr std::size_t kMaxSeriesTerms = 60000;

bool effectively_equal_weights(const GenChiSq& g) {
    double lo = g.weights[0], hi = g.weights[0];
    for (double w : g.weights) {
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    return (hi - lo) <= 1e-12 * hi;
}

double mean_weight(const GenChiSq& g) {
    double s = 0.0;
    for (double w : g.weights) s += w;
    return s / static_cast<double>(g.weights.size());
}

// CDF of sum_i w_i chi2_{h_i} as a mixture sum_j a_j F_{chi2_{K+2j}}(x/beta)
// with beta = min w_i. Coefficients a_j are nonnegative and sum to 1, so the
// truncation remainder is sandwiched in [0, (1 - sum a_j) * F_latest].
class MixtureSeries {
public:
    explicit MixtureSeries(const GenChiSq& g) {
        beta_ = *std::min_element(g.weights.begin(), g.weights.end());
        for (std::size_t i = 0; i < g.weights.size(); ++i) {
            double q = 1.0 - beta_ / g.weights[i];
            if (q > 0.0) {
                q_.push_back(q);
                h_.push_back(static_cast<double>(g.dofs[i]));
            }
        }
        qpow_.assign(q_.size(), 1.0);
        double a0 = 1.0;
        for (std::size_t i = 0; i < g.weights.size(); ++i) {
            a0 *= std::pow(beta_ / g.weights[i], 0.5 * g.dofs[i]);
        }
        a_.push_back(a0);
        a_sum_ = a0;
        half_k_ = 0.5 * g.total_dof();
    }

    // Lower CDF estimate and a one-sided bound on the neglected remainder.
    struct Result {
        double cdf;
        double bound;
    };

    Result cdf(double x) {
        double y = 0.5 * x / beta_;  // argument of the regularized gamma
        // First mixture component: F_{chi2_K}(x/beta) = P(K/2, y).
        double p = reg_gamma_lower(half_k_, y);
        // Term for stepping the shape by one: y^a e^{-y} / Gamma(a+1). Kept in
        // log form: for small beta_ the term starts below DBL_MIN but climbs
        // back into range as the shape approaches y, and a plain double would
        // stick at zero and never step p down.
        double ly = std::log(y);
        double lt = half_k_ * ly - y - std::lgamma(half_k_ + 1.0);
        double cdf = a_[0] * p;
        double used = a_[0];
        double bound = (1.0 - used) * p;
        std::size_t j = 1;
        while (bound > kTailTarget && j < kMaxSeriesTerms) {
            if (j >= a_.size()) extend(std::min(kMaxSeriesTerms, a_.size() * 2 + 16));
            p -= std::exp(lt);
            if (p < 0.0) p = 0.0;
            lt += ly - std::log(half_k_ + static_cast<double>(j));
            cdf += a_[j] * p;
            used += a_[j];
            bound = (1.0 - used) * p;
            ++j;
        }
        if (bound > kTailFailure) {
            std::ostringstream os;
            os << "generalized chi-square series truncated at " << j
               << " terms with remainder bound " << bound;
            throw QuadratureFailure(os.str());
        }
        // Remainder lies in [0, bound]; report the midpoint.
        return Result{cdf + 0.5 * bound, 0.5 * bound};
    }

private:
    void extend(std::size_t upto) {
        while (g_.size() < upto) {
            // g_r = sum_i h_i q_i^r via running powers.
            double gr = 0.0;
            for (std::size_t i = 0; i < q_.size(); ++i) {
                qpow_[i] *= q_[i];
                gr += h_[i] * qpow_[i];
            }
            g_.push_back(gr);
        }
        while (a_.size() < upto) {
            std::size_t n = a_.size();
            double s = 0.0;
            for (std::size_t r = 1; r <= n; ++r) {
                s += g_[r - 1] * a_[n - r];
            }
            double an = s / (2.0 * static_cast<double>(n));
            a_.push_back(an);
            a_sum_ += an;
        }
    }

    double beta_;
    double half_k_;
    std::vector<double> q_;
    std::vector<double> h_;
    std::vector<double> qpow_;
    std::vector<double> g_;
    std::vector<double> a_;
    double a_sum_;
};

}  // namespace

double tail(const GenChiSq& g, double c) {
    if (g.weights.empty()) throw DimensionMismatch("tail: empty GenChiSq");
    if (!(c >= 0.0)) {
        if (std::isnan(c)) throw DomainError("tail: c is NaN");
        return 1.0;
    }
    if (c == 0.0) return 1.0;
    if (effectively_equal_weights(g)) {
        return chi_square_tail(static_cast<double>(g.total_dof()), c / mean_weight(g));
    }
    MixtureSeries series(g);
    auto r = series.cdf(c);
    double t = 1.0 - r.cdf;
    return std::min(1.0, std::max(0.0, t));
}

namespace {

double solve_inverse(const GenChiSq& g, double eps, const std::function<double(double)>& tailf);

}  // namespace

double inverse_tail(const GenChiSq& g, double eps) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
        throw DomainError("inverse_tail: eps must lie in (0,1)");
    }
    if (effectively_equal_weights(g)) {
        double w = mean_weight(g);
        double k = static_cast<double>(g.total_dof());
        return solve_inverse(g, eps, [&](double c) { return chi_square_tail(k, c / w); });
    }
    // Shared coefficient cache across all bracketing iterations.
    auto series = std::make_shared<MixtureSeries>(g);
    return solve_inverse(g, eps, [series](double c) {
        if (c <= 0.0) return 1.0;
        auto r = series->cdf(c);
        return std::min(1.0, std::max(0.0, 1.0 - r.cdf));
    });
}

namespace {

double solve_inverse(const GenChiSq& g, double eps, const std::function<double(double)>& tailf) {
    double k = static_cast<double>(g.total_dof());
    double wmax = *std::max_element(g.weights.begin(), g.weights.end());
    double lo = 0.0, flo = 1.0;
    double hi = wmax * (k + 40.0 * std::sqrt(2.0 * k));
    double fhi = tailf(hi);
    int doublings = 0;
    while (fhi > eps) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        fhi = tailf(hi);
        if (++doublings > 200) {
            std::ostringstream os;
            os << "inverse_tail: no bracket after 200 doublings, tail(" << hi << ") = " << fhi;
            throw ConvergenceFailure(os.str());
        }
    }
    const double ftol = 1e-9;
    if (1.0 - eps <= ftol) return 0.0;  // tail(0) = 1 within tolerance
    for (int iter = 0; iter < 300; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (flo > fhi) {
            double sec = lo + (flo - eps) * (hi - lo) / (flo - fhi);
            double margin = 0.01 * (hi - lo);
            if (sec > lo + margin && sec < hi - margin) mid = sec;
        }
        double f = tailf(mid);
        if (std::fabs(f - eps) <= ftol) return mid;
        if (f > eps) {
            lo = mid;
            flo = f;
        } else {
            hi = mid;
            fhi = f;
        }
        if (hi - lo < 1e-15 * (1.0 + hi)) break;
    }
    std::ostringstream os;
    os << "inverse_tail: iteration budget exhausted, bracket [" << lo << ", " << hi
       << "], tails [" << flo << ", " << fhi << "], eps " << eps;
    throw ConvergenceFailure(os.str());
}

}  // namespace

std::vector<double> sample(const GenChiSq& g, std::uint64_t seed, std::int64_t count) {
    if (count < 1) throw DomainError("sample: count must be >= 1");
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& v : out) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.weights.size(); ++i) {
            double chi = 0.0;
            for (int d = 0; d < g.dofs[i]; ++d) {
                double z = normal(eng);
                chi += z * z;
            }
            s += g.weights[i] * chi;
        }
        v = s;
    }
    return out;
}

double standard_normal_inverse_tail(double eps) {
    return normal_inverse_tail(eps);
}

}  // namespace divtest
