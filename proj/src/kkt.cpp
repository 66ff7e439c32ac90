#include "divtest/kkt.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "divtest/errors.hpp"

namespace divtest {

namespace {

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw DimensionMismatch(std::string(what) + ": matrix must be square");
    }
    require_symmetric(a, 1e-10, what);
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite(std::string(what) + ": matrix must be positive definite");
    }
    return llt;
}

}  // namespace

KKTCore kkt_minimizer(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double radius) {
    auto llt = checked_llt(a, "kkt_minimizer");
    if (c.size() != a.rows()) {
        throw DimensionMismatch("kkt_minimizer: gradient length does not match matrix");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw DomainError("kkt_minimizer: radius must be positive and finite");
    }
    Eigen::VectorXd b = llt.solve(c);
    double quad = c.dot(b);
    if (!(quad > 0.0)) {
        throw DomainError("kkt_minimizer: gradient is zero or numerically degenerate");
    }
    double root_r = std::sqrt(radius);
    double root_q = std::sqrt(quad);
    KKTCore out;
    out.x_star = -(root_r / root_q) * b;
    out.value = -root_r * root_q;
    out.multiplier = root_q / (2.0 * root_r);
    out.quad_form = quad;
    return out;
}

KKTSolution kkt_minimizer(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double radius,
                          const Distribution& p) {
    if (a.rows() != p.size() - 1) {
        throw DimensionMismatch(
            "kkt_minimizer: matrix must act on the first k-1 coordinates");
    }
    auto llt = checked_llt(a, "kkt_minimizer");
    if (c.size() != a.rows()) {
        throw DimensionMismatch("kkt_minimizer: gradient length does not match matrix");
    }
    Eigen::VectorXd b = llt.solve(c);
    double quad = c.dot(b);
    if (!(quad > 0.0)) {
        throw DomainError("kkt_minimizer: gradient is zero or numerically degenerate");
    }
    double psi = p.min_entry();
    // x* scales b by -sqrt(radius/quad); coordinate i<k loses sqrt(radius)/sqrt(quad) * b_i
    // when b_i > 0, the last coordinate loses the same multiple of (-sum b).
    double tau1 = std::max(0.0, -b.sum());
    double tau2 = 0.0;
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        if (b[i] > tau2) tau2 = b[i];
    }
    double tau = std::max(tau1, tau2);
    double max_radius = std::numeric_limits<double>::infinity();
    if (tau > 0.0) {
        double lim = psi / tau * std::sqrt(quad);
        max_radius = lim * lim;
    }
    if (!(radius < max_radius)) {
        throw RadiusTooLarge("kkt_minimizer: radius " + std::to_string(radius) +
                             " reaches the simplex boundary (needs < " +
                             std::to_string(max_radius) + ")");
    }
    KKTCore core = kkt_minimizer(a, c, radius);
    int k = p.size();
    Eigen::VectorXd x_full(k);
    x_full.head(k - 1) = core.x_star;
    x_full[k - 1] = -core.x_star.sum();
    std::vector<double> gamma(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) gamma[static_cast<std::size_t>(i)] = p[i] + x_full[i];
    KKTSolution out{make_distribution(gamma), std::move(x_full), core.value,   radius,
                    core.multiplier,          core.quad_form,    psi,          tau,
                    max_radius};
    return out;
}

double default_alpha_bar(const Eigen::MatrixXd& a, std::int64_t n, double radius) {
    if (n < 1) throw DomainError("default_alpha_bar: n must be >= 1");
    if (!(radius > 0.0)) throw DomainError("default_alpha_bar: radius must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
    double lam_max = es.eigenvalues().maxCoeff();
    double dn = static_cast<double>(n);
    double k_minus_1 = static_cast<double>(a.rows());
    double ab = 2.0 * lam_max * k_minus_1 / (dn * dn * radius);
    return std::min(ab, 0.5);
}

TypeDistribution nearest_feasible_type(const Distribution& gamma_star,
                                       const Eigen::VectorXd& x_star,
                                       const Eigen::MatrixXd& a, const Distribution& p,
                                       std::int64_t n, double alpha_bar) {
    int k = p.size();
    if (gamma_star.size() != k || a.rows() != k - 1 ||
        (x_star.size() != k - 1 && x_star.size() != k)) {
        throw DimensionMismatch("nearest_feasible_type: inconsistent dimensions");
    }
    Eigen::VectorXd x = x_star.head(k - 1);
    if (!(alpha_bar >= 0.0) || !(alpha_bar < 1.0)) {
        throw DomainError("nearest_feasible_type: alpha_bar must lie in [0,1)");
    }
    double drift = 0.0;
    for (int i = 0; i < k - 1; ++i) {
        drift = std::max(drift, std::fabs(gamma_star[i] - (p[i] + x[i])));
    }
    if (drift > 1e-9) {
        throw DomainError("nearest_feasible_type: gamma_star does not equal p + x_star");
    }
    Eigen::VectorXd ax = a * x;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    std::int64_t used = 0;
    for (int i = 0; i < k - 1; ++i) {
        double target = static_cast<double>(n) * (p[i] + (1.0 - alpha_bar) * x[i]);
        // Round against the gradient of the quadratic form so the snapped type
        // moves inward, not outward.
        double snapped = (ax[i] > 0.0) ? std::floor(target) : std::ceil(target);
        counts[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(snapped);
        used += counts[static_cast<std::size_t>(i)];
    }
    counts[static_cast<std::size_t>(k - 1)] = n - used;
    for (int i = 0; i < k; ++i) {
        if (counts[static_cast<std::size_t>(i)] < 1) {
            throw InfeasibleRounding("nearest_feasible_type: coordinate " +
                                     std::to_string(i) + " rounded to a non-positive count");
        }
    }
    Eigen::VectorXd v(k - 1);
    for (int i = 0; i < k - 1; ++i) {
        v[i] = static_cast<double>(counts[static_cast<std::size_t>(i)]) /
                   static_cast<double>(n) -
               p[i];
    }
    double ball = x.dot(a * x);
    double reached = v.dot(a * v);
    if (reached > ball * (1.0 + 1e-12)) {
        throw InfeasibleRounding(
            "nearest_feasible_type: snapped type left the constraint set (" +
            std::to_string(reached) + " > " + std::to_string(ball) + ")");
    }
    return TypeDistribution(counts);
}

}  // namespace divtest
