#include "divtest/distribution.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace divtest {

Distribution::Distribution(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.size() < 2) {
        throw DimensionMismatch("Distribution needs an alphabet of size >= 2, got " +
                                std::to_string(p_.size()));
    }
    for (std::size_t i = 0; i < p_.size(); ++i) {
        if (!(p_[i] > 0.0) || !std::isfinite(p_[i])) {
            std::ostringstream os;
            os << "Distribution entry " << i << " = " << p_[i] << " is not strictly positive";
            throw NonPositiveEntry(os.str());
        }
    }
    double sum = std::accumulate(p_.begin(), p_.end(), 0.0);
    double dev = std::fabs(sum - 1.0);
    if (dev > kSumSlack) {
        std::ostringstream os;
        os << "Distribution entries sum to " << sum << ", off by " << dev
           << " (allowed " << kSumSlack << ")";
        throw NotNormalized(os.str());
    }
    if (dev > kSumTolerance) {
        for (double& v : p_) v /= sum;
    }
}

Eigen::VectorXd Distribution::coords() const {
    Eigen::VectorXd x(size() - 1);
    for (int i = 0; i + 1 < size(); ++i) x[i] = p_[static_cast<std::size_t>(i)];
    return x;
}

double Distribution::min_entry() const {
    double m = p_[0];
    for (double v : p_) m = std::min(m, v);
    return m;
}

Distribution make_distribution(const std::vector<double>& values) {
    return Distribution(values);
}

TypeDistribution::TypeDistribution(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)) {
    if (counts_.size() < 2) {
        throw DimensionMismatch("TypeDistribution needs an alphabet of size >= 2");
    }
    n_ = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] < 0) {
            throw NonPositiveEntry("TypeDistribution count " + std::to_string(i) +
                                   " is negative");
        }
        n_ += counts_[i];
    }
    if (n_ < 1) {
        throw NotNormalized("TypeDistribution needs a positive sample size");
    }
}

std::vector<double> TypeDistribution::frequencies() const {
    std::vector<double> f(counts_.size());
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        f[i] = static_cast<double>(counts_[i]) / static_cast<double>(n_);
    }
    return f;
}

void require_symmetric(const Eigen::MatrixXd& m, double tol, const char* what) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch(std::string(what) + ": matrix is not square");
    }
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol * scale) {
        std::ostringstream os;
        os << what << ": asymmetry " << asym << " exceeds " << tol << " (scale " << scale << ")";
        throw NotSymmetric(os.str());
    }
}

void require_positive_definite(const Eigen::MatrixXd& m, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite(std::string(what) + ": Cholesky factorization failed");
    }
}

RoleMatrix make_matrix(Eigen::MatrixXd value, MatrixRole role) {
    require_symmetric(value, 1e-10, "make_matrix");
    if (role == MatrixRole::Hessian || role == MatrixRole::Weight) {
        require_positive_definite(value, "make_matrix");
    }
    return RoleMatrix{std::move(value), role};
}

}  // namespace divtest
