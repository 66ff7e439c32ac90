#include "divtest/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "divtest/genchisq.hpp"
#include "divtest/information.hpp"
#include "divtest/special.hpp"

namespace divtest {

const char* test_kind_name(TestKind k) {
    switch (k) {
        case TestKind::NeymanPearson: return "neyman_pearson";
        case TestKind::Hoeffding: return "hoeffding";
        case TestKind::DivergenceTest: return "divergence";
    }
    return "unknown";
}

namespace {

Eigen::VectorXd checked_tilt(const Distribution& p, const Distribution& q,
                             double min_tilt_norm) {
    Eigen::VectorXd c = tilt_vector(p, q);
    if (c.norm() < min_tilt_norm) {
        std::ostringstream os;
        os << "hypotheses are numerically identical (||c|| = " << c.norm() << " < "
           << min_tilt_norm << ")";
        throw DegenerateHypotheses(os.str());
    }
    return c;
}

void check_eps(double eps) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
        throw DomainError("eps must lie strictly inside (0,1)");
    }
}

}  // namespace

std::vector<double> limit_eigenvalues(const Eigen::MatrixXd& a, const Distribution& p) {
    Eigen::MatrixXd sigma = fisher_matrix(p).value;
    if (a.rows() != sigma.rows() || a.cols() != sigma.cols()) {
        throw DimensionMismatch("limit_eigenvalues: matrix size does not match alphabet");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    if (es.info() != Eigen::Success) {
        throw ConvergenceFailure("limit_eigenvalues: Fisher eigendecomposition failed");
    }
    Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd root = es.eigenvectors() * inv_sqrt.asDiagonal() *
                           es.eigenvectors().transpose();
    Eigen::MatrixXd b = root * a * root;
    double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    double asym = (b - b.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) {
        std::ostringstream os;
        os << "limit_eigenvalues: similarity asymmetry " << asym << " exceeds tolerance";
        throw NotSymmetric(os.str());
    }
    Eigen::MatrixXd sym = 0.5 * (b + b.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(sym);
    if (es2.info() != Eigen::Success) {
        throw ConvergenceFailure("limit_eigenvalues: eigendecomposition failed");
    }
    std::vector<double> lambda(es2.eigenvalues().data(),
                               es2.eigenvalues().data() + es2.eigenvalues().size());
    for (double v : lambda) {
        if (!(v > 0.0)) {
            throw NotPositiveDefinite("limit_eigenvalues: nonpositive eigenvalue " +
                                      std::to_string(v));
        }
    }
    return lambda;
}

SecondOrderReport second_order_np(const Distribution& p, const Distribution& q, double eps,
                                  double min_tilt_norm) {
    check_eps(eps);
    Eigen::VectorXd c = checked_tilt(p, q, min_tilt_norm);
    double v = kl_variance(p, q);
    SecondOrderReport r;
    r.kind = TestKind::NeymanPearson;
    r.beta_first = kl_divergence(p, q);
    r.beta_second = -std::sqrt(v) * normal_inverse_tail(eps);
    r.eps = eps;
    r.lambda = {};
    r.tilt = std::move(c);
    r.quad_form = v;
    r.kl_variance = v;
    return r;
}

SecondOrderReport second_order_divergence(const Divergence& d, const Distribution& p,
                                          const Distribution& q, double eps,
                                          double min_tilt_norm) {
    check_eps(eps);
    Eigen::VectorXd c = checked_tilt(p, q, min_tilt_norm);
    Eigen::MatrixXd a = hessian_matrix(d, p).value;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("second_order_divergence: Hessian is not PD");
    }
    double quad = c.dot(llt.solve(c));
    std::vector<double> lambda = limit_eigenvalues(a, p);
    double quantile = inverse_tail(from_eigenvalues(lambda), eps);
    SecondOrderReport r;
    r.kind = TestKind::DivergenceTest;
    r.divergence = d.label();
    r.beta_first = kl_divergence(p, q);
    r.beta_second = -std::sqrt(quad) * std::sqrt(quantile);
    r.eps = eps;
    r.hessian = std::move(a);
    r.lambda = std::move(lambda);
    r.tilt = std::move(c);
    r.quad_form = quad;
    r.kl_variance = kl_variance(p, q);
    return r;
}

SecondOrderReport second_order_hoeffding(const Distribution& p, const Distribution& q,
                                         double eps, double min_tilt_norm) {
    check_eps(eps);
    Eigen::VectorXd c = checked_tilt(p, q, min_tilt_norm);
    double v = kl_variance(p, q);
    int dof = p.size() - 1;
    double quantile = inverse_tail(from_eigenvalues(std::vector<double>(dof, 1.0)), eps);
    SecondOrderReport r;
    r.kind = TestKind::Hoeffding;
    r.divergence = "kl";
    r.beta_first = kl_divergence(p, q);
    r.beta_second = -std::sqrt(v * quantile);
    r.eps = eps;
    r.hessian = 0.5 * fisher_matrix(p).value;
    r.lambda = std::vector<double>(dof, 0.5);
    r.tilt = std::move(c);
    r.quad_form = 2.0 * v;
    r.kl_variance = v;
    return r;
}

double ratio_rho(const Divergence& d, const Distribution& p, const Distribution& q,
                 double eps, double min_tilt_norm) {
    SecondOrderReport div = second_order_divergence(d, p, q, eps, min_tilt_norm);
    SecondOrderReport hoeff = second_order_hoeffding(p, q, eps, min_tilt_norm);
    return std::fabs(div.beta_second) / std::fabs(hoeff.beta_second);
}

double approx_exponent(const SecondOrderReport& report, std::int64_t n) {
    if (n < 1) throw DomainError("approx_exponent: n must be >= 1");
    return report.beta_first + report.beta_second / std::sqrt(static_cast<double>(n));
}

}  // namespace divtest
