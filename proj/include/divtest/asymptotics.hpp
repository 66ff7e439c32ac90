#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "divtest/distribution.hpp"
#include "divtest/divergence.hpp"

namespace divtest {

enum class TestKind { NeymanPearson, Hoeffding, DivergenceTest };

const char* test_kind_name(TestKind k);

// First- and second-order terms of -ln(type-II error) together with the
// intermediates that produced them. beta_first is the KL divergence for every
// test kind; beta_second is negative whenever eps < 1/2.
struct SecondOrderReport {
    TestKind kind;
    std::string divergence;  // family label; empty for the Neyman-Pearson test
    double beta_first;
    double beta_second;
    double eps;
    Eigen::MatrixXd hessian;     // A at P (0x0 for Neyman-Pearson)
    std::vector<double> lambda;  // eigenvalues of Sigma^{-1/2} A Sigma^{-1/2}
    Eigen::VectorXd tilt;
    double quad_form;  // c^T A^{-1} c (for NP: c^T Sigma^{-1} c = kl_variance)
    double kl_variance;
};

inline constexpr double kDefaultMinTiltNorm = 1e-12;

// Eigenvalues of Sigma_P^{-1/2} A Sigma_P^{-1/2} via the symmetric square
// root of the Fisher matrix. Asymmetry of the similarity beyond 1e-10
// (relative) or a nonpositive eigenvalue is an error.
std::vector<double> limit_eigenvalues(const Eigen::MatrixXd& a, const Distribution& p);

SecondOrderReport second_order_np(const Distribution& p, const Distribution& q, double eps,
                                  double min_tilt_norm = kDefaultMinTiltNorm);

SecondOrderReport second_order_divergence(const Divergence& d, const Distribution& p,
                                          const Distribution& q, double eps,
                                          double min_tilt_norm = kDefaultMinTiltNorm);

// Invariant shortcut -sqrt(V_KL * Q^{-1}_{chi2_{k-1}}(eps)); no Hessian work.
SecondOrderReport second_order_hoeffding(const Distribution& p, const Distribution& q,
                                         double eps,
                                         double min_tilt_norm = kDefaultMinTiltNorm);

// |beta''_D| / |beta''_Hoeffding|. Above 1 the Hoeffding test wins on the
// second-order term, below 1 the divergence test wins.
double ratio_rho(const Divergence& d, const Distribution& p, const Distribution& q,
                 double eps, double min_tilt_norm = kDefaultMinTiltNorm);

// Second-order approximation of -(1/n) ln(type-II error).
double approx_exponent(const SecondOrderReport& report, std::int64_t n);

}  // namespace divtest
