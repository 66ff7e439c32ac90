#pragma once

#include <Eigen/Dense>

#include "divtest/distribution.hpp"

namespace divtest {

// (k-1)x(k-1) Fisher information matrix of the simplex coordinate chart:
// diagonal 1/P_i + 1/P_k, off-diagonal 1/P_k.
RoleMatrix fisher_matrix(const Distribution& p);

// Closed-form inverse: diagonal P_i(1-P_i), off-diagonal -P_i P_j.
RoleMatrix fisher_inverse(const Distribution& p);

double kl_divergence(const Distribution& t, const Distribution& q);
// Boundary convention 0*ln 0 = 0 for zero counts.
double kl_divergence(const TypeDistribution& t, const Distribution& q);

// Variance of the log-likelihood ratio ln(P_i/Q_i) under P.
double kl_variance(const Distribution& p, const Distribution& q);

// c_i = ln(P_i/Q_i) - ln(P_k/Q_k), i = 1..k-1.
Eigen::VectorXd tilt_vector(const Distribution& p, const Distribution& q);

// Pearson chi-square distance sum_i (T_i - P_i)^2 / P_i over all k entries.
double chi_square_distance(const Distribution& t, const Distribution& p);

}  // namespace divtest
