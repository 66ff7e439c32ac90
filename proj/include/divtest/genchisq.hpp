#pragma once

#include <cstdint>
#include <vector>

namespace divtest {

// Distribution of xi = sum_i w_i * Y_i with Y_i independent chi-square of
// dofs[i] degrees of freedom and weights w_i > 0.
struct GenChiSq {
    std::vector<double> weights;
    std::vector<int> dofs;

    int total_dof() const;
};

GenChiSq make_genchisq(std::vector<double> weights, std::vector<int> dofs);

// Unit-dof instance from a positive eigenvalue list.
GenChiSq from_eigenvalues(const std::vector<double>& lambda);

// Pr(xi >= c). Equal weights route to a scaled chi-square closed form;
// unequal weights use a chi-square mixture series whose truncation error is
// bounded on both sides. Absolute error target 1e-9; QuadratureFailure is
// raised if the internal bound cannot be pushed below 1e-7.
double tail(const GenChiSq& g, double c);

// Unique c >= 0 with tail(g, c) = eps, found by bracketing plus a safeguarded
// secant/bisection iteration; stops when |tail(c) - eps| <= 1e-9.
double inverse_tail(const GenChiSq& g, double eps);

// Deterministic-per-seed draws via sums of squared standard normals.
std::vector<double> sample(const GenChiSq& g, std::uint64_t seed, std::int64_t count);

double standard_normal_inverse_tail(double eps);

}  // namespace divtest
