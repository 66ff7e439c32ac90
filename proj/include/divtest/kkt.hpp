#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "divtest/distribution.hpp"

namespace divtest {

// Minimizer of the linear functional c.x over the ellipsoid x^T A x <= radius.
// The optimum sits on the boundary whenever c != 0, with closed form
//   x* = -sqrt(radius) A^{-1}c / sqrt(c^T A^{-1} c).
struct KKTCore {
    Eigen::VectorXd x_star;
    double value;       // c.dot(x_star), always <= 0
    double multiplier;  // mu0 >= 0; stationarity: c + 2 mu0 A x* = 0
    double quad_form;   // c^T A^{-1} c
};

KKTCore kkt_minimizer(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double radius);

// Same minimizer anchored at an interior distribution: the first k-1
// coordinates of p move by x*, the last absorbs -sum x*_i. Radii large enough
// that p + x* could leave the open simplex are rejected up front.
struct KKTSolution {
    Distribution gamma_star;  // p + x*, strictly positive under the radius bound
    Eigen::VectorXd x_star;   // all k displacements; last entry is -sum of the rest
    double ell_value;         // linear objective at the optimum, -sqrt(radius*quad_form)
    double radius;
    double multiplier;
    double quad_form;
    double psi;         // min_i p_i over all k coordinates
    double tau;         // worst per-sqrt(radius) coordinate depletion rate
    double max_radius;  // admissible radii are < max_radius (inf when tau == 0)
};

KKTSolution kkt_minimizer(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double radius,
                          const Distribution& p);

// Shrink factor for pulling the continuous optimum slightly inside the ball
// before rounding to a lattice type; decays like 1/n^2 at fixed radius.
double default_alpha_bar(const Eigen::MatrixXd& a, std::int64_t n, double radius);

// Rounds p + (1 - alpha_bar) x* to an n-type with all counts positive whose
// perturbation stays inside the (slightly inflated) ball. gamma_star is the
// unshrunk target p + x* and is cross-checked against x_star, which may be
// passed with k-1 entries or with the reconstructed k-th appended.
TypeDistribution nearest_feasible_type(const Distribution& gamma_star,
                                       const Eigen::VectorXd& x_star,
                                       const Eigen::MatrixXd& a, const Distribution& p,
                                       std::int64_t n, double alpha_bar);

}  // namespace divtest
