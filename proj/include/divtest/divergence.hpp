#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "divtest/distribution.hpp"

namespace divtest {

// A discrepancy D(T||R) that is smooth on the interior, nonnegative, zero
// only at T=R, and locally quadratic with positive-definite curvature. The
// concrete families below all satisfy this; a user-supplied f generator is
// spot-checked by the property tests rather than proven.
class Divergence {
public:
    enum class Kind { KL, Chi2, FGeneric, Renyi, Alpha, MahalanobisDefault, MahalanobisFixed };

    static Divergence kl();
    static Divergence chi_squared();
    // order > 0 and != 1
    static Divergence renyi(double order);
    // order != +1 and != -1; realized as the f-divergence with
    // f(u) = 4/(1-order^2) * (u - u^((1-order)/2))
    static Divergence alpha_family(double order);
    // curvature = f''(1); pass NaN to force finite differences for the
    // Hessian. boundary_f0 = limit of f at 0+ when finite (enables boundary
    // types); leave empty for interior-only generators.
    static Divergence f_divergence(std::function<double(double)> f, double curvature,
                                   std::string label,
                                   std::optional<double> boundary_f0 = std::nullopt);
    // Quadratic form with the reference-dependent weight matrix
    // mahalanobis_weight_default(R).
    static Divergence mahalanobis_default();
    // Quadratic form with a fixed symmetric positive-definite weight.
    static Divergence mahalanobis(Eigen::MatrixXd weight);
    // Bregman divergence of the generator x^T W x; identical to a fixed-weight
    // squared Mahalanobis distance, kept as a named constructor.
    static Divergence bregman_quadratic(Eigen::MatrixXd weight);

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    double order() const { return order_; }
    double f_curvature() const { return curvature_; }
    bool supports_boundary() const;
    bool has_analytic_hessian() const;
    const std::optional<Eigen::MatrixXd>& fixed_weight() const { return weight_; }

    double operator()(const Distribution& t, const Distribution& r) const;
    // Boundary-aware evaluation; BoundaryEvaluation if the family cannot
    // handle zero counts.
    double operator()(const TypeDistribution& t, const Distribution& r) const;

private:
    Divergence() = default;

    double eval_frequencies(const double* t, const Distribution& r, bool boundary) const;

    Kind kind_ = Kind::KL;
    double order_ = 0.0;
    double curvature_ = 0.0;  // f''(1) for f-generator families
    std::function<double(double)> f_;
    std::optional<double> f0_;
    std::optional<Eigen::MatrixXd> weight_;
    std::string label_;
};

double evaluate(const Divergence& d, const Distribution& t, const Distribution& r);
double evaluate(const Divergence& d, const TypeDistribution& t, const Distribution& r);

// A_{D,P}: half the second-derivative matrix of T -> D(T||P) at T=P in the
// (k-1)-coordinate chart. Analytic when the family provides a rule, finite
// differences otherwise; always checked symmetric positive definite.
RoleMatrix hessian_matrix(const Divergence& d, const Distribution& p);

// Central second differences with the given step, scaled by 1/2 and
// symmetrized. Probes must stay interior: requires step < min_i P_i / 4.
RoleMatrix numeric_hessian(const Divergence& d, const Distribution& p, double step);

struct InvarianceReport {
    bool invariant;
    double eta;                     // least-squares multiple of the Fisher matrix
    double max_relative_deviation;  // ||A - eta*Sigma||_max / ||A||_max
};

InvarianceReport classify_invariance(const Divergence& d, const Distribution& p, double tol);

// Weight matrix with diagonal 1/(2 P_i^2) + 1/(2 P_k^2) and off-diagonal
// 1/(2 P_k^2); the stock non-invariant example.
RoleMatrix mahalanobis_weight_default(const Distribution& p);

struct TaylorExpansion {
    double approximation;
    double residual;
};

// Quadratic expansion of T -> KL(T||Q) around P: value, linear term in the
// log-likelihood ratios, and half the chi-square distance; the residual is
// the exact value minus the approximation and shrinks cubically in ||T-P||.
TaylorExpansion taylor_kl_expansion(const Distribution& t, const Distribution& p,
                                    const Distribution& q);

}  // namespace divtest
