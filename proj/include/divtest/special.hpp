#pragma once

namespace divtest {

// Regularized incomplete gamma functions. P(a,x) rises 0 -> 1, Q(a,x) = 1 - P.
// Series expansion for x < a+1, Lentz continued fraction otherwise; relative
// accuracy ~1e-14 over the parameter range used here (a up to ~1e5).
double reg_gamma_lower(double a, double x);
double reg_gamma_upper(double a, double x);

// Chi-square with (possibly fractional) dof. tail = Pr(X >= x).
double chi_square_tail(double dof, double x);
double chi_square_cdf(double dof, double x);

// Standard normal tail Q_N(x) = Pr(N(0,1) >= x) and its inverse.
double normal_tail(double x);
// Absolute error <= 1e-10 guaranteed by the contract; implementation refines a
// rational first guess with Newton steps on erfc, landing near machine
// precision for eps in (1e-300, 1-1e-16).
double normal_inverse_tail(double eps);

}  // namespace divtest
