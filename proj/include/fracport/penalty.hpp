#ifndef FRACPORT_PENALTY_HPP
#define FRACPORT_PENALTY_HPP

#include <span>

namespace fracport {

/// Shape parameter of the fraction penalty rho_a(t) = a|t| / (a|t| + 1).
/// Small a behaves like a rescaled l1 penalty; as a grows the penalty
/// approaches the indicator of t != 0, so the vector penalty approaches
/// the l0 norm.
struct PenaltyParams {
    double a;
    explicit PenaltyParams(double a_); // throws ConfigError unless a > 0 and finite
};

/// rho_a(t) = a|t| / (a|t| + 1). Even, nondecreasing in |t|, values in [0, 1).
double rho(const PenaltyParams& params, double t);

/// P_a(x) = sum_i rho_a(x_i). Zero iff x == 0; at most x.size().
double penalty(const PenaltyParams& params, std::span<const double> x);

/// d/dt rho_a(t) = sign(t) * a / (1 + a|t|)^2 for t != 0.
/// Throws NumericError at t == 0 (rho is not differentiable there).
double rho_derivative(const PenaltyParams& params, double t);

} // namespace fracport

#endif
