#ifndef FRACPORT_ORACLE_HPP
#define FRACPORT_ORACLE_HPP

#include <span>
#include <vector>

#include "fracport/prox.hpp"

namespace fracport {

// Brute-force verification oracles. Deliberately independent of the closed
// forms they check: they minimize the objectives directly by grid search
// plus golden-section refinement. Linked by the test suites and the CLI
// selftest, never by the solvers.

/// f_lambda(beta) = (beta - gamma)^2 + lam * rho_a(beta)
double prox_objective(const ProxParams& params, double gamma, double beta);

/// Global minimizer of f_lambda over [-( |gamma| + halfwidth ), |gamma| + halfwidth]:
/// coarse grid, then golden-section refinement around every grid-local
/// minimum (the objective can have one basin at zero and one interior).
/// Requires grid_step <= 1e-3 so no basin is straddled.
double prox_oracle(const ProxParams& params, double gamma, double grid_halfwidth,
                   double grid_step);

/// Same search restricted to beta >= 0 over [0, |v| + halfwidth];
/// the nonnegative counterpart used to validate prox_nonneg.
double prox_oracle_nonneg(const ProxParams& params, double v, double grid_halfwidth,
                          double grid_step);

/// Componentwise constrained brute force for min ||x - v||^2 + lam P_a(x),
/// x >= 0 (the objective separates across coordinates).
std::vector<double> prox_nonneg_oracle(const ProxParams& params,
                                       std::span<const double> v,
                                       double grid_step = 0.01);

} // namespace fracport

#endif
