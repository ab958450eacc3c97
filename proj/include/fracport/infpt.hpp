#ifndef FRACPORT_INFPT_HPP
#define FRACPORT_INFPT_HPP

#include <span>
#include <vector>

#include "fracport/ifpt.hpp"

namespace fracport {

/// Componentwise max(0, v): Euclidean projection onto the nonnegative orthant.
std::vector<double> project_nonneg(std::span<const double> v);

/// Minimizer of ||x - v||^2 + lam P_a(x) subject to x >= 0, computed as the
/// unconstrained prox applied to the projected point.
std::vector<double> prox_nonneg(const ProxParams& params, std::span<const double> v);

struct NonnegSolveResult : SolveResult {
    double feasibility_violation = 0.0; ///< ||Ax - b||_2 at termination
};

/// Iterative nonnegative fraction penalty thresholding:
///   x^{k+1} = G_{lam*phi, P_a}( P_+( B_phi(x^k) ) )
/// Every iterate is exactly nonnegative. In TargetSparsity mode lam follows
/// the adaptive rule applied to the sorted entries of the projected gradient
/// step. x0 must be nonnegative (ConfigError otherwise). Unlike IFPT, no
/// monotone-descent guarantee is claimed for this iteration; the objective
/// trace is recorded for inspection only.
NonnegSolveResult infpt_solve(const PortfolioProblem& p, const SolverConfig& cfg,
                              std::span<const double> x0);

/// Equal-weight start (nonnegative and budget-feasible).
NonnegSolveResult infpt_solve(const PortfolioProblem& p, const SolverConfig& cfg);

} // namespace fracport

#endif
