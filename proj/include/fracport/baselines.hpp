#ifndef FRACPORT_BASELINES_HPP
#define FRACPORT_BASELINES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fracport/problem.hpp"

namespace fracport {

enum class BaselineMethod { MarkowitzEquality, L1Penalized, ExactCardinality };

struct BaselineResult {
    std::vector<double> x;
    double objective = 0.0;
    BaselineMethod method = BaselineMethod::MarkowitzEquality;
    std::vector<std::size_t> support;
    std::vector<double> objective_trace; ///< filled by l1_penalized only
};

/// Closed-form equality-constrained mean-variance portfolio:
///   min (1/T) ||Rx - beta e_T||^2  s.t.  Ax = b
/// via the dense KKT system with partial pivoting. The reported objective is
/// the tracking error at the solution. Throws SolverError (with a
/// conditioning diagnostic) when the KKT matrix is singular, e.g. duplicated
/// asset columns.
BaselineResult markowitz_equality(const PortfolioProblem& p);

/// l1-penalized comparator solved in the same penalized form as the fraction
/// problem, with P_a replaced by the l1 norm:
///   min (1/T) ||Rx - beta e_T||^2 + lam ||x||_1 + eta ||Ax - b||^2
/// by proximal gradient (soft thresholding at lam*phi/2). tol = 0 selects
/// the same automatic tolerance as the solvers. Default start is the
/// equal-weight portfolio.
BaselineResult l1_penalized(const PortfolioProblem& p, double lam, double eta,
                            std::size_t max_iters = 50000, double tol = 0.0);

BaselineResult l1_penalized(const PortfolioProblem& p, double lam, double eta,
                            std::size_t max_iters, double tol,
                            std::span<const double> x0);

struct CardinalityOptions {
    /// With eta set, each support S minimizes the penalized objective
    ///   (1/T) ||R_S z - beta e_T||^2 + eta ||A_S z - b||^2
    /// unconstrained in z; this is the form whose optimum lower-bounds any
    /// same-sparsity solver output. Without eta, each support solves the
    /// equality-constrained least squares (A_S z = b hard), matching the
    /// Markowitz problem when k = n; supports where the constraints are
    /// infeasible or the KKT system is singular are skipped.
    std::optional<double> eta;
    std::size_t n_cap = 15;
};

/// Exact solver of the cardinality-constrained problem by support
/// enumeration; intended as a test oracle for small n (DimensionError when
/// n > n_cap). Ties in objective break toward the lexicographically
/// smallest support.
BaselineResult exact_cardinality(const PortfolioProblem& p, std::size_t k,
                                 CardinalityOptions opts = {});

} // namespace fracport

#endif
