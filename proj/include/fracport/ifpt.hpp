#ifndef FRACPORT_IFPT_HPP
#define FRACPORT_IFPT_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fracport/problem.hpp"
#include "fracport/prox.hpp"

namespace fracport {

enum class SolverMode {
    FixedLambda,    ///< lam is held constant; Theorem-style monotone descent applies
    TargetSparsity, ///< lam recomputed each iteration so ~r entries survive
};

struct SolverConfig {
    double a = 1.0;
    double eta = 100.0;
    double epsilon = 0.01; ///< step size phi = (1-epsilon) / Lipschitz bound

    SolverMode mode = SolverMode::FixedLambda;
    double lam = 1e-3;              ///< FixedLambda only
    std::size_t target_support = 0; ///< TargetSparsity only; 1 <= r < n

    std::size_t max_iters = 50000;
    double tol_x = 0.0;     ///< stop when ||x^{k+1} - x^k|| <= tol_x; 0 = auto 1e-8 sqrt(n)
    double tol_obj = 1e-12; ///< FixedLambda only: stop on objective stall

    static SolverConfig fixed_lambda(double lam, double a = 1.0, double eta = 100.0);
    static SolverConfig target_sparsity(std::size_t r, double a = 1.0, double eta = 100.0);

    void validate(std::size_t n_assets) const; // throws ConfigError
    double effective_tol_x(std::size_t n_assets) const;
};

enum class Termination { Converged, MaxIters, ZeroSolution };

const char* to_string(Termination t);

struct SolveResult {
    std::vector<double> x;
    std::vector<double> objective_trace; ///< C_{lam,eta}(x^k), current lam in adaptive mode
    std::vector<double> lambda_trace;    ///< lam used at each iteration
    std::size_t iterations = 0;
    Termination termination = Termination::MaxIters;
    double last_step_norm = 0.0; ///< ||x^{K} - x^{K-1}||_2 of the final iteration
    std::vector<std::size_t> support; ///< indices of nonzero weights
};

/// Iterative fraction penalty thresholding:
///   x^{k+1} = G_{lam*phi, P_a}( B_phi(x^k) )
/// with phi = max_step_size(p, eta, epsilon). In TargetSparsity mode lam is
/// recomputed every iteration from the sorted magnitudes of B_phi(x^k), and
/// convergence is declared on the iterate difference alone. Throws
/// SolverError on a non-finite iterate, ConfigError on bad configuration.
SolveResult ifpt_solve(const PortfolioProblem& p, const SolverConfig& cfg,
                       std::span<const double> x0);

/// Default start: the equal-weight portfolio x0 = 1/n.
SolveResult ifpt_solve(const PortfolioProblem& p, const SolverConfig& cfg);

struct AdaptiveLambda {
    double lam;
    ThresholdRegime regime;
    /// The zero/nonzero boundary implied by lam. In the non-degenerate case
    /// this equals the sorted magnitude the formula was derived from
    /// (the (r+1)-th largest for SmallLambda, the r-th for LargeLambda), so
    /// the solver can threshold against it exactly.
    double t_star;
};

/// Regularization level that keeps about r entries above threshold:
///   lam1 = 2 |B|_(r+1) / (a phi), used if lam1 <= 1/(a^2 phi),
///   lam2 = (2 a |B|_(r) + 1)^2 / (4 a^2 phi) otherwise,
/// where |B|_(i) is the i-th largest magnitude (stable order: magnitude
/// descending, index ascending). Degenerate |B|_(r+1) = 0 is floored at
/// lam = 1e-12. Requires 1 <= r < B.size().
AdaptiveLambda adaptive_lambda(std::span<const double> b_vec, double a, double phi,
                               std::size_t r);

/// Regularization level above which the penalized problem admits the zero
/// solution.
double lambda_bar(const PortfolioProblem& p, double a, double eta);

/// First-order stationarity residuals on the support of x:
///   | sign(x_i) * [ (2/T)(R^T(beta e_T - Rx))_i + 2 eta (A^T(b - Ax))_i ]
///     - a lam / (1 + a|x_i|)^2 |
struct FirstOrderReport {
    std::vector<std::size_t> indices; ///< support indices checked
    std::vector<double> residuals;
    double max_residual = 0.0;
    double tol = 0.0;
    bool pass = true; ///< vacuously true on empty support
};

FirstOrderReport check_first_order(const PortfolioProblem& p,
                                   const ObjectiveParams& params,
                                   std::span<const double> x, double tol);

/// Magnitude bound checks on a solver output: the per-coordinate lower
/// bound sqrt(lam)/s_i - 1/a (applied only where a > s_i / sqrt(lam), with
/// s_i = (1/T)||R_i||^2 + eta ||A_i||^2 over columns), and the sup-norm
/// upper bound, applicable only when lam exceeds the zero-portfolio
/// objective value.
struct BoundsReport {
    struct LowerEntry {
        std::size_t index;
        bool applicable;
        double magnitude;
        double bound;
        bool satisfied; ///< true when not applicable
    };
    std::vector<LowerEntry> lower;
    bool lower_pass = true;

    bool upper_applicable = false;
    double upper_bound = 0.0;
    double x_inf_norm = 0.0;
    bool upper_pass = true; ///< true when not applicable

    bool pass() const { return lower_pass && upper_pass; }
};

BoundsReport check_bounds(const PortfolioProblem& p, const ObjectiveParams& params,
                          std::span<const double> x);

struct EtaSweepPoint {
    double eta;
    std::vector<double> x;
    double constraint_violation; ///< ||Ax - b||_2 at termination
    Termination termination;
};

/// Solve at each eta in increasing order, warm-starting from the previous
/// solution; reports the constraint violation per eta. The step size is
/// recomputed for each eta.
std::vector<EtaSweepPoint> eta_sweep(const PortfolioProblem& p, SolverConfig cfg,
                                     std::span<const double> etas);

} // namespace fracport

#endif
