#ifndef FRACPORT_PROX_HPP
#define FRACPORT_PROX_HPP

#include <span>
#include <vector>

namespace fracport {

/// Parameters of the scalar prox problem
///   min_beta (beta - gamma)^2 + lam * rho_a(beta).
/// In the solvers, lam is the composed weight lambda * phi (regularization
/// level times step size).
struct ProxParams {
    double a;
    double lam;
    ProxParams(double a_, double lam_); // throws ConfigError unless both > 0
};

/// Two analytic regimes of the threshold, split at lam = 1/a^2. The two
/// formulas agree (value 1/(2a)) at the boundary.
enum class ThresholdRegime { SmallLambda, LargeLambda };

struct ThresholdValue {
    double t_star; ///< magnitudes <= t_star map to zero
    ThresholdRegime regime;
};

/// Threshold below which the prox collapses to zero:
///   lam <= 1/a^2 : t* = lam * a / 2
///   lam >  1/a^2 : t* = max(sqrt(lam) - 1/(2a), 0)
ThresholdValue threshold(const ProxParams& params);

/// Closed-form global minimizer of (beta - gamma)^2 + lam * rho_a(beta).
/// Returns 0 when |gamma| <= t* (at |gamma| = t* the zero and nonzero
/// branches tie in objective; this follows the zero branch). Otherwise the
/// nonzero root is computed by the trigonometric cubic formula; it has the
/// sign of gamma and magnitude at most |gamma|.
double prox_scalar(const ProxParams& params, double gamma);

/// Componentwise prox_scalar. NumericError from any component is rethrown
/// with the offending index prefixed.
std::vector<double> prox_vector(const ProxParams& params, std::span<const double> x);

/// In-place variant used by the solver loops; in.size() must equal out.size().
void prox_vector_into(const ProxParams& params, std::span<const double> in,
                      std::span<double> out);

/// Same, but with the zero/nonzero boundary pinned to an explicit value
/// instead of the one recomputed from params. The adaptive-lambda solvers
/// pass the sorted magnitude that the lambda formula was derived from, so
/// the boundary comparison is exact in floating point.
void prox_vector_into(const ProxParams& params, double t_star,
                      std::span<const double> in, std::span<double> out);

} // namespace fracport

#endif
