#ifndef FRACPORT_PROBLEM_HPP
#define FRACPORT_PROBLEM_HPP

#include <array>
#include <span>
#include <vector>

#include "fracport/linalg.hpp"

namespace fracport {

/// Assembled data of the penalized portfolio selection problem:
/// returns matrix R (T x n, row t = returns of all assets in month t),
/// mean returns mu, per-period target return beta, and the equality
/// constraint system A x = b with A = (mu, 1_n)^T and b = (beta, 1)^T.
/// Immutable after construction; safe to share across threads.
struct PortfolioProblem {
    Matrix returns;              // R, T x n
    std::vector<double> mu;      // column means of R
    double beta = 0.0;
    Matrix constraints;          // A, 2 x n
    std::array<double, 2> target{}; // b

    std::size_t periods() const { return returns.rows; } // T
    std::size_t assets() const { return returns.cols; }  // n
};

struct ObjectiveParams {
    double a;
    double lam;
    double eta;
    ObjectiveParams(double a_, double lam_, double eta_); // all must be > 0
};

/// Build the problem from a T x n returns matrix: mu = column means,
/// A = (mu, 1)^T, b = (beta, 1). Requires T >= 2, n >= 2 and all entries
/// finite (DataError / DimensionError otherwise).
PortfolioProblem build_problem(const Matrix& returns, double beta);

/// Assemble from explicit parts without enforcing the A/b layout.
/// Exists for tests that need degenerate constraint systems (e.g. b = 0).
PortfolioProblem problem_from_parts(Matrix returns, std::vector<double> mu,
                                    double beta, Matrix constraints,
                                    std::array<double, 2> target);

/// C_{lam,eta}(x) = (1/T) ||Rx - beta e_T||^2 + lam P_a(x) + eta ||Ax - b||^2
double objective_penalized(const PortfolioProblem& p, const ObjectiveParams& params,
                           std::span<const double> x);

/// C_lam(x) = (1/T) ||Rx - beta e_T||^2 + lam P_a(x); feasibility (Ax = b)
/// is the caller's concern.
double objective_constrained(const PortfolioProblem& p, double a, double lam,
                             std::span<const double> x);

/// Surrogate C_{lam,eta,phi}(x, z) =
///   phi [ C_{lam,eta}(x) - (1/T)||Rx - Rz||^2 - eta ||Ax - Az||^2 ] + ||x - z||^2.
/// Equals phi * C_{lam,eta}(x) at x = z.
double objective_surrogate(const PortfolioProblem& p, const ObjectiveParams& params,
                           double phi, std::span<const double> x,
                           std::span<const double> z);

/// Scratch buffers reused across gradient_step calls within one solve.
struct GradientWorkspace {
    std::vector<double> residual_t; // length T
    std::vector<double> accum_n;    // length n
};

/// B_phi(z) = z + (phi/T) R^T (beta e_T - R z) + phi eta A^T (b - A z).
/// A gradient step of size phi/2 on the smooth part of the objective.
void gradient_step(const PortfolioProblem& p, double eta, double phi,
                   std::span<const double> z, std::span<double> out,
                   GradientWorkspace& ws);

std::vector<double> gradient_step(const PortfolioProblem& p, double eta, double phi,
                                  std::span<const double> z);

/// Largest admissible step size scaled back by epsilon:
///   (1 - epsilon) / ((1/T) ||R||_2^2 + eta ||A||_2^2)
/// with spectral norms from power iteration. Requires 0 < epsilon < 1.
double max_step_size(const PortfolioProblem& p, double eta, double epsilon);

} // namespace fracport

#endif
