#include "fracport/problem.hpp"

#include <cmath>
#include <sstream>

#include "fracport/errors.hpp"
#include "fracport/kernels.hpp"

namespace fracport {

ObjectiveParams::ObjectiveParams(double a_, double lam_, double eta_)
    : a(a_), lam(lam_), eta(eta_) {
    if (!(a > 0.0) || !(lam > 0.0) || !(eta > 0.0))
        throw ConfigError("objective parameters a, lam, eta must all be positive");
}

PortfolioProblem build_problem(const Matrix& returns, double beta) {
    if (returns.rows < 2 || returns.cols < 2)
        throw DimensionError("build_problem: need T >= 2 and n >= 2");
    if (!returns.all_finite())
        throw DataError("build_problem: returns contain non-finite entries");

    const std::size_t t = returns.rows, n = returns.cols;
    std::vector<double> mu(n, 0.0);
    for (std::size_t r = 0; r < t; ++r)
        for (std::size_t c = 0; c < n; ++c) mu[c] += returns(r, c);
    for (double& m : mu) m /= static_cast<double>(t);

    Matrix a(2, n);
    for (std::size_t c = 0; c < n; ++c) {
        a(0, c) = mu[c];
        a(1, c) = 1.0;
    }
    return {returns, std::move(mu), beta, std::move(a), {beta, 1.0}};
}

PortfolioProblem problem_from_parts(Matrix returns, std::vector<double> mu,
                                    double beta, Matrix constraints,
                                    std::array<double, 2> target) {
    if (mu.size() != returns.cols || constraints.cols != returns.cols ||
        constraints.rows != 2)
        throw DimensionError("problem_from_parts: inconsistent dimensions");
    return {std::move(returns), std::move(mu), beta, std::move(constraints), target};
}

namespace {

void check_x(const PortfolioProblem& p, std::span<const double> x) {
    if (x.size() != p.assets()) {
        std::ostringstream msg;
        msg << "weight vector has length " << x.size() << ", expected " << p.assets();
        throw DimensionError(msg.str());
    }
}

/// (1/T) ||Rx - beta e_T||^2 + eta ||Ax - b||^2
double smooth_part(const PortfolioProblem& p, double eta, std::span<const double> x) {
    const auto& k = kernels::ops();
    const std::size_t t = p.periods();
    std::vector<double> rx(t);
    k.matvec(p.returns.data.data(), t, p.assets(), x.data(), rx.data());
    double track = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        const double d = rx[i] - p.beta;
        track += d * d;
    }
    double cons = 0.0;
    for (std::size_t r = 0; r < 2; ++r) {
        const auto row = p.constraints.row(r);
        const double d = k.dot(row.data(), x.data(), x.size()) - p.target[r];
        cons += d * d;
    }
    return track / static_cast<double>(t) + eta * cons;
}

} // namespace

double objective_penalized(const PortfolioProblem& p, const ObjectiveParams& params,
                           std::span<const double> x) {
    check_x(p, x);
    return smooth_part(p, params.eta, x) +
           params.lam * kernels::ops().penalty_sum(params.a, x.data(), x.size());
}

double objective_constrained(const PortfolioProblem& p, double a, double lam,
                             std::span<const double> x) {
    check_x(p, x);
    const auto& k = kernels::ops();
    const std::size_t t = p.periods();
    std::vector<double> rx(t);
    k.matvec(p.returns.data.data(), t, p.assets(), x.data(), rx.data());
    double track = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        const double d = rx[i] - p.beta;
        track += d * d;
    }
    return track / static_cast<double>(t) + lam * k.penalty_sum(a, x.data(), x.size());
}

double objective_surrogate(const PortfolioProblem& p, const ObjectiveParams& params,
                           double phi, std::span<const double> x,
                           std::span<const double> z) {
    check_x(p, x);
    check_x(p, z);
    const auto& k = kernels::ops();
    const std::size_t t = p.periods(), n = p.assets();

    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = x[i] - z[i];

    std::vector<double> rdiff(t);
    k.matvec(p.returns.data.data(), t, n, diff.data(), rdiff.data());
    const double r_term = k.sum_squares(rdiff.data(), t) / static_cast<double>(t);

    double a_term = 0.0;
    for (std::size_t r = 0; r < 2; ++r) {
        const auto row = p.constraints.row(r);
        const double d = k.dot(row.data(), diff.data(), n);
        a_term += d * d;
    }

    return phi * (objective_penalized(p, params, x) - r_term - params.eta * a_term) +
           k.sum_squares(diff.data(), n);
}

void gradient_step(const PortfolioProblem& p, double eta, double phi,
                   std::span<const double> z, std::span<double> out,
                   GradientWorkspace& ws) {
    check_x(p, z);
    if (out.size() != z.size()) throw DimensionError("gradient_step: output size mismatch");
    if (!(phi > 0.0)) throw ConfigError("gradient_step: phi must be positive");

    const auto& k = kernels::ops();
    const std::size_t t = p.periods(), n = p.assets();
    ws.residual_t.resize(t);
    ws.accum_n.resize(n);

    // out = z + (phi/T) R^T (beta e_T - R z)
    k.matvec(p.returns.data.data(), t, n, z.data(), ws.residual_t.data());
    for (std::size_t i = 0; i < t; ++i) ws.residual_t[i] = p.beta - ws.residual_t[i];
    k.matvec_t(p.returns.data.data(), t, n, ws.residual_t.data(), ws.accum_n.data());
    const double ft = phi / static_cast<double>(t);
    for (std::size_t i = 0; i < n; ++i) out[i] = z[i] + ft * ws.accum_n[i];

    // out += phi eta A^T (b - A z); A has two rows
    for (std::size_t r = 0; r < 2; ++r) {
        const auto row = p.constraints.row(r);
        const double resid = p.target[r] - k.dot(row.data(), z.data(), n);
        k.axpy(phi * eta * resid, row.data(), out.data(), n);
    }
}

std::vector<double> gradient_step(const PortfolioProblem& p, double eta, double phi,
                                  std::span<const double> z) {
    std::vector<double> out(z.size());
    GradientWorkspace ws;
    gradient_step(p, eta, phi, z, out, ws);
    return out;
}

double max_step_size(const PortfolioProblem& p, double eta, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw ConfigError("max_step_size: epsilon must lie in (0, 1)");
    const double rn = spectral_norm(p.returns);
    const double an = spectral_norm(p.constraints);
    const double denom = rn * rn / static_cast<double>(p.periods()) + eta * an * an;
    return (1.0 - epsilon) / denom;
}

} // namespace fracport
