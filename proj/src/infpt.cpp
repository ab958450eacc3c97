#include "fracport/infpt.hpp"

#include <cmath>

#include "fracport/errors.hpp"
#include "fracport/kernels.hpp"

namespace fracport {

std::vector<double> project_nonneg(std::span<const double> v) {
    std::vector<double> out(v.size());
    kernels::ops().project_nonneg(v.data(), out.data(), v.size());
    return out;
}

std::vector<double> prox_nonneg(const ProxParams& params, std::span<const double> v) {
    std::vector<double> projected = project_nonneg(v);
    std::vector<double> out(v.size());
    prox_vector_into(params, projected, out);
    return out;
}

NonnegSolveResult infpt_solve(const PortfolioProblem& p, const SolverConfig& cfg,
                              std::span<const double> x0) {
    const std::size_t n = p.assets();
    cfg.validate(n);
    if (x0.size() != n) throw DimensionError("infpt_solve: x0 length mismatch");
    for (double v : x0)
        if (v < 0.0) throw ConfigError("infpt_solve: x0 must be nonnegative");

    const bool adaptive = cfg.mode == SolverMode::TargetSparsity;
    const double phi = max_step_size(p, cfg.eta, cfg.epsilon);
    const double tol = cfg.effective_tol_x(n);
    const double lam_zero = lambda_bar(p, cfg.a, cfg.eta);
    const auto& k = kernels::ops();

    NonnegSolveResult res;
    res.x.assign(x0.begin(), x0.end());
    std::vector<double> b(n), proj(n), xn(n);
    GradientWorkspace ws;

    double lam = cfg.lam;
    res.termination = Termination::MaxIters;

    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        gradient_step(p, cfg.eta, phi, res.x, b, ws);
        k.project_nonneg(b.data(), proj.data(), n);

        double t_star;
        if (adaptive) {
            const AdaptiveLambda al =
                adaptive_lambda(proj, cfg.a, phi, cfg.target_support);
            lam = al.lam;
            t_star = al.t_star;
        } else {
            t_star = threshold(ProxParams(cfg.a, lam * phi)).t_star;
        }
        const ObjectiveParams obj_params(cfg.a, lam, cfg.eta);
        if (it == 0) res.objective_trace.push_back(objective_penalized(p, obj_params, res.x));
        res.lambda_trace.push_back(lam);

        prox_vector_into(ProxParams(cfg.a, lam * phi), t_star, proj, xn);
        for (double v : xn) {
            if (!std::isfinite(v))
                throw SolverError("infpt_solve: non-finite iterate (divergence)");
        }

        res.objective_trace.push_back(objective_penalized(p, obj_params, xn));

        double dx2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = xn[i] - res.x[i];
            dx2 += d * d;
        }
        res.x.swap(xn);
        res.iterations = it + 1;
        res.last_step_norm = std::sqrt(dx2);

        if (lam >= lam_zero && k.abs_max(res.x.data(), n) == 0.0) {
            res.termination = Termination::ZeroSolution;
            break;
        }
        if (res.last_step_norm <= tol) {
            res.termination = Termination::Converged;
            break;
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        if (res.x[i] != 0.0) res.support.push_back(i);

    double viol = 0.0;
    for (std::size_t r = 0; r < 2; ++r) {
        const double d =
            k.dot(p.constraints.row(r).data(), res.x.data(), n) - p.target[r];
        viol += d * d;
    }
    res.feasibility_violation = std::sqrt(viol);
    return res;
}

NonnegSolveResult infpt_solve(const PortfolioProblem& p, const SolverConfig& cfg) {
    std::vector<double> x0(p.assets(), 1.0 / static_cast<double>(p.assets()));
    return infpt_solve(p, cfg, x0);
}

} // namespace fracport
