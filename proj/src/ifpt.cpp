#include "fracport/ifpt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "fracport/errors.hpp"
#include "fracport/kernels.hpp"

namespace fracport {

namespace {
constexpr double kLambdaMin = 1e-12; // floor for the degenerate adaptive case
}

SolverConfig SolverConfig::fixed_lambda(double lam_, double a_, double eta_) {
    SolverConfig cfg;
    cfg.mode = SolverMode::FixedLambda;
    cfg.lam = lam_;
    cfg.a = a_;
    cfg.eta = eta_;
    return cfg;
}

SolverConfig SolverConfig::target_sparsity(std::size_t r, double a_, double eta_) {
    SolverConfig cfg;
    cfg.mode = SolverMode::TargetSparsity;
    cfg.target_support = r;
    cfg.a = a_;
    cfg.eta = eta_;
    return cfg;
}

void SolverConfig::validate(std::size_t n_assets) const {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("solver: a must be positive");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("solver: eta must be positive");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw ConfigError("solver: epsilon must lie in (0, 1)");
    if (mode == SolverMode::FixedLambda) {
        if (!(lam > 0.0) || !std::isfinite(lam))
            throw ConfigError("solver: fixed lambda must be positive");
    } else {
        if (target_support < 1 || target_support >= n_assets) {
            std::ostringstream msg;
            msg << "solver: target sparsity r = " << target_support
                << " must satisfy 1 <= r < n = " << n_assets;
            throw ConfigError(msg.str());
        }
    }
    if (max_iters == 0) throw ConfigError("solver: max_iters must be positive");
    if (tol_x < 0.0) throw ConfigError("solver: tol_x must be nonnegative");
    if (!(tol_obj > 0.0)) throw ConfigError("solver: tol_obj must be positive");
}

double SolverConfig::effective_tol_x(std::size_t n_assets) const {
    return tol_x > 0.0 ? tol_x : 1e-8 * std::sqrt(static_cast<double>(n_assets));
}

const char* to_string(Termination t) {
    switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MaxIters: return "MaxIters";
    case Termination::ZeroSolution: return "ZeroSolution";
    }
    return "?";
}

AdaptiveLambda adaptive_lambda(std::span<const double> b_vec, double a, double phi,
                               std::size_t r) {
    const std::size_t n = b_vec.size();
    if (r < 1 || r >= n) {
        std::ostringstream msg;
        msg << "adaptive_lambda: r = " << r << " out of range [1, " << n << ")";
        throw ConfigError(msg.str());
    }
    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = std::fabs(b_vec[i]);
    std::sort(mags.begin(), mags.end(), std::greater<>());
    const double mag_r = mags[r - 1];  // r-th largest
    const double mag_r1 = mags[r];     // (r+1)-th largest

    const double lam1 = 2.0 * mag_r1 / (a * phi);
    if (lam1 <= 1.0 / (a * a * phi)) {
        if (lam1 < kLambdaMin) {
            // degenerate tail: keep the threshold positive via the formula
            const double lam = kLambdaMin;
            return {lam, ThresholdRegime::SmallLambda, lam * phi * a / 2.0};
        }
        // t* = lam1 * phi * a / 2 algebraically equals mag_r1; pass the
        // sorted magnitude itself so the boundary test is exact
        return {lam1, ThresholdRegime::SmallLambda, mag_r1};
    }
    const double num = 2.0 * a * mag_r + 1.0;
    const double lam2 = num * num / (4.0 * a * a * phi);
    // t* = sqrt(lam2 * phi) - 1/(2a) algebraically equals mag_r
    return {lam2, ThresholdRegime::LargeLambda, mag_r};
}

double lambda_bar(const PortfolioProblem& p, double a, double eta) {
    const auto& k = kernels::ops();
    const std::size_t t = p.periods(), n = p.assets();

    const double s = p.beta * p.beta +
                     eta * (p.target[0] * p.target[0] + p.target[1] * p.target[1]);

    // v = (beta/T) R^T e_T + eta A^T b
    std::vector<double> ones_t(t, 1.0), v(n);
    k.matvec_t(p.returns.data.data(), t, n, ones_t.data(), v.data());
    const double bt = p.beta / static_cast<double>(t);
    for (double& vi : v) vi *= bt;
    for (std::size_t r = 0; r < 2; ++r)
        k.axpy(eta * p.target[r], p.constraints.row(r).data(), v.data(), n);

    const double vinf = k.abs_max(v.data(), n);
    return s + vinf / a + std::sqrt(vinf * vinf + 2.0 * a * s * vinf) / a;
}

namespace {

std::vector<std::size_t> support_of(std::span<const double> x) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) s.push_back(i);
    return s;
}

} // namespace

SolveResult ifpt_solve(const PortfolioProblem& p, const SolverConfig& cfg,
                       std::span<const double> x0) {
    const std::size_t n = p.assets();
    cfg.validate(n);
    if (x0.size() != n) throw DimensionError("ifpt_solve: x0 length mismatch");

    const bool adaptive = cfg.mode == SolverMode::TargetSparsity;
    const double phi = max_step_size(p, cfg.eta, cfg.epsilon);
    const double tol = cfg.effective_tol_x(n);
    const double lam_zero = lambda_bar(p, cfg.a, cfg.eta);

    SolveResult res;
    res.x.assign(x0.begin(), x0.end());
    std::vector<double> b(n), xn(n);
    GradientWorkspace ws;
    const auto& k = kernels::ops();

    double lam = cfg.lam;
    res.termination = Termination::MaxIters;

    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        gradient_step(p, cfg.eta, phi, res.x, b, ws);

        double t_star;
        if (adaptive) {
            const AdaptiveLambda al = adaptive_lambda(b, cfg.a, phi, cfg.target_support);
            lam = al.lam;
            t_star = al.t_star;
        } else {
            t_star = threshold(ProxParams(cfg.a, lam * phi)).t_star;
        }
        const ObjectiveParams obj_params(cfg.a, lam, cfg.eta);
        if (it == 0) res.objective_trace.push_back(objective_penalized(p, obj_params, res.x));
        res.lambda_trace.push_back(lam);

        prox_vector_into(ProxParams(cfg.a, lam * phi), t_star, b, xn);
        for (double v : xn) {
            if (!std::isfinite(v))
                throw SolverError("ifpt_solve: non-finite iterate (divergence)");
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
        if (!adaptive) {
            const auto& tr = res.objective_trace;
            if (std::fabs(tr[tr.size() - 1] - tr[tr.size() - 2]) <= cfg.tol_obj) {
                res.termination = Termination::Converged;
                break;
            }
        }
    }

    res.support = support_of(res.x);
    return res;
}

SolveResult ifpt_solve(const PortfolioProblem& p, const SolverConfig& cfg) {
    std::vector<double> x0(p.assets(), 1.0 / static_cast<double>(p.assets()));
    return ifpt_solve(p, cfg, x0);
}

FirstOrderReport check_first_order(const PortfolioProblem& p,
                                   const ObjectiveParams& params,
                                   std::span<const double> x, double tol) {
    const auto& k = kernels::ops();
    const std::size_t t = p.periods(), n = p.assets();
    if (x.size() != n) throw DimensionError("check_first_order: x length mismatch");

    // L = (2/T) R^T (beta e_T - Rx) + 2 eta A^T (b - Ax)
    std::vector<double> rt(t), l(n);
    k.matvec(p.returns.data.data(), t, n, x.data(), rt.data());
    for (std::size_t i = 0; i < t; ++i) rt[i] = p.beta - rt[i];
    k.matvec_t(p.returns.data.data(), t, n, rt.data(), l.data());
    const double two_over_t = 2.0 / static_cast<double>(t);
    for (double& li : l) li *= two_over_t;
    for (std::size_t r = 0; r < 2; ++r) {
        const auto row = p.constraints.row(r);
        const double resid = p.target[r] - k.dot(row.data(), x.data(), n);
        k.axpy(2.0 * params.eta * resid, row.data(), l.data(), n);
    }

    FirstOrderReport rep;
    rep.tol = tol;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0.0) continue;
        const double d = 1.0 + params.a * std::fabs(x[i]);
        const double rhs = params.a * params.lam / (d * d);
        // stationarity LHS multiplied by sign(x_i) should equal rhs
        const double lhs = l[i] * (x[i] > 0.0 ? 1.0 : -1.0);
        const double resid = std::fabs(lhs - rhs);
        rep.indices.push_back(i);
        rep.residuals.push_back(resid);
        if (resid > rep.max_residual) rep.max_residual = resid;
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

BoundsReport check_bounds(const PortfolioProblem& p, const ObjectiveParams& params,
                          std::span<const double> x) {
    const std::size_t t = p.periods(), n = p.assets();
    if (x.size() != n) throw DimensionError("check_bounds: x length mismatch");

    BoundsReport rep;
    const double sqrt_lam = std::sqrt(params.lam);
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0.0) continue;
        const double rn = p.returns.col_norm(i);
        const double an = p.constraints.col_norm(i);
        const double s_i = rn * rn / static_cast<double>(t) + params.eta * an * an;
        BoundsReport::LowerEntry e;
        e.index = i;
        e.magnitude = std::fabs(x[i]);
        e.applicable = params.a > s_i / sqrt_lam;
        e.bound = e.applicable ? sqrt_lam / s_i - 1.0 / params.a : 0.0;
        e.satisfied = !e.applicable || e.magnitude >= e.bound - 1e-12;
        if (!e.satisfied) rep.lower_pass = false;
        rep.lower.push_back(e);
    }

    const double zero_obj = p.beta * p.beta +
                            params.eta * (p.target[0] * p.target[0] +
                                          p.target[1] * p.target[1]);
    rep.x_inf_norm = kernels::ops().abs_max(x.data(), n);
    rep.upper_applicable = params.lam > zero_obj;
    if (rep.upper_applicable) {
        rep.upper_bound = zero_obj / (params.a * (params.lam - zero_obj));
        rep.upper_pass = rep.x_inf_norm <= rep.upper_bound + 1e-12;
    }
    return rep;
}

std::vector<EtaSweepPoint> eta_sweep(const PortfolioProblem& p, SolverConfig cfg,
                                     std::span<const double> etas) {
    if (etas.empty()) throw ConfigError("eta_sweep: empty eta list");
    for (std::size_t i = 0; i < etas.size(); ++i) {
        if (!(etas[i] > 0.0)) throw ConfigError("eta_sweep: etas must be positive");
        if (i > 0 && etas[i] <= etas[i - 1])
            throw ConfigError("eta_sweep: etas must be strictly increasing");
    }

    const auto& k = kernels::ops();
    const std::size_t n = p.assets();
    std::vector<double> x0(n, 1.0 / static_cast<double>(n));
    std::vector<EtaSweepPoint> out;
    out.reserve(etas.size());
    for (double eta : etas) {
        cfg.eta = eta;
        SolveResult r = ifpt_solve(p, cfg, x0);
        double viol = 0.0;
        for (std::size_t row = 0; row < 2; ++row) {
            const double d =
                k.dot(p.constraints.row(row).data(), r.x.data(), n) - p.target[row];
            viol += d * d;
        }
        x0 = r.x;
        out.push_back({eta, std::move(r.x), std::sqrt(viol), r.termination});
    }
    return out;
}

} // namespace fracport
