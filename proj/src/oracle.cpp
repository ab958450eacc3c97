#include "fracport/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracport/errors.hpp"

namespace fracport {

double prox_objective(const ProxParams& params, double gamma, double beta) {
    const double d = beta - gamma;
    const double at = params.a * std::fabs(beta);
    return d * d + params.lam * at / (at + 1.0);
}

namespace {

constexpr double kGolden = 0.6180339887498949; // (sqrt(5)-1)/2

/// Golden-section minimization of f over [lo, hi].
template <typename F>
double golden_min(F&& f, double lo, double hi) {
    for (int it = 0; it < 120 && hi - lo > 1e-13; ++it) {
        const double d = kGolden * (hi - lo);
        const double x1 = hi - d, x2 = lo + d;
        if (f(x1) < f(x2))
            hi = x2;
        else
            lo = x1;
    }
    return (lo + hi) / 2.0;
}

template <typename F>
double grid_and_refine(F&& f, double lo, double hi, double step,
                       const std::vector<double>& extra_candidates) {
    std::vector<double> candidates = extra_candidates;
    double prev2 = f(lo), prev1 = f(lo + step);
    candidates.push_back(lo);
    for (double x = lo + 2.0 * step; x <= hi + step / 2.0; x += step) {
        const double fx = f(x);
        if (prev1 <= prev2 && prev1 <= fx) candidates.push_back(x - step);
        prev2 = prev1;
        prev1 = fx;
    }
    candidates.push_back(hi);

    double best = candidates.front();
    double best_f = f(best);
    for (double c : candidates) {
        const double refined = golden_min(f, std::max(lo, c - step), std::min(hi, c + step));
        const double fr = f(refined);
        if (fr < best_f) {
            best_f = fr;
            best = refined;
        }
    }
    return best;
}

} // namespace

double prox_oracle(const ProxParams& params, double gamma, double grid_halfwidth,
                   double grid_step) {
    if (!(grid_step > 0.0) || grid_step > 1e-3)
        throw ConfigError("prox_oracle: grid_step must lie in (0, 1e-3]");
    if (!(grid_halfwidth > 0.0)) throw ConfigError("prox_oracle: halfwidth must be positive");

    const double hw = std::fabs(gamma) + grid_halfwidth;
    auto f = [&](double beta) { return prox_objective(params, gamma, beta); };
    const double best = grid_and_refine(f, -hw, hw, grid_step, {0.0});
    // exact-zero candidate: prefer 0 on ties (the minimum at the threshold
    // boundary is attained by both branches)
    return f(0.0) <= f(best) ? 0.0 : best;
}

double prox_oracle_nonneg(const ProxParams& params, double v, double grid_halfwidth,
                          double grid_step) {
    if (!(grid_step > 0.0)) throw ConfigError("prox_oracle_nonneg: bad grid step");
    const double hi = std::fabs(v) + grid_halfwidth;
    auto f = [&](double beta) { return prox_objective(params, v, beta); };
    const double best = grid_and_refine(f, 0.0, hi, grid_step, {0.0});
    return f(0.0) <= f(best) ? 0.0 : best;
}

std::vector<double> prox_nonneg_oracle(const ProxParams& params,
                                       std::span<const double> v, double grid_step) {
    // ||x - v||^2 + lam P_a(x) over x >= 0 separates per coordinate
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = prox_oracle_nonneg(params, v[i], 1.0, grid_step);
    return out;
}

} // namespace fracport
