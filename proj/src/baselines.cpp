#include "fracport/baselines.hpp"

#include <cmath>
#include <sstream>

#include "fracport/errors.hpp"
#include "fracport/kernels.hpp"

namespace fracport {

namespace {

std::vector<std::size_t> support_of(const std::vector<double>& x) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) s.push_back(i);
    return s;
}

double tracking_error(const PortfolioProblem& p, const std::vector<double>& x) {
    const auto& k = kernels::ops();
    const std::size_t t = p.periods();
    std::vector<double> rx(t);
    k.matvec(p.returns.data.data(), t, p.assets(), x.data(), rx.data());
    double acc = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        const double d = rx[i] - p.beta;
        acc += d * d;
    }
    return acc / static_cast<double>(t);
}

double penalized_smooth(const PortfolioProblem& p, double eta,
                        const std::vector<double>& x) {
    const auto& k = kernels::ops();
    double cons = 0.0;
    for (std::size_t r = 0; r < 2; ++r) {
        const double d =
            k.dot(p.constraints.row(r).data(), x.data(), x.size()) - p.target[r];
        cons += d * d;
    }
    return tracking_error(p, x) + eta * cons;
}

} // namespace

BaselineResult markowitz_equality(const PortfolioProblem& p) {
    const std::size_t t = p.periods(), n = p.assets();
    const double two_over_t = 2.0 / static_cast<double>(t);

    Matrix kkt(n + 2, n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double g = 0.0;
            for (std::size_t r = 0; r < t; ++r) g += p.returns(r, i) * p.returns(r, j);
            kkt(i, j) = kkt(j, i) = two_over_t * g;
        }
        kkt(i, n) = kkt(n, i) = p.constraints(0, i);
        kkt(i, n + 1) = kkt(n + 1, i) = p.constraints(1, i);
    }

    std::vector<double> rhs(n + 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double colsum = 0.0;
        for (std::size_t r = 0; r < t; ++r) colsum += p.returns(r, i);
        rhs[i] = two_over_t * p.beta * colsum;
    }
    rhs[n] = p.target[0];
    rhs[n + 1] = p.target[1];

    std::vector<double> sol;
    try {
        sol = lu_solve(std::move(kkt), std::move(rhs));
    } catch (const SolverError& e) {
        std::ostringstream msg;
        msg << "markowitz_equality: KKT system singular (duplicated or collinear "
               "assets?): "
            << e.what();
        throw SolverError(msg.str());
    }

    BaselineResult res;
    res.method = BaselineMethod::MarkowitzEquality;
    res.x.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n));
    res.objective = tracking_error(p, res.x);
    res.support = support_of(res.x);
    return res;
}

BaselineResult l1_penalized(const PortfolioProblem& p, double lam, double eta,
                            std::size_t max_iters, double tol,
                            std::span<const double> x0) {
    if (lam < 0.0 || !(eta > 0.0)) throw ConfigError("l1_penalized: lam >= 0, eta > 0 required");
    const std::size_t n = p.assets();
    if (x0.size() != n) throw DimensionError("l1_penalized: x0 length mismatch");
    if (tol <= 0.0) tol = 1e-8 * std::sqrt(static_cast<double>(n));

    const double phi = max_step_size(p, eta, 0.01);
    const double soft = lam * phi / 2.0;

    BaselineResult res;
    res.method = BaselineMethod::L1Penalized;
    res.x.assign(x0.begin(), x0.end());

    std::vector<double> b(n), xn(n);
    GradientWorkspace ws;
    auto l1_objective = [&](const std::vector<double>& x) {
        double l1 = 0.0;
        for (double v : x) l1 += std::fabs(v);
        return penalized_smooth(p, eta, x) + lam * l1;
    };
    res.objective_trace.push_back(l1_objective(res.x));

    for (std::size_t it = 0; it < max_iters; ++it) {
        gradient_step(p, eta, phi, res.x, b, ws);
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::fabs(b[i]) - soft;
            xn[i] = m > 0.0 ? std::copysign(m, b[i]) : 0.0;
        }
        double dx2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = xn[i] - res.x[i];
            dx2 += d * d;
        }
        res.x.swap(xn);
        res.objective_trace.push_back(l1_objective(res.x));
        if (!std::isfinite(res.objective_trace.back()))
            throw SolverError("l1_penalized: diverged");
        if (std::sqrt(dx2) <= tol) break;
    }

    res.objective = res.objective_trace.back();
    res.support = support_of(res.x);
    return res;
}

BaselineResult l1_penalized(const PortfolioProblem& p, double lam, double eta,
                            std::size_t max_iters, double tol) {
    std::vector<double> x0(p.assets(), 1.0 / static_cast<double>(p.assets()));
    return l1_penalized(p, lam, eta, max_iters, tol, x0);
}

namespace {

/// Minimize over the given support; returns nullopt when the subproblem is
/// singular/infeasible. Full-length solution plus objective.
std::optional<std::pair<std::vector<double>, double>>
solve_on_support(const PortfolioProblem& p, const std::vector<std::size_t>& s,
                 const std::optional<double>& eta) {
    const std::size_t t = p.periods(), n = p.assets(), m = s.size();
    const double two_over_t = 2.0 / static_cast<double>(t);

    auto gram = [&](std::size_t i, std::size_t j) {
        double g = 0.0;
        for (std::size_t r = 0; r < t; ++r)
            g += p.returns(r, s[i]) * p.returns(r, s[j]);
        return g;
    };
    auto rhs_track = [&](std::size_t i) {
        double g = 0.0;
        for (std::size_t r = 0; r < t; ++r) g += p.returns(r, s[i]);
        return two_over_t * p.beta * g;
    };

    std::vector<double> z;
    if (eta) {
        if (m == 0) {
            std::vector<double> x(n, 0.0);
            const double obj = penalized_smooth(p, *eta, x);
            return std::make_pair(std::move(x), obj);
        }
        Matrix h(m, m);
        std::vector<double> rhs(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i; j < m; ++j) {
                double v = two_over_t * gram(i, j);
                for (std::size_t r = 0; r < 2; ++r)
                    v += 2.0 * *eta * p.constraints(r, s[i]) * p.constraints(r, s[j]);
                h(i, j) = h(j, i) = v;
            }
            double rv = rhs_track(i);
            for (std::size_t r = 0; r < 2; ++r)
                rv += 2.0 * *eta * p.constraints(r, s[i]) * p.target[r];
            rhs[i] = rv;
        }
        try {
            z = lu_solve(std::move(h), std::move(rhs));
        } catch (const SolverError&) {
            return std::nullopt;
        }
    } else {
        if (m == 0) return std::nullopt;
        Matrix kkt(m + 2, m + 2);
        std::vector<double> rhs(m + 2, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i; j < m; ++j)
                kkt(i, j) = kkt(j, i) = two_over_t * gram(i, j);
            kkt(i, m) = kkt(m, i) = p.constraints(0, s[i]);
            kkt(i, m + 1) = kkt(m + 1, i) = p.constraints(1, s[i]);
            rhs[i] = rhs_track(i);
        }
        rhs[m] = p.target[0];
        rhs[m + 1] = p.target[1];
        std::vector<double> sol;
        try {
            sol = lu_solve(std::move(kkt), std::move(rhs));
        } catch (const SolverError&) {
            return std::nullopt;
        }
        z.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(m));
        // reject supports where the "solution" does not actually meet Ax = b
        double viol = 0.0;
        for (std::size_t r = 0; r < 2; ++r) {
            double d = -p.target[r];
            for (std::size_t i = 0; i < m; ++i) d += p.constraints(r, s[i]) * z[i];
            viol += d * d;
        }
        if (std::sqrt(viol) > 1e-8) return std::nullopt;
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) x[s[i]] = z[i];
    const double obj = eta ? penalized_smooth(p, *eta, x) : tracking_error(p, x);
    return std::make_pair(std::move(x), obj);
}

} // namespace

BaselineResult exact_cardinality(const PortfolioProblem& p, std::size_t k,
                                 CardinalityOptions opts) {
    const std::size_t n = p.assets();
    if (n > opts.n_cap) {
        std::ostringstream msg;
        msg << "exact_cardinality: n = " << n << " exceeds cap " << opts.n_cap
            << " (support enumeration is exponential)";
        throw DimensionError(msg.str());
    }
    if (k < 1 || k > n) throw ConfigError("exact_cardinality: need 1 <= k <= n");

    BaselineResult best;
    best.method = BaselineMethod::ExactCardinality;
    bool found = false;

    std::vector<std::size_t> s;
    // enumerate supports of size m = 1..k, lexicographically within each size
    for (std::size_t m = 1; m <= k; ++m) {
        s.resize(m);
        for (std::size_t i = 0; i < m; ++i) s[i] = i;
        while (true) {
            auto sol = solve_on_support(p, s, opts.eta);
            if (sol) {
                const bool better =
                    !found || sol->second < best.objective ||
                    (sol->second == best.objective &&
                     support_of(sol->first) < best.support);
                if (better) {
                    best.x = std::move(sol->first);
                    best.objective = sol->second;
                    best.support = support_of(best.x);
                    found = true;
                }
            }
            // next combination
            std::size_t i = m;
            while (i > 0 && s[i - 1] == n - m + (i - 1)) --i;
            if (i == 0) break;
            ++s[i - 1];
            for (std::size_t j = i; j < m; ++j) s[j] = s[j - 1] + 1;
        }
    }

    if (!found)
        throw SolverError("exact_cardinality: no support of size <= k admits a solution");
    return best;
}

} // namespace fracport
