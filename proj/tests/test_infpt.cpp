#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracport/errors.hpp"
#include "fracport/infpt.hpp"
#include "fracport/oracle.hpp"
#include "support.hpp"

using namespace fracport;

TEST_CASE("project_nonneg") {
    CHECK(project_nonneg(std::vector<double>{1.0, -2.0, 0.0}) ==
          std::vector<double>{1.0, 0.0, 0.0});
    CHECK(project_nonneg(std::vector<double>{-1.0, -0.5, -3.0}) ==
          std::vector<double>{0.0, 0.0, 0.0});
    const std::vector<double> nonneg{0.3, 0.0, 2.0};
    CHECK(project_nonneg(nonneg) == nonneg);
    CHECK(project_nonneg(project_nonneg(std::vector<double>{1.0, -2.0})) ==
          project_nonneg(std::vector<double>{1.0, -2.0}));
}

TEST_CASE("prox_nonneg composes projection with thresholding") {
    const ProxParams params(1.0, 0.5);
    CHECK(prox_nonneg(params, std::vector<double>{-1.0, -0.2, 0.0}) ==
          std::vector<double>{0.0, 0.0, 0.0});

    const auto out = prox_nonneg(params, std::vector<double>{2.0, -5.0});
    CHECK(out[0] == prox_scalar(params, 2.0));
    CHECK(out[1] == 0.0);
}

TEST_CASE("prox_nonneg matches the constrained brute force") {
    std::mt19937_64 rng(70);
    std::uniform_real_distribution<double> ua(0.2, 5.0), ul(1e-3, 5.0), uv(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const ProxParams params(ua(rng), ul(rng));
        std::vector<double> v(3);
        for (auto& x : v) x = uv(rng);

        const auto ours = prox_nonneg(params, v);
        const auto oracle = prox_nonneg_oracle(params, v, 0.01);
        double f_ours = 0.0, f_oracle = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            f_ours += prox_objective(params, v[i], ours[i]);
            f_oracle += prox_objective(params, v[i], oracle[i]);
            CHECK(ours[i] >= 0.0);
        }
        CHECK(f_ours <= f_oracle + 1e-6);
    }
}

TEST_CASE("nonneg threshold is clamped at zero") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> ua(0.05, 20.0), ul(1e-6, 50.0);
    for (int i = 0; i < 500; ++i) {
        const auto tv = threshold(ProxParams(ua(rng), ul(rng)));
        CHECK(tv.t_star >= 0.0);
    }
}

TEST_CASE("infpt targets the planted nonnegative support") {
    for (std::uint64_t seed : {72, 73, 74}) {
        const auto planted = testsup::planted_problem(seed, 48, 60, 5, false);
        const SolverConfig cfg = SolverConfig::target_sparsity(5, 1.0, 100.0);
        const NonnegSolveResult res = infpt_solve(planted.problem, cfg);
        CHECK(res.support.size() == 5);
        for (double v : res.x) CHECK(v >= 0.0);
        CHECK(res.feasibility_violation < 1.0);
    }
}

TEST_CASE("infpt targeting is shape-robust in a") {
    for (double a : {0.5, 3.0}) {
        const auto planted = testsup::planted_problem(95, 48, 60, 5, false);
        const SolverConfig cfg = SolverConfig::target_sparsity(5, a, 100.0);
        const NonnegSolveResult res = infpt_solve(planted.problem, cfg);
        CHECK(res.support.size() == 5);
        for (double v : res.x) CHECK(v >= 0.0);
    }
}

TEST_CASE("infpt rejects negative starts") {
    const PortfolioProblem p = testsup::random_problem(75, 5, 30);
    const SolverConfig cfg = SolverConfig::target_sparsity(2);
    std::vector<double> x0(5, 0.2);
    x0[3] = -0.1;
    CHECK_THROWS_AS(infpt_solve(p, cfg, x0), ConfigError);
}

TEST_CASE("infpt collapses to zero above lambda_bar") {
    // empirical: the bound is derived without sign constraints, but zero
    // remains feasible for the nonnegative problem
    for (std::uint64_t seed : {76, 77}) {
        const PortfolioProblem p = testsup::random_problem(seed, 6, 30);
        SolverConfig cfg = SolverConfig::fixed_lambda(0.0, 1.0, 1.0);
        cfg.lam = 1.01 * lambda_bar(p, cfg.a, cfg.eta);
        const NonnegSolveResult res = infpt_solve(p, cfg);
        for (double v : res.x) CHECK(v == 0.0);
    }
}

TEST_CASE("converged infpt runs satisfy the last-step bound") {
    const PortfolioProblem p = testsup::random_problem(79, 6, 40);
    SolverConfig cfg = SolverConfig::fixed_lambda(
        0.4 * lambda_bar(p, 1.0, 1.0), 1.0, 1.0);
    cfg.max_iters = 400000;
    cfg.tol_obj = 1e-18;
    const NonnegSolveResult res = infpt_solve(p, cfg);
    REQUIRE(res.termination == Termination::Converged);
    CHECK(res.last_step_norm <= cfg.effective_tol_x(6));
    for (double v : res.x) CHECK(v >= 0.0);
}

TEST_CASE("every infpt iterate is nonnegative") {
    // the m-th rerun reproduces the m-th iterate (deterministic map)
    const auto planted = testsup::planted_problem(78, 12, 30, 4, false);
    SolverConfig cfg = SolverConfig::target_sparsity(4, 1.0, 50.0);
    for (std::size_t m = 1; m <= 40; ++m) {
        cfg.max_iters = m;
        const NonnegSolveResult res = infpt_solve(planted.problem, cfg);
        for (double v : res.x) CHECK(v >= 0.0);
    }
}
