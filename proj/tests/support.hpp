#ifndef FRACPORT_TESTS_SUPPORT_HPP
#define FRACPORT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fracport/data.hpp"
#include "fracport/problem.hpp"

// Seeded synthetic instances shared by the unit and acceptance suites.
namespace testsup {

using fracport::Matrix;
using fracport::PortfolioProblem;
using fracport::ReturnsPanel;
using fracport::YearMonth;

/// Monthly-return-scale matrix: columns get means in [mean_lo, mean_hi],
/// noise is iid normal with the given sd.
inline Matrix random_returns(std::mt19937_64& rng, std::size_t t, std::size_t n,
                             double sd = 0.05, double mean_lo = 0.005,
                             double mean_hi = 0.015) {
    std::normal_distribution<double> noise(0.0, sd);
    std::uniform_real_distribution<double> mean(mean_lo, mean_hi);
    Matrix r(t, n);
    for (std::size_t c = 0; c < n; ++c) {
        const double mu = mean(rng);
        for (std::size_t row = 0; row < t; ++row) r(row, c) = mu + noise(rng);
    }
    return r;
}

/// Random instance with beta = the mean of the column means (a feasible,
/// unremarkable target).
inline PortfolioProblem random_problem(std::uint64_t seed, std::size_t n,
                                       std::size_t t, double sd = 0.05) {
    std::mt19937_64 rng(seed);
    Matrix r = random_returns(rng, t, n, sd);
    double beta = 0.0;
    for (double v : r.data) beta += v;
    beta /= static_cast<double>(r.data.size());
    return fracport::build_problem(r, beta);
}

/// Budget-feasible r-sparse weights with all magnitudes >= 0.2.
/// With allow_short = false the weights are 1/r plus a zero-sum jitter
/// (requires r <= 5 so that 1/r - jitter stays >= 0.2).
inline std::vector<double> planted_weights(std::mt19937_64& rng, std::size_t n,
                                           std::size_t r, bool allow_short) {
    std::vector<double> w(n, 0.0);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);

    if (!allow_short) {
        std::uniform_real_distribution<double> jitter(-0.01, 0.01);
        std::vector<double> d(r);
        double dsum = 0.0;
        for (auto& v : d) dsum += (v = jitter(rng));
        for (std::size_t i = 0; i < r; ++i)
            w[idx[i]] = 1.0 / static_cast<double>(r) + d[i] - dsum / static_cast<double>(r);
        return w;
    }

    std::uniform_real_distribution<double> mag(0.2, 0.5);
    std::bernoulli_distribution flip(0.35);
    double pos = 0.0, neg = 0.0;
    std::vector<double> raw(r);
    for (std::size_t i = 0; i < r; ++i) {
        const double m = mag(rng);
        raw[i] = (i > 0 && flip(rng)) ? -m : m;
        (raw[i] > 0 ? pos : neg) += raw[i];
    }
    const double scale = (1.0 - neg) / pos; // scale >= 1, keeps |w| >= 0.2
    for (std::size_t i = 0; i < r; ++i)
        w[idx[i]] = raw[i] > 0 ? raw[i] * scale : raw[i];
    return w;
}

struct Planted {
    PortfolioProblem problem;
    std::vector<double> x_true;
};

/// Instance whose target return is met exactly by a planted sparse,
/// budget-feasible portfolio with well-separated magnitudes.
inline Planted planted_problem(std::uint64_t seed, std::size_t n, std::size_t t,
                               std::size_t r, bool allow_short) {
    std::mt19937_64 rng(seed);
    Matrix returns = random_returns(rng, t, n);
    std::vector<double> x_true = planted_weights(rng, n, r, allow_short);

    std::vector<double> mu(n, 0.0);
    for (std::size_t row = 0; row < t; ++row)
        for (std::size_t c = 0; c < n; ++c) mu[c] += returns(row, c);
    double beta = 0.0;
    for (std::size_t c = 0; c < n; ++c)
        beta += mu[c] / static_cast<double>(t) * x_true[c];

    return {fracport::build_problem(returns, beta), std::move(x_true)};
}

/// Fama-French-shaped panel: given asset count, start month and length.
inline ReturnsPanel synth_panel(std::uint64_t seed, std::size_t n_assets,
                                YearMonth start, std::size_t months,
                                double mean = 0.009, double sd = 0.045) {
    std::mt19937_64 rng(seed);
    ReturnsPanel panel;
    for (std::size_t i = 0; i < n_assets; ++i) {
        char name[24];
        std::snprintf(name, sizeof(name), "A%03u", static_cast<unsigned>(i + 1));
        panel.assets.emplace_back(name);
    }
    for (std::size_t m = 0; m < months; ++m)
        panel.dates.push_back(start.plus_months(static_cast<int>(m)));
    panel.values = random_returns(rng, months, n_assets, sd, mean * 0.6, mean * 1.4);
    // two-decimal percent cells, exactly as the source files carry them
    for (double& v : panel.values.data) v = std::round(v * 1e4) / 1e2 / 100.0;
    return panel;
}

} // namespace testsup

#endif
