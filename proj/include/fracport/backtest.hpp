#ifndef FRACPORT_BACKTEST_HPP
#define FRACPORT_BACKTEST_HPP

#include <optional>
#include <string>
#include <vector>

#include "fracport/data.hpp"
#include "fracport/ifpt.hpp"

namespace fracport {

struct BacktestConfig {
    std::vector<std::string> methods; ///< subset of {ifpt, infpt, markowitz, l1}
    std::vector<std::size_t> ks;      ///< target sparsity levels; empty = fixed lambda
    SolverConfig solver;              ///< a, eta, epsilon, tolerances, caps

    /// Emit the conventional return/stddev ratio alongside the m/variance one.
    bool sharpe_stddev_also = false;
    /// Compound the monthly returns instead of summing them.
    bool compound_returns = false;

    /// Budget for the lambda bisection that targets k assets for the l1
    /// comparator.
    std::size_t l1_bisection_steps = 18;
    std::size_t l1_max_iters = 20000;
};

/// One (method, k, period) result. The whole-period aggregate appears as an
/// extra period pooling the monthly returns of the per-sub-period holdings;
/// it has no holdings of its own.
struct BacktestCell {
    std::string method;
    std::size_t k = 0;
    std::string period;
    std::size_t months = 0;
    double total_return = 0.0; ///< m
    double variance = 0.0;     ///< sigma (sample variance, divisor months-1)
    double sharpe = 0.0;       ///< S = m / sigma; +/-inf when sigma == 0
    std::size_t support_size = 0;
    std::vector<double> holdings;
    std::optional<double> sharpe_stddev;
    std::string error; ///< nonempty = solver failed for this cell
};

struct BacktestReport {
    std::vector<std::string> assets;
    std::vector<std::string> methods;
    std::vector<std::size_t> ks;
    std::vector<std::string> periods; ///< sub-period labels, aggregate last
    std::vector<BacktestCell> cells;  ///< ordered by (method, k, period)
};

/// Run the full protocol: per sub-period, build the problem from the
/// estimation slice (beta = equal-weight average over that window), solve
/// for every (method, k), hold the weights fixed over the evaluation
/// sub-period, and score out of sample. Solver failures are recorded in the
/// affected cells and the run continues.
BacktestReport run_backtest(const ReturnsPanel& panel, const WindowPlan& plan,
                            const BacktestConfig& cfg);

enum class ReportFormat { Csv, Json, Markdown };

/// Deterministic serialization; the markdown layout has periods as rows and
/// k-blocks as column groups.
std::string emit_report(const BacktestReport& report, ReportFormat format);

/// Inverse of the Json emitter; emit(parse(s)) reproduces s byte-for-byte.
BacktestReport parse_report_json(const std::string& text);

/// TSV samples (a, t, rho_a(t)) of the fraction penalty, samples >= 2 evenly
/// spaced points per a over [t_min, t_max].
std::string emit_penalty_plot_data(std::span<const double> a_values, double t_min,
                                   double t_max, std::size_t samples);

/// Paper-style period label "07/76-06/81".
std::string period_label(const Window& w);

} // namespace fracport

#endif
