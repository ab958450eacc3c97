#include "fracport/backtest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fracport/baselines.hpp"
#include "fracport/errors.hpp"
#include "fracport/infpt.hpp"
#include "fracport/kernels.hpp"
#include "fracport/penalty.hpp"

namespace fracport {

std::string period_label(const Window& w) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d/%02d-%02d/%02d", w.start.month,
                  w.start.year % 100, w.end.month, w.end.year % 100);
    return buf;
}

namespace {

std::string shortest(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::vector<double> solve_l1_target_k(const PortfolioProblem& p, std::size_t k,
                                      const BacktestConfig& cfg) {
    const auto& kr = kernels::ops();
    const std::size_t n = p.assets(), t = p.periods();

    // gradient of the smooth part at zero; soft thresholding kills
    // everything once lam/2 exceeds its sup norm
    std::vector<double> ones_t(t, 1.0), v(n);
    kr.matvec_t(p.returns.data.data(), t, n, ones_t.data(), v.data());
    const double bt = p.beta / static_cast<double>(t);
    for (double& vi : v) vi *= bt;
    for (std::size_t r = 0; r < 2; ++r)
        kr.axpy(cfg.solver.eta * p.target[r], p.constraints.row(r).data(), v.data(), n);
    double hi = 2.0 * kr.abs_max(v.data(), n);
    if (!(hi > 0.0)) hi = 1.0;
    double lo = hi * 1e-8;

    std::vector<double> warm(n, 1.0 / static_cast<double>(n));
    std::vector<double> best;
    std::size_t best_support = 0;

    auto probe = [&](double lam) {
        BaselineResult r = l1_penalized(p, lam, cfg.solver.eta, cfg.l1_max_iters,
                                        0.0, warm);
        warm = r.x;
        return r;
    };

    // make sure the bracket straddles the target support
    for (int expand = 0; expand < 4; ++expand) {
        BaselineResult r = probe(lo);
        if (r.support.size() > k) break;
        if (r.support.size() == k) return r.x;
        lo *= 1e-2;
    }
    for (std::size_t step = 0; step < cfg.l1_bisection_steps; ++step) {
        const double mid = std::sqrt(lo * hi);
        BaselineResult r = probe(mid);
        const std::size_t s = r.support.size();
        if (s > k) {
            lo = mid;
        } else {
            if (s > best_support || best.empty()) {
                best = r.x;
                best_support = s;
            }
            hi = mid;
        }
    }
    if (best.empty()) {
        // even the largest lambda stayed above k; report the densest probe
        BaselineResult r = probe(hi);
        best = r.x;
    }
    return best;
}

std::vector<double> solve_cell(const PortfolioProblem& p, const std::string& method,
                               std::size_t k, const BacktestConfig& cfg) {
    SolverConfig solver = cfg.solver;
    if (k > 0) {
        solver.mode = SolverMode::TargetSparsity;
        solver.target_support = k;
    }
    if (method == "ifpt") return ifpt_solve(p, solver).x;
    if (method == "infpt") return infpt_solve(p, solver).x;
    if (method == "markowitz") return markowitz_equality(p).x;
    if (method == "l1") {
        if (k == 0)
            return l1_penalized(p, cfg.solver.lam, cfg.solver.eta, cfg.l1_max_iters, 0.0).x;
        return solve_l1_target_k(p, k, cfg);
    }
    throw ConfigError("unknown method '" + method + "'");
}

struct Score {
    double m = 0.0, variance = 0.0, sharpe = 0.0;
    std::optional<double> sharpe_stddev;
};

Score score_returns(const std::vector<double>& monthly, bool compound,
                    bool stddev_also) {
    Score s;
    if (compound) {
        double acc = 1.0;
        for (double y : monthly) acc *= 1.0 + y;
        s.m = acc - 1.0;
    } else {
        for (double y : monthly) s.m += y;
    }
    const double n = static_cast<double>(monthly.size());
    bool all_same = true;
    for (double y : monthly)
        if (y != monthly.front()) all_same = false;
    double mean = 0.0;
    for (double y : monthly) mean += y;
    mean /= n;
    double ss = 0.0;
    for (double y : monthly) ss += (y - mean) * (y - mean);
    // identical samples have zero variance; summation noise must not hide it
    s.variance = monthly.size() > 1 && !all_same ? ss / (n - 1.0) : 0.0;
    s.sharpe = s.variance > 0.0
                   ? s.m / s.variance
                   : std::copysign(std::numeric_limits<double>::infinity(),
                                   s.m == 0.0 ? 1.0 : s.m);
    if (stddev_also)
        s.sharpe_stddev = s.variance > 0.0
                              ? s.m / std::sqrt(s.variance)
                              : std::copysign(std::numeric_limits<double>::infinity(),
                                              s.m == 0.0 ? 1.0 : s.m);
    return s;
}

} // namespace

BacktestReport run_backtest(const ReturnsPanel& panel, const WindowPlan& plan,
                            const BacktestConfig& cfg) {
    plan.validate();
    if (cfg.methods.empty() && !cfg.ks.empty())
        throw ConfigError("run_backtest: ks given but no methods");

    BacktestReport report;
    report.assets = panel.assets;
    report.methods = cfg.methods;
    report.ks = cfg.ks.empty() ? std::vector<std::size_t>{0} : cfg.ks;

    for (const auto& w : plan.evaluation) report.periods.push_back(period_label(w));
    const Window whole{plan.evaluation.front().start, plan.evaluation.back().end};
    report.periods.push_back(period_label(whole));

    // estimation problems are shared across methods and ks
    std::vector<PortfolioProblem> problems;
    std::vector<Matrix> eval_slices;
    for (std::size_t i = 0; i < plan.evaluation.size(); ++i) {
        const Window est = plan.estimation_for(i);
        problems.push_back(build_problem(slice_window(panel, est),
                                         compute_beta(panel, est)));
        eval_slices.push_back(slice_window(panel, plan.evaluation[i]));
    }

    for (const auto& method : cfg.methods) {
        for (std::size_t k : report.ks) {
            std::vector<double> pooled;
            bool pooled_ok = true;
            for (std::size_t i = 0; i < plan.evaluation.size(); ++i) {
                BacktestCell cell;
                cell.method = method;
                cell.k = k;
                cell.period = report.periods[i];
                const Matrix& ev = eval_slices[i];
                cell.months = ev.rows;
                try {
                    std::vector<double> x = solve_cell(problems[i], method, k, cfg);
                    std::vector<double> monthly(ev.rows);
                    kernels::ops().matvec(ev.data.data(), ev.rows, ev.cols, x.data(),
                                          monthly.data());
                    const Score s =
                        score_returns(monthly, cfg.compound_returns, cfg.sharpe_stddev_also);
                    cell.total_return = s.m;
                    cell.variance = s.variance;
                    cell.sharpe = s.sharpe;
                    cell.sharpe_stddev = s.sharpe_stddev;
                    for (double xv : x)
                        if (xv != 0.0) ++cell.support_size;
                    cell.holdings = std::move(x);
                    pooled.insert(pooled.end(), monthly.begin(), monthly.end());
                } catch (const Error& e) {
                    cell.error = e.what();
                    pooled_ok = false;
                }
                report.cells.push_back(std::move(cell));
            }

            BacktestCell agg;
            agg.method = method;
            agg.k = k;
            agg.period = report.periods.back();
            agg.months = pooled.size();
            if (pooled_ok) {
                const Score s =
                    score_returns(pooled, cfg.compound_returns, cfg.sharpe_stddev_also);
                agg.total_return = s.m;
                agg.variance = s.variance;
                agg.sharpe = s.sharpe;
                agg.sharpe_stddev = s.sharpe_stddev;
            } else {
                agg.error = "aggregate unavailable: sub-period solve failed";
            }
            report.cells.push_back(std::move(agg));
        }
    }
    return report;
}

namespace {

std::string sharpe_text(double s) {
    if (std::isinf(s)) return s > 0 ? "inf" : "-inf";
    return shortest(s);
}

nlohmann::json sharpe_json(double s) {
    if (std::isinf(s)) return s > 0 ? "inf" : "-inf";
    return s;
}

double sharpe_from_json(const nlohmann::json& j) {
    if (j.is_string())
        return j.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity()
                                             : -std::numeric_limits<double>::infinity();
    return j.get<double>();
}

std::string emit_csv(const BacktestReport& r) {
    std::ostringstream out;
    out << "method,k,period,months,total_return,variance,sharpe,support_size,"
           "sharpe_stddev,error\n";
    for (const auto& c : r.cells) {
        out << c.method << ',' << c.k << ',' << c.period << ',' << c.months << ',';
        if (c.error.empty()) {
            out << shortest(c.total_return) << ',' << shortest(c.variance) << ','
                << sharpe_text(c.sharpe) << ',' << c.support_size << ',';
            if (c.sharpe_stddev) out << sharpe_text(*c.sharpe_stddev);
        } else {
            out << ",,,,";
        }
        out << ',' << c.error << '\n';
    }
    return out.str();
}

std::string emit_markdown(const BacktestReport& r) {
    std::ostringstream out;
    out << "# Out-of-sample Sharpe ratios (S = m / sigma)\n";
    for (const auto& method : r.methods) {
        out << "\n## " << method << "\n\n| Period |";
        for (std::size_t k : r.ks) {
            if (k > 0)
                out << " k=" << k << " |";
            else
                out << " fixed-lambda |";
        }
        out << "\n|---|";
        for (std::size_t i = 0; i < r.ks.size(); ++i) out << "---|";
        out << '\n';
        for (const auto& period : r.periods) {
            out << "| " << period << " |";
            for (std::size_t k : r.ks) {
                const auto it = std::find_if(
                    r.cells.begin(), r.cells.end(), [&](const BacktestCell& c) {
                        return c.method == method && c.k == k && c.period == period;
                    });
                if (it == r.cells.end() || !it->error.empty()) {
                    out << " - |";
                } else if (std::isinf(it->sharpe)) {
                    out << ' ' << (it->sharpe > 0 ? "inf" : "-inf") << " |";
                } else {
                    char buf[32];
                    std::snprintf(buf, sizeof(buf), "%.2f", it->sharpe);
                    out << ' ' << buf << " |";
                }
            }
            out << '\n';
        }
    }
    out << "\nSupport sizes match the k column for the thresholding methods; "
           "full precision and holdings are in the csv/json reports.\n";
    return out.str();
}

std::string emit_json(const BacktestReport& r) {
    nlohmann::json j;
    j["assets"] = r.assets;
    j["methods"] = r.methods;
    j["ks"] = r.ks;
    j["periods"] = r.periods;
    auto& cells = j["cells"] = nlohmann::json::array();
    for (const auto& c : r.cells) {
        nlohmann::json jc;
        jc["method"] = c.method;
        jc["k"] = c.k;
        jc["period"] = c.period;
        jc["months"] = c.months;
        jc["error"] = c.error;
        if (c.error.empty()) {
            jc["total_return"] = c.total_return;
            jc["variance"] = c.variance;
            jc["sharpe"] = sharpe_json(c.sharpe);
            jc["support_size"] = c.support_size;
            jc["holdings"] = c.holdings;
            if (c.sharpe_stddev) jc["sharpe_stddev"] = sharpe_json(*c.sharpe_stddev);
        }
        cells.push_back(std::move(jc));
    }
    return j.dump(2) + "\n";
}

} // namespace

std::string emit_report(const BacktestReport& report, ReportFormat format) {
    switch (format) {
    case ReportFormat::Csv: return emit_csv(report);
    case ReportFormat::Json: return emit_json(report);
    case ReportFormat::Markdown: return emit_markdown(report);
    }
    throw ConfigError("emit_report: unknown format");
}

BacktestReport parse_report_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BacktestReport r;
    r.assets = j.at("assets").get<std::vector<std::string>>();
    r.methods = j.at("methods").get<std::vector<std::string>>();
    r.ks = j.at("ks").get<std::vector<std::size_t>>();
    r.periods = j.at("periods").get<std::vector<std::string>>();
    for (const auto& jc : j.at("cells")) {
        BacktestCell c;
        c.method = jc.at("method").get<std::string>();
        c.k = jc.at("k").get<std::size_t>();
        c.period = jc.at("period").get<std::string>();
        c.months = jc.at("months").get<std::size_t>();
        c.error = jc.at("error").get<std::string>();
        if (c.error.empty()) {
            c.total_return = jc.at("total_return").get<double>();
            c.variance = jc.at("variance").get<double>();
            c.sharpe = sharpe_from_json(jc.at("sharpe"));
            c.support_size = jc.at("support_size").get<std::size_t>();
            c.holdings = jc.at("holdings").get<std::vector<double>>();
            if (jc.contains("sharpe_stddev"))
                c.sharpe_stddev = sharpe_from_json(jc.at("sharpe_stddev"));
        }
        r.cells.push_back(std::move(c));
    }
    return r;
}

std::string emit_penalty_plot_data(std::span<const double> a_values, double t_min,
                                   double t_max, std::size_t samples) {
    if (samples < 2) throw ConfigError("plot data: need at least 2 samples");
    if (!(t_max > t_min)) throw ConfigError("plot data: empty t range");
    std::ostringstream out;
    out << "a\tt\trho\n";
    for (double a : a_values) {
        const PenaltyParams params(a);
        for (std::size_t i = 0; i < samples; ++i) {
            const double t = t_min + (t_max - t_min) * static_cast<double>(i) /
                                         static_cast<double>(samples - 1);
            out << shortest(a) << '\t' << shortest(t) << '\t'
                << shortest(rho(params, t)) << '\n';
        }
    }
    return out.str();
}

} // namespace fracport
