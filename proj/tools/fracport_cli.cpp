// Command-line front end: solve, backtest, selftest, plot-data.
// Runs are driven by a flat key = value config file plus flag overrides;
// the effective config is echoed into the output directory so a run can be
// reproduced from it alone.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracport/backtest.hpp"
#include "fracport/baselines.hpp"
#include "fracport/errors.hpp"
#include "fracport/infpt.hpp"
#include "fracport/kernels.hpp"
#include "fracport/oracle.hpp"

namespace fs = std::filesystem;
using namespace fracport;

namespace {

struct RunConfig {
    std::string data;
    std::string plan = "paper-default";
    std::vector<std::string> methods = {"ifpt"};
    double a = 1.0;
    double eta = 100.0;
    double epsilon = 0.01;
    std::optional<double> lam;   // fixed-lambda mode
    std::vector<std::size_t> ks; // target-sparsity mode
    double tol_x = 0.0;
    double tol_obj = 1e-12;
    std::size_t max_iters = 50000;
    std::string out = "out";
    std::uint64_t seed = 42;
    bool fixed_estimation = false;
    bool drop_missing_assets = false;
    bool sharpe_stddev = false;
    bool compound_returns = false;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
            item.erase(item.begin());
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
            item.pop_back();
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse number '" + v + "'");
    }
}

std::size_t parse_size(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d)))
        throw ConfigError("config key '" + key + "': expected nonnegative integer, got '" + v + "'");
    return static_cast<std::size_t>(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "data") cfg.data = value;
    else if (key == "plan") cfg.plan = value;
    else if (key == "methods") cfg.methods = split_list(value);
    else if (key == "a") cfg.a = parse_double(key, value);
    else if (key == "eta") cfg.eta = parse_double(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "lambda") cfg.lam = parse_double(key, value);
    else if (key == "k") {
        cfg.ks.clear();
        for (const auto& item : split_list(value)) cfg.ks.push_back(parse_size(key, item));
    } else if (key == "tol_x") cfg.tol_x = parse_double(key, value);
    else if (key == "tol_obj") cfg.tol_obj = parse_double(key, value);
    else if (key == "max_iters") cfg.max_iters = parse_size(key, value);
    else if (key == "out") cfg.out = value;
    else if (key == "seed") cfg.seed = parse_size(key, value);
    else if (key == "fixed_estimation") cfg.fixed_estimation = parse_bool(key, value);
    else if (key == "drop_missing_assets") cfg.drop_missing_assets = parse_bool(key, value);
    else if (key == "sharpe_stddev") cfg.sharpe_stddev = parse_bool(key, value);
    else if (key == "compound_returns") cfg.compound_returns = parse_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        auto trim = [](std::string s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
                s.erase(s.begin());
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
                s.pop_back();
            return s;
        };
        apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

std::string effective_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    auto num = [](double v) {
        char buf[40];
        auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        (void)ec;
        return std::string(buf, p);
    };
    out << "data = " << cfg.data << '\n';
    out << "plan = " << cfg.plan << '\n';
    out << "methods = ";
    for (std::size_t i = 0; i < cfg.methods.size(); ++i)
        out << (i ? "," : "") << cfg.methods[i];
    out << '\n';
    out << "a = " << num(cfg.a) << '\n';
    out << "eta = " << num(cfg.eta) << '\n';
    out << "epsilon = " << num(cfg.epsilon) << '\n';
    if (cfg.lam) out << "lambda = " << num(*cfg.lam) << '\n';
    if (!cfg.ks.empty()) {
        out << "k = ";
        for (std::size_t i = 0; i < cfg.ks.size(); ++i)
            out << (i ? "," : "") << cfg.ks[i];
        out << '\n';
    }
    out << "tol_x = " << num(cfg.tol_x) << '\n';
    out << "tol_obj = " << num(cfg.tol_obj) << '\n';
    out << "max_iters = " << cfg.max_iters << '\n';
    out << "out = " << cfg.out << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "fixed_estimation = " << (cfg.fixed_estimation ? "true" : "false") << '\n';
    out << "drop_missing_assets = " << (cfg.drop_missing_assets ? "true" : "false") << '\n';
    out << "sharpe_stddev = " << (cfg.sharpe_stddev ? "true" : "false") << '\n';
    out << "compound_returns = " << (cfg.compound_returns ? "true" : "false") << '\n';
    return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

void echo_config(const RunConfig& cfg) {
    fs::create_directories(cfg.out);
    write_file(fs::path(cfg.out) / "config.effective", effective_config_text(cfg));
}

SolverConfig solver_config(const RunConfig& cfg, std::size_t k) {
    SolverConfig s;
    s.a = cfg.a;
    s.eta = cfg.eta;
    s.epsilon = cfg.epsilon;
    s.tol_x = cfg.tol_x;
    s.tol_obj = cfg.tol_obj;
    s.max_iters = cfg.max_iters;
    if (k > 0) {
        s.mode = SolverMode::TargetSparsity;
        s.target_support = k;
    } else if (cfg.lam) {
        s.mode = SolverMode::FixedLambda;
        s.lam = *cfg.lam;
    } else {
        throw ConfigError("specify either a fixed lambda or a target k");
    }
    return s;
}

WindowPlan plan_from_config(const RunConfig& cfg) {
    if (cfg.plan == "paper-default")
        return WindowPlan::paper_default(!cfg.fixed_estimation);
    // explicit form: ESTSTART-ESTEND:EV1START-EV1END,EV2START-EV2END,...
    const auto colon = cfg.plan.find(':');
    if (colon == std::string::npos)
        throw ConfigError("plan must be 'paper-default' or "
                          "'YYYYMM-YYYYMM:YYYYMM-YYYYMM,...'");
    auto parse_window = [](const std::string& s) {
        const auto dash = s.find('-');
        if (dash == std::string::npos)
            throw ConfigError("plan window '" + s + "' is not YYYYMM-YYYYMM");
        return Window{YearMonth::parse(s.substr(0, dash)),
                      YearMonth::parse(s.substr(dash + 1))};
    };
    WindowPlan plan;
    plan.estimation = parse_window(cfg.plan.substr(0, colon));
    plan.estimation_months = static_cast<int>(plan.estimation.months());
    plan.rolling = !cfg.fixed_estimation;
    for (const auto& item : split_list(cfg.plan.substr(colon + 1)))
        plan.evaluation.push_back(parse_window(item));
    plan.validate();
    return plan;
}

ReturnsPanel load_panel(const RunConfig& cfg) {
    if (cfg.data.empty()) throw ConfigError("no data file given (--data or config)");
    const MissingPolicy policy =
        cfg.drop_missing_assets ? MissingPolicy::DropAssets : MissingPolicy::Error;
    ReturnsPanel panel = parse_returns_csv_file(cfg.data, policy);
    if (cfg.drop_missing_assets && panel.has_missing())
        panel = panel.drop_assets_with_missing({panel.dates.front(), panel.dates.back()});
    return panel;
}

nlohmann::json solution_json(const PortfolioProblem& problem, const RunConfig& cfg,
                             const std::string& method, const SolveResult& result,
                             double lam_used) {
    nlohmann::json j;
    j["method"] = method;
    j["weights"] = result.x;
    j["support"] = result.support;
    j["support_size"] = result.support.size();
    j["iterations"] = result.iterations;
    j["termination"] = to_string(result.termination);
    j["objective_trace"] = result.objective_trace;
    j["lambda_trace"] = result.lambda_trace;
    j["lambda_bar"] = lambda_bar(problem, cfg.a, cfg.eta);

    const ObjectiveParams params(cfg.a, lam_used, cfg.eta);
    const auto fo = check_first_order(problem, params, result.x, 1e-4);
    j["diagnostics"]["first_order_max_residual"] = fo.max_residual;
    j["diagnostics"]["first_order_pass"] = fo.pass;
    const auto bounds = check_bounds(problem, params, result.x);
    j["diagnostics"]["lower_bound_pass"] = bounds.lower_pass;
    j["diagnostics"]["upper_bound_applicable"] = bounds.upper_applicable;
    j["diagnostics"]["upper_bound_pass"] = bounds.upper_pass;
    return j;
}

int cmd_solve(const RunConfig& cfg) {
    if (cfg.ks.size() > 1)
        throw ConfigError("solve takes a single target k (got a list)");
    echo_config(cfg);
    ReturnsPanel panel = load_panel(cfg);
    const Window whole{panel.dates.front(), panel.dates.back()};
    const double beta = compute_beta(panel, whole);
    const PortfolioProblem problem = build_problem(slice_window(panel, whole), beta);

    const std::string method = cfg.methods.empty() ? "ifpt" : cfg.methods.front();
    const std::size_t k = cfg.ks.empty() ? 0 : cfg.ks.front();

    nlohmann::json j;
    if (method == "ifpt" || method == "infpt") {
        const SolverConfig solver = solver_config(cfg, k);
        if (method == "ifpt") {
            const SolveResult result = ifpt_solve(problem, solver);
            const double lam_used =
                result.lambda_trace.empty() ? solver.lam : result.lambda_trace.back();
            j = solution_json(problem, cfg, method, result, lam_used);
        } else {
            const NonnegSolveResult result = infpt_solve(problem, solver);
            const double lam_used =
                result.lambda_trace.empty() ? solver.lam : result.lambda_trace.back();
            j = solution_json(problem, cfg, method, result, lam_used);
            j["feasibility_violation"] = result.feasibility_violation;
        }
    } else if (method == "markowitz") {
        BaselineResult r = markowitz_equality(problem);
        j["method"] = method;
        j["weights"] = r.x;
        j["support"] = r.support;
        j["support_size"] = r.support.size();
        j["objective"] = r.objective;
    } else if (method == "l1") {
        if (!cfg.lam) throw ConfigError("l1 solve needs a fixed lambda");
        BaselineResult r = l1_penalized(problem, *cfg.lam, cfg.eta, cfg.max_iters, cfg.tol_x);
        j["method"] = method;
        j["weights"] = r.x;
        j["support"] = r.support;
        j["support_size"] = r.support.size();
        j["objective"] = r.objective;
    } else {
        throw ConfigError("unknown method '" + method + "'");
    }
    j["beta"] = beta;
    j["n_assets"] = problem.assets();
    j["months"] = problem.periods();

    write_file(fs::path(cfg.out) / "solution.json", j.dump(2) + "\n");
    std::cout << "wrote " << (fs::path(cfg.out) / "solution.json").string() << "\n";
    return 0;
}

int cmd_backtest(const RunConfig& cfg) {
    echo_config(cfg);
    ReturnsPanel panel = load_panel(cfg);
    WindowPlan plan = plan_from_config(cfg);

    BacktestConfig bt;
    bt.methods = cfg.methods;
    bt.ks = cfg.ks;
    bool needs_solver = false;
    for (const auto& m : cfg.methods)
        if (m == "ifpt" || m == "infpt" || m == "l1") needs_solver = true;
    if (needs_solver) {
        bt.solver = cfg.ks.empty() ? solver_config(cfg, 0)
                                   : solver_config(cfg, cfg.ks.front());
    } else {
        bt.solver.a = cfg.a;
        bt.solver.eta = cfg.eta;
        bt.solver.epsilon = cfg.epsilon;
    }
    bt.sharpe_stddev_also = cfg.sharpe_stddev;
    bt.compound_returns = cfg.compound_returns;

    const BacktestReport report = run_backtest(panel, plan, bt);
    write_file(fs::path(cfg.out) / "report.csv", emit_report(report, ReportFormat::Csv));
    write_file(fs::path(cfg.out) / "report.json", emit_report(report, ReportFormat::Json));
    write_file(fs::path(cfg.out) / "report.md", emit_report(report, ReportFormat::Markdown));
    std::cout << "wrote report.{csv,json,md} under " << cfg.out << "\n";

    std::size_t failed = 0;
    for (const auto& c : report.cells)
        if (!c.error.empty()) ++failed;
    if (failed > 0)
        std::cerr << "warning: " << failed << " cells recorded solver failures\n";
    return 0;
}

int cmd_plot_data(const RunConfig& cfg, std::vector<double> a_values, double t_min,
                  double t_max, std::size_t samples) {
    echo_config(cfg);
    if (a_values.empty()) a_values = {0.5, 1.0, 2.0, 5.0, 10.0};
    const std::string tsv = emit_penalty_plot_data(a_values, t_min, t_max, samples);
    write_file(fs::path(cfg.out) / "penalty_plot.tsv", tsv);
    std::cout << "wrote " << (fs::path(cfg.out) / "penalty_plot.tsv").string() << "\n";
    return 0;
}

int cmd_selftest(const RunConfig& cfg) {
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    std::mt19937_64 rng(cfg.seed);
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::printf("%-34s %s%s%s\n", name.c_str(), ok ? "pass" : "FAIL",
                    detail.empty() ? "" : "  ", detail.c_str());
        if (!ok) ++failures;
    };

    {
        std::uniform_real_distribution<double> ua(0.1, 10.0), ul(1e-4, 10.0), ug(-5.0, 5.0);
        double worst = 0.0;
        bool ok = true;
        for (int trial = 0; trial < 1000; ++trial) {
            const ProxParams params(ua(rng), ul(rng));
            const double gamma = ug(rng);
            const double closed = prox_scalar(params, gamma);
            const double oracle = prox_oracle(params, gamma, 1.0, 1e-3);
            const double gap = prox_objective(params, gamma, closed) -
                               prox_objective(params, gamma, oracle);
            worst = std::max(worst, gap);
            if (gap > 1e-9) ok = false;
        }
        std::ostringstream d;
        d << "worst objective gap " << worst;
        report("prox closed form vs brute force", ok, d.str());
    }

    {
        bool ok = true;
        for (double a : {0.1, 1.0, 10.0}) {
            const double lam = 1.0 / (a * a);
            const double t1 = lam * a / 2.0;
            const double t2 = std::sqrt(lam) - 1.0 / (2.0 * a);
            if (std::fabs(t1 - t2) > 1e-12) ok = false;
        }
        report("threshold continuity at lam=1/a^2", ok, "");
    }

    {
        // small synthetic target-sparsity solve
        const std::size_t n = 20, t = 40, r = 4;
        std::normal_distribution<double> gauss(0.0, 0.05);
        Matrix returns(t, n);
        for (auto& v : returns.data) v = 0.01 + gauss(rng);
        PortfolioProblem problem = build_problem(returns, 0.01);
        SolverConfig solver = SolverConfig::target_sparsity(r, cfg.a, cfg.eta);
        const SolveResult res = ifpt_solve(problem, solver);
        const bool ok = res.support.size() <= r && !res.x.empty();
        std::ostringstream d;
        d << "support " << res.support.size() << ", " << to_string(res.termination)
          << " after " << res.iterations << " iters";
        report("synthetic target-sparsity solve", ok, d.str());
    }

    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - started);
    std::printf("selftest %s in %.1fs (kernel backend: %s)\n",
                failures == 0 ? "passed" : "FAILED",
                static_cast<double>(elapsed.count()) / 1000.0,
                kernels::name(kernels::active_backend()));
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse mean-variance portfolios via the fraction penalty"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string method_flag;
    std::string k_flag;
    std::optional<double> lam_flag, a_flag, eta_flag, eps_flag;
    std::optional<std::uint64_t> seed_flag;
    std::string data_flag, out_flag;
    bool fixed_est_flag = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--data", data_flag, "monthly returns csv");
        sub->add_option("--out", out_flag, "output directory");
        sub->add_option("--method", method_flag, "ifpt|infpt|markowitz|l1 (comma list for backtest)");
        sub->add_option("--k", k_flag, "target number of assets (comma list for backtest)");
        sub->add_option("--lambda", lam_flag, "fixed regularization level");
        sub->add_option("--a", a_flag, "fraction penalty shape parameter");
        sub->add_option("--eta", eta_flag, "constraint penalty weight");
        sub->add_option("--epsilon", eps_flag, "step-size safety margin in (0,1)");
        sub->add_option("--seed", seed_flag, "seed for synthetic generators");
        sub->add_flag("--fixed-estimation", fixed_est_flag,
                      "reuse the first estimation window for every sub-period");
    };

    auto* solve = app.add_subcommand("solve", "solve one problem from a returns file");
    auto* backtest = app.add_subcommand("backtest", "rolling out-of-sample evaluation");
    auto* selftest = app.add_subcommand("selftest", "run built-in numerical checks");
    auto* plotdata = app.add_subcommand("plot-data", "emit (a, t, rho_a(t)) samples as TSV");
    for (auto* sub : {solve, backtest, selftest, plotdata}) add_common(sub);

    std::vector<double> plot_a;
    double plot_tmin = -5.0, plot_tmax = 5.0;
    std::size_t plot_samples = 201;
    plotdata->add_option("--plot-a", plot_a, "penalty shape values to sample");
    plotdata->add_option("--t-min", plot_tmin, "left end of the t range");
    plotdata->add_option("--t-max", plot_tmax, "right end of the t range");
    plotdata->add_option("--samples", plot_samples, "samples per a value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) load_config_file(cfg, config_path);
        if (!data_flag.empty()) cfg.data = data_flag;
        if (!out_flag.empty()) cfg.out = out_flag;
        if (!method_flag.empty()) cfg.methods = split_list(method_flag);
        if (!k_flag.empty()) apply_key(cfg, "k", k_flag);
        if (lam_flag) cfg.lam = *lam_flag;
        if (a_flag) cfg.a = *a_flag;
        if (eta_flag) cfg.eta = *eta_flag;
        if (eps_flag) cfg.epsilon = *eps_flag;
        if (seed_flag) cfg.seed = *seed_flag;
        if (fixed_est_flag) cfg.fixed_estimation = true;

        if (app.got_subcommand(solve)) return cmd_solve(cfg);
        if (app.got_subcommand(backtest)) return cmd_backtest(cfg);
        if (app.got_subcommand(selftest)) return cmd_selftest(cfg);
        if (app.got_subcommand(plotdata))
            return cmd_plot_data(cfg, plot_a, plot_tmin, plot_tmax, plot_samples);
        throw ConfigError("no subcommand");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (...) {
        std::cerr << "error: unknown failure\n";
        return 3;
    }
}
