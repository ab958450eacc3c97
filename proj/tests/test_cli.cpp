#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "fracport/data.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("FRACPORT_CLI");
    REQUIRE_MESSAGE(p != nullptr, "FRACPORT_CLI must point at the built binary");
    return p;
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fracport_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

fs::path write_panel(const TempDir& dir, std::uint64_t seed, std::size_t n,
                     std::size_t months) {
    const auto panel = testsup::synth_panel(seed, n, {1971, 7}, months);
    const fs::path p = dir.path / "returns.csv";
    std::ofstream out(p);
    out << fracport::serialize_returns_csv(panel);
    return p;
}

} // namespace

TEST_CASE("missing data file exits 2") {
    TempDir dir;
    CHECK(run("solve --data " + (dir.path / "nope.csv").string() + " --k 3 --out " +
              (dir.path / "out").string()) == 2);
}

TEST_CASE("unknown config key exits 1") {
    TempDir dir;
    const fs::path cfg = dir.path / "bad.cfg";
    std::ofstream(cfg) << "frobnicate = 7\n";
    CHECK(run("solve --config " + cfg.string()) == 1);
}

TEST_CASE("solve with a target k writes a sparse solution") {
    TempDir dir;
    const fs::path data = write_panel(dir, 200, 48, 120);
    const fs::path out = dir.path / "out";
    CHECK(run("solve --data " + data.string() + " --k 8 --out " + out.string()) == 0);

    const auto j = nlohmann::json::parse(slurp(out / "solution.json"));
    CHECK(j.at("support_size").get<std::size_t>() <= 8);
    CHECK(j.at("weights").size() == 48);
    CHECK(fs::exists(out / "config.effective"));
}

TEST_CASE("lambda above the zero threshold yields the zero portfolio") {
    TempDir dir;
    const fs::path data = write_panel(dir, 201, 10, 60);
    const fs::path out = dir.path / "out";
    CHECK(run("solve --data " + data.string() + " --lambda 1e6 --out " +
              out.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(out / "solution.json"));
    CHECK(j.at("termination").get<std::string>() == "ZeroSolution");
    for (const auto& w : j.at("weights")) CHECK(w.get<double>() == 0.0);
}

TEST_CASE("selftest passes") {
    CHECK(run("selftest") == 0);
}

TEST_CASE("plot-data emits the tsv") {
    TempDir dir;
    const fs::path out = dir.path / "plots";
    CHECK(run("plot-data --out " + out.string() + " --samples 11") == 0);
    const std::string tsv = slurp(out / "penalty_plot.tsv");
    CHECK(tsv.rfind("a\tt\trho\n", 0) == 0);
}

TEST_CASE("backtest emits all three reports and reruns identically") {
    TempDir dir;
    const fs::path data = write_panel(dir, 202, 12, 96);
    const fs::path out1 = dir.path / "run1";
    const fs::path out2 = dir.path / "run2";
    const std::string plan =
        "197107-197306:197307-197406,197407-197506"; // 24-month estimation

    const fs::path cfg = dir.path / "run.cfg";
    std::ofstream(cfg) << "plan = " << plan << "\nmax_iters = 20000\n";

    const std::string base = "backtest --data " + data.string() +
                             " --config " + cfg.string() +
                             " --method markowitz,ifpt --k 3,4 --eta 50";
    CHECK(run(base + " --out " + out1.string()) == 0);
    CHECK(run(base + " --out " + out2.string()) == 0);

    for (const char* name : {"report.csv", "report.json", "report.md"}) {
        CHECK(fs::exists(out1 / name));
        CHECK(slurp(out1 / name) == slurp(out2 / name));
    }
    const std::string csv = slurp(out1 / "report.csv");
    CHECK(csv.find("07/73-06/74") != std::string::npos);
    CHECK(csv.find("ifpt,3,") != std::string::npos);
}

TEST_CASE("paper-default backtest emits six sub-periods plus the aggregate") {
    TempDir dir;
    const fs::path data = write_panel(dir, 204, 8, 420); // 07/1971 - 06/2006
    const fs::path out = dir.path / "out";
    CHECK(run("backtest --data " + data.string() + " --method markowitz --out " +
              out.string()) == 0);
    const std::string csv = slurp(out / "report.csv");
    for (const char* period : {"07/76-06/81", "07/81-06/86", "07/86-06/91",
                               "07/91-06/96", "07/96-06/01", "07/01-06/06",
                               "07/76-06/06"})
        CHECK(csv.find(period) != std::string::npos);
}

TEST_CASE("rerunning from the echoed config reproduces the outputs") {
    TempDir dir;
    const fs::path data = write_panel(dir, 203, 8, 72);
    const fs::path out = dir.path / "out";
    CHECK(run("solve --data " + data.string() + " --k 4 --eta 25 --out " +
              out.string()) == 0);
    const std::string solution1 = slurp(out / "solution.json");
    const std::string config1 = slurp(out / "config.effective");

    // second run driven purely by the echoed config
    CHECK(run("solve --config " + (out / "config.effective").string()) == 0);
    CHECK(slurp(out / "solution.json") == solution1);
    CHECK(slurp(out / "config.effective") == config1);
}
