#include "fracport/data.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "fracport/errors.hpp"

namespace fracport {

YearMonth YearMonth::parse(std::string_view s) {
    if (s.size() != 6) throw DataError("date stamp '" + std::string(s) + "' is not YYYYMM");
    int y = 0, m = 0;
    auto [p1, e1] = std::from_chars(s.data(), s.data() + 4, y);
    auto [p2, e2] = std::from_chars(s.data() + 4, s.data() + 6, m);
    if (e1 != std::errc{} || e2 != std::errc{} || p1 != s.data() + 4 ||
        p2 != s.data() + 6 || m < 1 || m > 12)
        throw DataError("date stamp '" + std::string(s) + "' is not YYYYMM");
    return {y, m};
}

std::string YearMonth::str() const {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%04d%02d", year, month);
    return buf;
}

YearMonth YearMonth::plus_months(int m) const {
    const int total = year * 12 + (month - 1) + m;
    const int y = total >= 0 ? total / 12 : (total - 11) / 12;
    return {y, total - y * 12 + 1};
}

int YearMonth::months_since(const YearMonth& other) const {
    return (year - other.year) * 12 + (month - other.month);
}

std::size_t Window::months() const {
    const int m = end.months_since(start);
    if (m < 0)
        throw DataError("window " + start.str() + ".." + end.str() + " is reversed");
    return static_cast<std::size_t>(m) + 1;
}

std::size_t ReturnsPanel::row_of(const YearMonth& ym) const {
    if (dates.empty() || ym < dates.front() || ym > dates.back())
        throw DataError("month " + ym.str() + " outside panel range " +
                        (dates.empty() ? "<empty>" : dates.front().str() + ".." + dates.back().str()));
    return static_cast<std::size_t>(ym.months_since(dates.front()));
}

bool ReturnsPanel::has_missing() const {
    for (double v : values.data)
        if (std::isnan(v)) return true;
    return false;
}

ReturnsPanel ReturnsPanel::drop_assets_with_missing(const Window& w) const {
    const std::size_t r0 = row_of(w.start), r1 = row_of(w.end);
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < n_assets(); ++c) {
        bool ok = true;
        for (std::size_t r = r0; r <= r1 && ok; ++r)
            if (std::isnan(values(r, c))) ok = false;
        if (ok) keep.push_back(c);
    }
    ReturnsPanel out;
    out.dates = dates;
    for (std::size_t c : keep) out.assets.push_back(assets[c]);
    out.values = Matrix(months(), keep.size());
    for (std::size_t r = 0; r < months(); ++r)
        for (std::size_t j = 0; j < keep.size(); ++j)
            out.values(r, j) = values(r, keep[j]);
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(pos));
            break;
        }
        cells.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return cells;
}

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    while (!s.empty() && !notspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && !notspace(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
}

bool is_missing_sentinel(double v) { return v == -99.99 || v == -999.0; }

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    std::ostringstream msg;
    msg << "returns csv, line " << line_no << ": " << what;
    throw DataError(msg.str());
}

} // namespace

ReturnsPanel parse_returns_csv(std::istream& in, MissingPolicy policy) {
    ReturnsPanel panel;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw DataError("returns csv: empty input");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.size() < 2) fail(line_no, "header must name a date column and at least one asset");
    for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string name = trim(header[c]);
        if (name.empty()) fail(line_no, "empty asset name in header");
        panel.assets.push_back(name);
    }
    const std::size_t n = panel.assets.size();

    std::vector<double> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != n + 1)
            fail(line_no, "row has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(n + 1));

        YearMonth ym;
        try {
            ym = YearMonth::parse(trim(cells[0]));
        } catch (const DataError& e) {
            fail(line_no, e.what());
        }
        if (!panel.dates.empty()) {
            const YearMonth expect = panel.dates.back().plus_months(1);
            if (ym == panel.dates.back() || ym < panel.dates.back())
                fail(line_no, "date " + ym.str() + " does not increase after " +
                                  panel.dates.back().str());
            if (ym != expect)
                fail(line_no, "month gap: " + panel.dates.back().str() + " followed by " +
                                  ym.str());
        }
        panel.dates.push_back(ym);

        for (std::size_t c = 1; c <= n; ++c) {
            const std::string cell = trim(cells[c]);
            char* endp = nullptr;
            const double v = std::strtod(cell.c_str(), &endp);
            if (cell.empty() || endp != cell.c_str() + cell.size())
                fail(line_no, "non-numeric cell '" + cell + "' (asset " +
                                  panel.assets[c - 1] + ")");
            if (is_missing_sentinel(v)) {
                if (policy == MissingPolicy::Error)
                    fail(line_no, "missing-value sentinel " + cell + " (asset " +
                                      panel.assets[c - 1] + ")");
                rows.push_back(std::nan(""));
            } else {
                rows.push_back(v / 100.0);
            }
        }
    }
    if (panel.dates.empty()) throw DataError("returns csv: no data rows");

    panel.values = Matrix(panel.dates.size(), n);
    panel.values.data = std::move(rows);
    return panel;
}

ReturnsPanel parse_returns_csv_file(const std::string& path, MissingPolicy policy) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open returns file: " + path);
    try {
        return parse_returns_csv(in, policy);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

namespace {

/// Shortest decimal text of the percent value whose parse (/100) recovers v
/// exactly. v*100 is not always that value in binary; nudge by ulps until
/// division lands back on v (at most a couple of steps).
std::string percent_text(double v) {
    if (std::isnan(v)) return "-99.99"; // missing cell round-trips as the FF sentinel
    double t = v * 100.0;
    if (t / 100.0 != v) {
        const double dir = t / 100.0 < v ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
        for (int step = 0; step < 8 && t / 100.0 != v; ++step)
            t = std::nextafter(t, dir);
    }
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), t);
    (void)ec;
    return std::string(buf, p);
}

} // namespace

std::string serialize_returns_csv(const ReturnsPanel& panel) {
    std::ostringstream out;
    out << "Date";
    for (const auto& a : panel.assets) out << ',' << a;
    out << '\n';
    for (std::size_t r = 0; r < panel.months(); ++r) {
        out << panel.dates[r].str();
        for (std::size_t c = 0; c < panel.n_assets(); ++c)
            out << ',' << percent_text(panel.values(r, c));
        out << '\n';
    }
    return out.str();
}

double compute_beta(const ReturnsPanel& panel, const Window& w) {
    if (w.months() == 0) throw DataError("compute_beta: empty window");
    const std::size_t r0 = panel.row_of(w.start), r1 = panel.row_of(w.end);
    const std::size_t n = panel.n_assets();
    double acc = 0.0;
    for (std::size_t r = r0; r <= r1; ++r) {
        double rowsum = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double v = panel.values(r, c);
            if (std::isnan(v))
                throw DataError("compute_beta: missing value in window at " +
                                panel.dates[r].str());
            rowsum += v;
        }
        acc += rowsum / static_cast<double>(n);
    }
    return acc / static_cast<double>(r1 - r0 + 1);
}

Matrix slice_window(const ReturnsPanel& panel, const Window& w) {
    const std::size_t r0 = panel.row_of(w.start), r1 = panel.row_of(w.end);
    Matrix out(r1 - r0 + 1, panel.n_assets());
    for (std::size_t r = r0; r <= r1; ++r)
        for (std::size_t c = 0; c < panel.n_assets(); ++c)
            out(r - r0, c) = panel.values(r, c);
    return out;
}

Window WindowPlan::estimation_for(std::size_t sub_period) const {
    if (sub_period >= evaluation.size())
        throw ConfigError("window plan: sub-period index out of range");
    if (!rolling) return estimation;
    const YearMonth end = evaluation[sub_period].start.plus_months(-1);
    return {end.plus_months(-(estimation_months - 1)), end};
}

void WindowPlan::validate() const {
    if (evaluation.empty()) throw ConfigError("window plan: no evaluation sub-periods");
    if (estimation_months < 2) throw ConfigError("window plan: estimation too short");
    for (std::size_t i = 0; i < evaluation.size(); ++i) {
        if (evaluation[i].end < evaluation[i].start)
            throw ConfigError("window plan: reversed evaluation window");
        if (i > 0 && !(evaluation[i - 1].end < evaluation[i].start))
            throw ConfigError("window plan: evaluation sub-periods overlap or disorder");
        const Window est = estimation_for(i);
        if (!(est.end < evaluation[i].start))
            throw ConfigError("window plan: estimation window overlaps evaluation");
    }
}

WindowPlan WindowPlan::paper_default(bool rolling) {
    WindowPlan plan;
    plan.rolling = rolling;
    plan.estimation_months = 60;
    plan.estimation = {{1971, 7}, {1976, 6}};
    for (int i = 0; i < 6; ++i) {
        const YearMonth start = YearMonth{1976, 7}.plus_months(60 * i);
        plan.evaluation.push_back({start, start.plus_months(59)});
    }
    return plan;
}

} // namespace fracport
