#ifndef FRACPORT_DATA_HPP
#define FRACPORT_DATA_HPP

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fracport/linalg.hpp"

namespace fracport {

/// Calendar month, parsed from/formatted as "YYYYMM".
struct YearMonth {
    int year = 0;
    int month = 1; // 1..12

    static YearMonth parse(std::string_view s); // throws DataError
    std::string str() const;

    YearMonth plus_months(int m) const;
    /// this - other, in months
    int months_since(const YearMonth& other) const;

    auto operator<=>(const YearMonth&) const = default;
};

/// Inclusive month range.
struct Window {
    YearMonth start;
    YearMonth end;

    std::size_t months() const; // throws DataError if end < start
};

enum class MissingPolicy {
    Error,      ///< any missing sentinel aborts parsing
    DropAssets, ///< missing cells kept as NaN; drop columns later per window
};

/// Dated monthly return panel. Values are simple returns in decimal units
/// (the CSV carries percents; parsing divides by 100). Dates are strictly
/// consecutive months. Immutable in practice: operations return new panels.
struct ReturnsPanel {
    std::vector<YearMonth> dates;
    std::vector<std::string> assets;
    Matrix values; ///< T x n, NaN marks a missing cell under DropAssets

    std::size_t months() const { return dates.size(); }
    std::size_t n_assets() const { return assets.size(); }

    /// Row index of the given month; throws DataError if outside the panel.
    std::size_t row_of(const YearMonth& ym) const;

    bool has_missing() const;

    /// Copy without the assets that have any missing value inside `w`.
    ReturnsPanel drop_assets_with_missing(const Window& w) const;
};

/// Parse the monthly returns CSV: header "Date,NAME1,...,NAMEn", then rows
/// "YYYYMM,v1,...,vn" with values in percent. The Fama-French missing
/// sentinels -99.99 and -999 are treated as missing cells. All structural
/// errors (malformed date, ragged row, non-numeric cell, month gap) carry
/// 1-based line numbers.
ReturnsPanel parse_returns_csv(std::istream& in,
                               MissingPolicy policy = MissingPolicy::Error);
ReturnsPanel parse_returns_csv_file(const std::string& path,
                                    MissingPolicy policy = MissingPolicy::Error);

/// Inverse of parse_returns_csv: emits percent values such that parsing the
/// output reproduces the panel bit-for-bit.
std::string serialize_returns_csv(const ReturnsPanel& panel);

/// Equal-weight portfolio's average monthly return over the window:
/// mean over months of (1/n) sum_i r_it. This is the per-period target
/// return beta used throughout.
double compute_beta(const ReturnsPanel& panel, const Window& w);

/// Contiguous row slice of the panel values for the window.
Matrix slice_window(const ReturnsPanel& panel, const Window& w);

/// Evaluation sub-periods plus the rule for their estimation windows.
/// With rolling = true each sub-period is estimated on the
/// `estimation_months` months immediately preceding it; with
/// rolling = false every sub-period reuses the fixed `estimation` window.
struct WindowPlan {
    Window estimation; ///< estimation window of the first sub-period
    std::vector<Window> evaluation;
    bool rolling = true;
    int estimation_months = 60;

    Window estimation_for(std::size_t sub_period) const;
    void validate() const; // non-overlap and ordering; throws ConfigError

    /// Six 5-year evaluation sub-periods covering 07/1976 - 06/2006, each
    /// estimated on the preceding 60 months (07/1971 - 06/1976 for the
    /// first).
    static WindowPlan paper_default(bool rolling = true);
};

} // namespace fracport

#endif
