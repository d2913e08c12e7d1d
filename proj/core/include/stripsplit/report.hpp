#ifndef STRIPSPLIT_REPORT_HPP
#define STRIPSPLIT_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "stripsplit/compare.hpp"
#include "stripsplit/ems.hpp"
#include "stripsplit/f_tests.hpp"
#include "stripsplit/simulator.hpp"
#include "stripsplit/sums_of_squares.hpp"

namespace stripsplit {

enum class OutputFormat { Text, Csv, Json };

OutputFormat parse_format(std::string_view name);  // "text" | "csv" | "json"

// A bare ANOVA table: aligned columns in text, source/df/ss/ms rows in CSV
// and JSON. CSV and JSON carry full-precision numbers (shortest round-trip
// decimals); text rounds for reading.
std::string render_table(const AnovaTable& table, OutputFormat format);

// ANOVA table joined with its F tests: adds F, df1, df2, df method, p and a
// significance marker at alpha. Sources without a test leave those columns
// empty. Text output also lists the alternate df readings beneath the
// table.
std::string render_analysis(const AnovaTable& table,
                            const std::vector<FTestResult>& results,
                            double alpha, OutputFormat format);

// The twelve expected mean squares of a variant; numeric coefficients when
// dims are given, symbolic letters otherwise.
std::string render_ems(const ModelVariant& model,
                       const std::optional<DesignDims>& dims,
                       OutputFormat format);

// The Monte Carlo EMS audit: per source, mean MS, predicted EMS, MC
// standard error and the deviation in SE units.
std::string render_ems_check(const std::vector<EmsCheckRow>& rows,
                             OutputFormat format);

// The three-design comparison: each table with its F column plus the
// divergence summary.
std::string render_comparison(const DesignComparison& cmp,
                              OutputFormat format);

}  // namespace stripsplit

#endif
