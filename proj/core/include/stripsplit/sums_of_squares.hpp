#ifndef STRIPSPLIT_SUMS_OF_SQUARES_HPP
#define STRIPSPLIT_SUMS_OF_SQUARES_HPP

#include <array>
#include <vector>

#include "stripsplit/design.hpp"
#include "stripsplit/layout.hpp"

namespace stripsplit {

// One-dimensional operator applied along a single axis of the data array.
// Center is I - n^-1 J (subtract the axis mean), Average is n^-1 J (replace
// by the axis mean), Identity leaves the axis alone. Each is symmetric
// idempotent, so any Kronecker product of them is an orthogonal projector.
enum class FactorOp { Center, Average, Identity };

// The projector of a source as its four per-axis factors, in axis order
// (block, A, B, C).
struct ProjectorSpec {
  std::array<FactorOp, 4> ops;

  bool operator==(const ProjectorSpec&) const = default;
};

// The projector whose quadratic form is the source's sum of squares. For
// example R is (Center, Average, Average, Average) and ABC is (Average,
// Center, Center, Center). The residual uses (Center, Identity, Identity,
// Center), which is the form whose trace equals the residual df
// ab(c-1)(r-1) and whose quadratic form matches the direct residual formula.
ProjectorSpec projector(const DesignDims& dims, SourceId source);

// Rank of the assembled projector: the product over axes of n-1 (Center),
// 1 (Average) or n (Identity). Equals degrees_of_freedom for every source.
int projector_trace(const DesignDims& dims, const ProjectorSpec& spec);

// Sum of squares from the classical marginal-mean formulas: squared centered
// marginal means times the replication multiplier of the source (abc for R,
// bcr for A, c for eAB, ...). Deviations are accumulated directly rather
// than via differences of raw totals, to control cancellation.
double ss_direct(const BalancedLayout& layout, SourceId source);

// The same sum of squares as y'My with M the source's Kronecker projector,
// evaluated by applying each one-dimensional factor along its own axis
// (never materializing M). Since M is an orthogonal projector this is
// ||My||^2, which keeps the result nonnegative in floating point.
double ss_kronecker(const BalancedLayout& layout, SourceId source);

struct AnovaRow {
  SourceId source;
  int df;
  double ss;
  double ms;  // ss / df
};

// An analysis-of-variance decomposition. The strip-split analysis has the
// twelve rows in standard order; the re-analysis tables (factorial,
// split-split) carry fewer rows because errors are pooled. Row df always sum
// to rabc - 1 and row SS to the total corrected SS.
struct AnovaTable {
  DesignDims dims;
  std::vector<AnovaRow> rows;

  const AnovaRow& row(SourceId source) const;  // throws std::out_of_range
  bool has(SourceId source) const;
  double total_ss() const;
  int total_df() const;
};

// The full twelve-row strip-split decomposition of a layout.
AnovaTable anova_table(const BalancedLayout& layout);

}  // namespace stripsplit

#endif
