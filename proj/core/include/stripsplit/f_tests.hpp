#ifndef STRIPSPLIT_F_TESTS_HPP
#define STRIPSPLIT_F_TESTS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "stripsplit/df_approx.hpp"
#include "stripsplit/design.hpp"
#include "stripsplit/ems.hpp"
#include "stripsplit/sums_of_squares.hpp"

namespace stripsplit {

// What an F test rejects: a variance component being zero (random sources)
// or all fixed effects of a source being equal (fixed sources).
struct Hypothesis {
  enum class Kind { VarZero, EffectsZero };

  Kind kind;
  SourceId source;              // the tested source, in either case
  VarianceComponent component;  // meaningful for VarZero only

  static Hypothesis var_zero(SourceId source);
  static Hypothesis effects_zero(SourceId source);

  bool operator==(const Hypothesis&) const = default;
};

// One row of a test plan: F = (sum of numerator MS) / (sum of denominator
// MS). The lists are built so that the numerator EMS total minus the
// denominator EMS total is exactly the tested term, which verify_exactness
// checks symbolically.
struct FTestSpec {
  SourceId source;
  std::vector<SourceId> numerator;
  std::vector<SourceId> denominator;
  Hypothesis hypothesis;
};

// The eleven tests of a model variant, in table row order (every source
// except the residual, which has no test). The block test is
// (MS_R + MS_eAB)/(MS_eA + MS_eB) under every variant.
std::vector<FTestSpec> f_test_plan(const ModelVariant& model);

enum class DfMethodKind { Exact, Satterthwaite, AmesWebster };

struct DfMethod {
  DfMethodKind kind = DfMethodKind::Exact;
  // AmesWebster only: the r* used and which list entry served as MS1.
  double r_used = 0.0;
  int ordering = 0;
};

// An alternate df reading of one test: the corrected two-mean-square
// estimate applied to one side (the other side keeps its primary df), with
// the p-value recomputed. selected marks the ordering the selection rule
// picked for that side.
struct AlternateDf {
  int side;  // 0: numerator df replaced, 1: denominator df replaced
  DfMethod method;
  double df1;
  double df2;
  double p_value;
  bool selected;
};

struct FTestResult {
  SourceId source;
  double f_value;
  double df1;
  double df2;
  DfMethod df_method;  // Exact when both sides are single mean squares,
                       // Satterthwaite otherwise
  double p_value;      // upper-tail F probability at (f_value, df1, df2)
  std::vector<AlternateDf> alternates;
};

// Degenerate data: a denominator MS sum that is not strictly positive.
struct NonPositiveDenominator : std::runtime_error {
  explicit NonPositiveDenominator(SourceId source_);
  SourceId source;
};

// Evaluates a plan against a table. Sides with one mean square keep exact
// df; sides with several get Satterthwaite df; sides with exactly two
// additionally carry both orderings of the corrected estimate as
// alternates. Throws NonPositiveDenominator on degenerate input and
// std::out_of_range if the table lacks a needed source.
std::vector<FTestResult> evaluate(const std::vector<FTestSpec>& plan,
                                  const AnovaTable& table);

// Symbolic audit of one plan row that failed: the residual expression that
// remained instead of the tested term.
struct ExactnessViolation : std::runtime_error {
  ExactnessViolation(SourceId source_, const std::string& residual_);
  SourceId source;
  std::string residual;
};

struct ExactnessRow {
  SourceId source;
  bool exact;
  std::string residual;  // empty when exact; otherwise the excess terms
};

struct ExactnessReport {
  std::vector<ExactnessRow> rows;
  bool all_exact() const;
};

// For every test of the variant, forms numerator-EMS-sum minus
// denominator-EMS-sum and checks it equals exactly the tested term: the
// component's variance times its replication multiplier for a VarZero
// hypothesis, or the bare Q term for an EffectsZero hypothesis.
ExactnessReport verify_exactness(const ModelVariant& model,
                                 const DesignDims& dims);

// Same audit but throws ExactnessViolation at the first failure.
void require_exactness(const ModelVariant& model, const DesignDims& dims);

}  // namespace stripsplit

#endif
