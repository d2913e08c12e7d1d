#ifndef STRIPSPLIT_COMPARE_HPP
#define STRIPSPLIT_COMPARE_HPP

#include <vector>

#include "stripsplit/f_tests.hpp"
#include "stripsplit/layout.hpp"
#include "stripsplit/sums_of_squares.hpp"

namespace stripsplit {

// The same layout analyzed as a blocked three-way factorial: treatment rows
// R, A, B, AB, C, AC, BC, ABC keep their strip-split SS and df, and the four
// error lines pool into a single residual (SS = SS_eA + SS_eB + SS_eAB +
// SS_eT, df summed likewise). Every treatment F is MS over the pooled
// residual MS.
AnovaTable factorial_anova(const BalancedLayout& layout);

// The same layout analyzed as a split-split plot: identical to the
// strip-split table except that eB is absorbed into e_AB (SS = SS_eB +
// SS_eAB, df = (r-1)(b-1) + (a-1)(b-1)(r-1)). The reported F column puts
// every treatment MS over the subplot residual MS_eT, reproducing the
// reference analysis this library packages.
AnovaTable split_split_anova(const BalancedLayout& layout);

// F tests of the re-analysis tables (treatment sources only, fixed-effects
// reading, exact df).
std::vector<FTestResult> factorial_tests(const AnovaTable& table);
std::vector<FTestResult> split_split_tests(const AnovaTable& table);

// A source whose significance at alpha differs between the three analyses.
struct Divergence {
  SourceId source;
  bool strip_significant;
  bool factorial_significant;
  bool split_significant;
};

struct DesignComparison {
  double alpha;
  AnovaTable strip;
  AnovaTable factorial;
  AnovaTable split_split;
  std::vector<FTestResult> strip_tests;      // all-fixed strip-split plan
  std::vector<FTestResult> factorial_results;
  std::vector<FTestResult> split_results;
  std::vector<Divergence> divergences;       // treatment sources that flip
};

// Runs all three analyses on one layout (all-fixed reading throughout) and
// reports which treatment sources change significance at alpha. The three
// tables are regroupings of one orthogonal decomposition, so their total SS
// and df agree exactly.
DesignComparison compare_designs(const BalancedLayout& layout,
                                 double alpha = 0.05);

}  // namespace stripsplit

#endif
