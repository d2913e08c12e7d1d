#ifndef STRIPSPLIT_DF_APPROX_HPP
#define STRIPSPLIT_DF_APPROX_HPP

#include <optional>
#include <vector>

namespace stripsplit {

// One mean square together with its exact degrees of freedom.
struct MsPoint {
  double ms;
  int df;
};

// Satterthwaite effective df of a sum of mean squares:
// (sum MS_i)^2 / sum(MS_i^2 / n_i). A single point returns its own df
// exactly. Throws std::invalid_argument on an empty list or a nonpositive
// MS total.
double satterthwaite(const std::vector<MsPoint>& points);

// The tuning constant r* that minimizes the mean squared error of the
// reciprocal variance-ratio estimate used by aw_f:
// r* = n2/(n2-2) * (2(n1+n2-2)/(n1(n2-4)) + 1).
// Defined only for n2 >= 5; throws std::domain_error otherwise, which
// callers treat as "fall back to Satterthwaite".
double aw_rstar(int n1, int n2);

// The two-mean-square df estimate f(r) = (1 + phi2)^2 / (1/n1 + phi2^2/n2)
// with phi2 = r * ms2/ms1. At r = 1 this is exactly the Satterthwaite value
// of the pair; for any r it stays within [min(n1,n2), n1+n2].
double aw_f(const MsPoint& ms1, const MsPoint& ms2, double r);

// One evaluated ordering of a pair: which point served as MS1, the r* used,
// and the resulting df estimate.
struct AwEstimate {
  int ordering;   // 0: first argument was MS1; 1: second argument was MS1
  double r_used;
  double f_hat;
};

// Both orderings of the corrected estimate plus the selection among them.
// selected is empty when either ordering's r* is undefined (n2 <= 4); that
// is the signal to stay with plain Satterthwaite.
struct AwPairResult {
  std::optional<AwEstimate> by_first;   // first argument as MS1
  std::optional<AwEstimate> by_second;  // second argument as MS1
  std::optional<AwEstimate> selected;
  double f_s;  // Satterthwaite value of the pair, for reference
};

// Evaluates aw_f at each ordering's own r*. Selection: with both estimates
// available, prefer the one below f_s when exactly one is; otherwise take
// the larger. If either r* is undefined the result is a Satterthwaite
// fallback (both available estimates are still reported).
AwPairResult aw_pair(const MsPoint& p, const MsPoint& q);

}  // namespace stripsplit

#endif
