#include "stripsplit/df_approx.hpp"

#include <stdexcept>

namespace stripsplit {

double satterthwaite(const std::vector<MsPoint>& points) {
  if (points.empty()) {
    throw std::invalid_argument("satterthwaite needs at least one mean square");
  }
  if (points.size() == 1) {
    // (MS)^2 / (MS^2/n) is n; return it without rounding error.
    return points.front().df;
  }
  double total = 0.0;
  double weighted = 0.0;
  for (const MsPoint& p : points) {
    total += p.ms;
    weighted += p.ms * p.ms / p.df;
  }
  if (total <= 0.0 || weighted <= 0.0) {
    throw std::invalid_argument(
        "satterthwaite needs a positive mean-square total");
  }
  return total * total / weighted;
}

double aw_rstar(int n1, int n2) {
  if (n1 < 1) {
    throw std::domain_error("aw_rstar: n1 must be a positive df");
  }
  if (n2 <= 4) {
    throw std::domain_error(
        "aw_rstar: needs n2 >= 5 (n2 - 4 appears in a denominator)");
  }
  const double num1 = static_cast<double>(n2) / (n2 - 2);
  const double num2 = 2.0 * (n1 + n2 - 2) / (static_cast<double>(n1) * (n2 - 4));
  return num1 * (num2 + 1.0);
}

double aw_f(const MsPoint& ms1, const MsPoint& ms2, double r) {
  if (ms1.ms <= 0.0 || ms2.ms <= 0.0) {
    throw std::invalid_argument("aw_f: mean squares must be positive");
  }
  if (r <= 0.0) {
    throw std::invalid_argument("aw_f: r must be positive");
  }
  const double phi2 = r * ms2.ms / ms1.ms;
  const double n1 = ms1.df;
  const double n2 = ms2.df;
  return (1.0 + phi2) * (1.0 + phi2) / (1.0 / n1 + phi2 * phi2 / n2);
}

AwPairResult aw_pair(const MsPoint& p, const MsPoint& q) {
  AwPairResult result;
  result.f_s = satterthwaite({p, q});

  bool domain_ok = true;
  auto estimate = [&](const MsPoint& first, const MsPoint& second,
                      int ordering) -> std::optional<AwEstimate> {
    try {
      const double r = aw_rstar(first.df, second.df);
      return AwEstimate{ordering, r, aw_f(first, second, r)};
    } catch (const std::domain_error&) {
      domain_ok = false;
      return std::nullopt;
    }
  };
  result.by_first = estimate(p, q, 0);
  result.by_second = estimate(q, p, 1);

  // Selection: the corrected estimate is meant to pull the df below the
  // Satterthwaite value, so an estimate below f_s is the trustworthy one.
  // Both below: take the larger. Exactly one below: take it. Neither below:
  // take the larger. Any undefined r*: no selection (Satterthwaite stays).
  if (domain_ok && result.by_first && result.by_second) {
    const AwEstimate& e1 = *result.by_first;
    const AwEstimate& e2 = *result.by_second;
    const bool below1 = e1.f_hat < result.f_s;
    const bool below2 = e2.f_hat < result.f_s;
    if (below1 != below2) {
      result.selected = below1 ? e1 : e2;
    } else {
      result.selected = e1.f_hat >= e2.f_hat ? e1 : e2;
    }
  }
  return result;
}

}  // namespace stripsplit
