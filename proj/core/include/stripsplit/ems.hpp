#ifndef STRIPSPLIT_EMS_HPP
#define STRIPSPLIT_EMS_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stripsplit/design.hpp"

namespace stripsplit {

// The variance sigma^2 of one random term of the model, one per source.
enum class VarianceComponent { R, A, eA, B, eB, AB, eAB, C, AC, BC, ABC, eT };

std::string_view component_name(VarianceComponent comp);  // "s2_eAB" style
VarianceComponent parse_component(std::string_view name);
VarianceComponent component_of(SourceId source);
SourceId source_of(VarianceComponent comp);

// A coefficient that is a product of a subset of the four dimension counts,
// e.g. bcr or ac or the empty product 1. Stored as a bitmask over (r,a,b,c).
struct CoefMask {
  unsigned bits = 0;

  bool operator==(const CoefMask&) const = default;
  auto operator<=>(const CoefMask&) const = default;
};

// Builds a mask from dimension letters, e.g. coef("bcr"), coef("ac"),
// coef("") for the unit coefficient. Throws std::invalid_argument on other
// characters.
CoefMask coef(std::string_view letters);
int coef_value(CoefMask mask, const DesignDims& dims);
std::string coef_symbol(CoefMask mask);  // letters in a,b,c,r order; "1" if empty

// The replication multiplier of a source: the coefficient its own variance
// component carries in its EMS, which is also the multiplier of its direct
// sum-of-squares formula (abc for R, bcr for A, ..., 1 for eT).
CoefMask source_multiplier(SourceId source);

// A fixed-effect quadratic term Q(S): the df-normalized sum of squared fixed
// effects of source S (with any interaction means folded in). Opaque to the
// algebra here; all a test plan needs is that Q(S) is nonnegative and zero
// exactly under S's null hypothesis.
struct QTerm {
  SourceId owner;

  bool operator==(const QTerm&) const = default;
  auto operator<=>(const QTerm&) const = default;
};

// A symbolic expected mean square: for each variance component, the signed
// multiset of product coefficients it carries, plus a signed multiset of Q
// terms. A single table entry has every multiplicity equal to one and at
// most one Q term; sums and differences of entries can hold larger or
// negative multiplicities. dims is attached when known so the expression can
// be evaluated numerically.
struct EmsExpression {
  std::map<VarianceComponent, std::map<CoefMask, int>> var_coeffs;
  std::map<QTerm, int> q_terms;
  std::optional<DesignDims> dims;

  bool empty() const;
  // Numeric coefficient of one component; requires dims.
  int coefficient(VarianceComponent comp) const;
  bool has_q(SourceId owner) const;
  // Term-by-term equality, ignoring the attached dims.
  bool same_terms(const EmsExpression& other) const;

  EmsExpression& add_term(VarianceComponent comp, CoefMask mask, int count = 1);
  EmsExpression& add_q(SourceId owner, int count = 1);
};

// The expected mean square of a source under a model variant, transcribed
// as explicit per-variant data (not derived from an EMS rule engine; the
// Monte Carlo verifier provides the independent audit). The block line is
// E(MS_R) = abc s2_R + bc s2_eA + ac s2_eB + c s2_eAB + s2_eT in every
// variant, the error lines are model-independent, and each fixed source
// carries its QTerm.
EmsExpression ems(const ModelVariant& model, const DesignDims& dims,
                  SourceId source);
// Same expression with no dims attached (symbolic coefficients only).
EmsExpression ems_symbolic(const ModelVariant& model, SourceId source);

// The block line under fixed blocks: QTerm(R) + bc s2_eA + ac s2_eB +
// c s2_eAB + s2_eT. Exposed for documentation and tests only; no model
// variant uses it, since blocks are always treated as random.
EmsExpression fixed_block_ems_r(const DesignDims& dims);
EmsExpression fixed_block_ems_r_symbolic();

// Coefficient-wise sum; Q terms accumulate as a multiset. dims is kept when
// all inputs agree on it.
EmsExpression ems_sum(const std::vector<EmsExpression>& exprs);

// a - b, used by the test-plan exactness audit.
EmsExpression ems_difference(const EmsExpression& a, const EmsExpression& b);

// Renders e.g. "Q(B) + ac*s2_eB + cr*s2_AB + c*s2_eAB + r*s2_ABC + s2_eT"
// (symbolic) or "Q(B) + 12*s2_eB + 6*s2_AB + ..." (numeric; requires dims).
std::string to_string(const EmsExpression& expr, bool symbolic);

// Numeric value at given component variances and Q-term values; components
// or Q terms missing from the maps count as zero. Requires dims.
double ems_value(const EmsExpression& expr,
                 const std::map<VarianceComponent, double>& sigmas,
                 const std::map<SourceId, double>& q_values);

}  // namespace stripsplit

#endif
