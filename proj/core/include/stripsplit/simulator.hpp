#ifndef STRIPSPLIT_SIMULATOR_HPP
#define STRIPSPLIT_SIMULATOR_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "stripsplit/design.hpp"
#include "stripsplit/distributions.hpp"
#include "stripsplit/ems.hpp"
#include "stripsplit/layout.hpp"

namespace stripsplit {

// A data-generation recipe for the model
//   y_hijk = m + R_h + A_i + eA_hi + B_j + eB_hj + AB_ij + eAB_hij
//            + C_k + AC_ik + BC_jk + ABC_ijk + eT_hijk.
// Random terms draw one normal per distinct own-index combination (one R_h
// per block, one AB_ij shared across blocks and subplots, one eAB_hij
// shared across subplots, ...). Fixed sources add their stored effects.
struct SimSpec {
  DesignDims dims{2, 2, 2, 2};
  ModelVariant model{EffectKind::Random, EffectKind::Random,
                     EffectKind::Random};
  // Variances sigma^2 keyed by component. Only components that are random
  // under the model may appear (R, eA, eB, eAB, eT always qualify). Missing
  // components count as zero.
  std::map<VarianceComponent, double> sigmas;
  // Effect arrays keyed by fixed source, row-major over the source's own
  // axes (A: a values; AB: a*b; ABC: a*b*c). Each array must sum to zero
  // along every axis it indexes; centering is enforced, not applied
  // silently, because an off-center array would shift the grand mean.
  std::map<SourceId, std::vector<double>> fixed_effects;
  double grand_mean = 0.0;
  int n_reps = 1;
  std::uint64_t seed = 0;
};

struct InvalidSimSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeGuardExceeded : std::runtime_error {
  explicit SizeGuardExceeded(int cells_, int limit_);
  int cells;
  int limit;
};

// Throws InvalidSimSpec when a sigma is attached to a component that is not
// random under the model, a sigma is negative, an effect array belongs to a
// non-fixed source or has the wrong length, or an array is not centered
// along one of its axes.
void validate(const SimSpec& spec);

// One replicate. Labels are generated ("1".."r" blocks, "A1".., "B1..",
// "C1.."). Draw order is fixed (term by term, own indices row-major), so a
// given stream always yields the same layout.
BalancedLayout simulate_one(const SimSpec& spec, RandomStream& stream);

// The stream used for replicate `rep` of a run with the given seed. Workers
// use this to generate any replicate independently of scheduling.
RandomStream replicate_stream(std::uint64_t seed, int rep);

inline constexpr int kCovarianceCellGuard = 4096;

// The dense rabc x rabc covariance of the vectorized response under the
// variant, row-major. Each component contributes sigma^2 times a Kronecker
// product of I (on the axes the component indexes) and the all-ones J (on
// the rest); components fixed under the model contribute nothing and are
// rejected by validation. Guarded to small designs (its purpose is
// verification); throws SizeGuardExceeded beyond 4096 cells.
std::vector<double> covariance_matrix(
    const ModelVariant& model, const DesignDims& dims,
    const std::map<VarianceComponent, double>& sigmas);

// The twelve per-replicate mean squares of each replicate, reduced in
// replicate order regardless of worker count (workers own contiguous
// replicate ranges but results are deterministic either way).
std::vector<std::array<double, kSourceCount>> replicate_mean_squares(
    const SimSpec& spec, int n_workers = 1);

struct EmsCheckRow {
  SourceId source;
  double mean_ms;    // average MS over replicates
  double predicted;  // EMS evaluated at spec.sigmas and the Q values
  double mc_se;      // standard error of mean_ms
};

// Monte Carlo audit of the EMS table: averages each source's MS over
// n_reps replicates and compares with the symbolic EMS evaluated at the
// spec's variances; Q terms are evaluated from the fixed-effect arrays as
// multiplier/df times the sum of squared effects (the folded-in interaction
// means vanish because arrays are centered along every axis).
std::vector<EmsCheckRow> verify_ems(const SimSpec& spec, int n_workers = 1);

// Q-term value of one fixed source implied by the spec's effect arrays
// (zero when no array is present).
double q_term_value(const SimSpec& spec, SourceId source);

struct Type1Row {
  SourceId source;
  bool simple;   // single-MS numerator and denominator: exactly F under H0
  double rate;   // fraction of replicates with p < alpha
  double se;     // binomial standard error of the rate
};

// Rejection rates of the variant's eleven tests under data generated from
// the spec (the caller arranges that the tested terms are null). Same
// worker semantics as replicate_mean_squares.
std::vector<Type1Row> type1_error(const SimSpec& spec, double alpha,
                                  int n_workers = 1);

}  // namespace stripsplit

#endif
