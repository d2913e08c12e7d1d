#include "stripsplit/f_tests.hpp"

#include "stripsplit/distributions.hpp"

namespace stripsplit {

namespace {

using S = SourceId;

struct RatioSpec {
  S source;
  std::vector<S> num;
  std::vector<S> den;
};

// Ratio tables per variant family. Hypotheses are not stored: a test's
// hypothesis is VarZero for a random source and EffectsZero for a fixed
// one, uniformly across the tables.
//
// The block row and the three error rows are identical everywhere; the
// families differ only in the seven treatment rows. Every list below is
// arranged so that numerator and denominator expected mean squares cancel
// except for the tested term, which verify_exactness re-derives
// symbolically from the transcribed EMS tables.
std::vector<RatioSpec> common_head() {
  return {
      {S::R, {S::R, S::eAB}, {S::eA, S::eB}},
  };
}

void push_error_rows(std::vector<RatioSpec>& rows, S which) {
  if (which == S::eA) rows.push_back({S::eA, {S::eA}, {S::eAB}});
  if (which == S::eB) rows.push_back({S::eB, {S::eB}, {S::eAB}});
  if (which == S::eAB) rows.push_back({S::eAB, {S::eAB}, {S::eT}});
}

std::vector<RatioSpec> ratio_table(const ModelVariant& model) {
  const int randoms = (model.a_kind == EffectKind::Random ? 1 : 0) +
                      (model.b_kind == EffectKind::Random ? 1 : 0) +
                      (model.c_kind == EffectKind::Random ? 1 : 0);

  struct Treat {
    RatioSpec a, b, ab, c, ac, bc, abc;
  };
  // All treatment factors fixed: each strip stratum tests against its own
  // error, the subplot stratum against the residual.
  static const Treat fixed_rows{
      {S::A, {S::A}, {S::eA}},
      {S::B, {S::B}, {S::eB}},
      {S::AB, {S::AB}, {S::eAB}},
      {S::C, {S::C}, {S::eT}},
      {S::AC, {S::AC}, {S::eT}},
      {S::BC, {S::BC}, {S::eT}},
      {S::ABC, {S::ABC}, {S::eT}}};
  // At least two random treatment factors: the all-random ratios apply (a
  // single fixed factor changes only that factor's hypothesis, not the
  // ratios).
  static const Treat random_rows{
      {S::A, {S::A, S::eAB, S::ABC}, {S::eA, S::AB, S::AC}},
      {S::B, {S::B, S::eAB, S::ABC}, {S::eB, S::AB, S::BC}},
      {S::AB, {S::AB, S::eT}, {S::eAB, S::ABC}},
      {S::C, {S::C, S::ABC}, {S::AC, S::BC}},
      {S::AC, {S::AC}, {S::ABC}},
      {S::BC, {S::BC}, {S::ABC}},
      {S::ABC, {S::ABC}, {S::eT}}};
  // Only A random.
  static const Treat only_a{
      random_rows.a,
      {S::B, {S::B, S::eAB}, {S::eB, S::AB}},
      random_rows.ab,
      {S::C, {S::C}, {S::AC}},
      random_rows.ac,
      random_rows.bc,
      random_rows.abc};
  // Only B random.
  static const Treat only_b{
      {S::A, {S::A, S::eAB}, {S::eA, S::AB}},
      random_rows.b,
      random_rows.ab,
      {S::C, {S::C}, {S::BC}},
      random_rows.ac,
      random_rows.bc,
      random_rows.abc};
  // Only C random: the strip strata gain the residual in their numerators.
  static const Treat only_c{
      {S::A, {S::A, S::eT}, {S::eA, S::AC}},
      {S::B, {S::B, S::eT}, {S::eB, S::BC}},
      random_rows.ab,
      random_rows.c,
      random_rows.ac,
      random_rows.bc,
      random_rows.abc};

  const Treat* treat = &fixed_rows;
  if (randoms >= 2) {
    treat = &random_rows;
  } else if (randoms == 1) {
    if (model.a_kind == EffectKind::Random) treat = &only_a;
    else if (model.b_kind == EffectKind::Random) treat = &only_b;
    else treat = &only_c;
  }

  std::vector<RatioSpec> rows = common_head();
  rows.push_back(treat->a);
  push_error_rows(rows, S::eA);
  rows.push_back(treat->b);
  push_error_rows(rows, S::eB);
  rows.push_back(treat->ab);
  push_error_rows(rows, S::eAB);
  rows.push_back(treat->c);
  rows.push_back(treat->ac);
  rows.push_back(treat->bc);
  rows.push_back(treat->abc);
  return rows;
}

}  // namespace

Hypothesis Hypothesis::var_zero(SourceId source) {
  return {Kind::VarZero, source, component_of(source)};
}

Hypothesis Hypothesis::effects_zero(SourceId source) {
  return {Kind::EffectsZero, source, component_of(source)};
}

NonPositiveDenominator::NonPositiveDenominator(SourceId source_)
    : std::runtime_error("denominator mean squares of the " +
                         std::string(source_name(source_)) +
                         " test sum to a nonpositive value"),
      source(source_) {}

ExactnessViolation::ExactnessViolation(SourceId source_,
                                       const std::string& residual_)
    : std::runtime_error("EMS difference of the " +
                         std::string(source_name(source_)) +
                         " test is not the tested term; residual: " +
                         residual_),
      source(source_),
      residual(residual_) {}

std::vector<FTestSpec> f_test_plan(const ModelVariant& model) {
  std::vector<FTestSpec> plan;
  for (const RatioSpec& row : ratio_table(model)) {
    const Hypothesis hyp =
        derived_effect_kind(model, row.source) == EffectKind::Random
            ? Hypothesis::var_zero(row.source)
            : Hypothesis::effects_zero(row.source);
    plan.push_back({row.source, row.num, row.den, hyp});
  }
  return plan;
}

std::vector<FTestResult> evaluate(const std::vector<FTestSpec>& plan,
                                  const AnovaTable& table) {
  std::vector<FTestResult> results;
  results.reserve(plan.size());

  for (const FTestSpec& spec : plan) {
    auto points_of = [&](const std::vector<SourceId>& sources) {
      std::vector<MsPoint> points;
      points.reserve(sources.size());
      for (SourceId s : sources) {
        const AnovaRow& row = table.row(s);
        points.push_back({row.ms, row.df});
      }
      return points;
    };
    const std::vector<MsPoint> num = points_of(spec.numerator);
    const std::vector<MsPoint> den = points_of(spec.denominator);

    double num_sum = 0.0, den_sum = 0.0;
    for (const MsPoint& p : num) num_sum += p.ms;
    for (const MsPoint& p : den) den_sum += p.ms;
    if (den_sum <= 0.0) throw NonPositiveDenominator(spec.source);

    FTestResult res;
    res.source = spec.source;
    res.f_value = num_sum / den_sum;
    res.df1 = num.size() == 1 ? num.front().df : satterthwaite(num);
    res.df2 = den.size() == 1 ? den.front().df : satterthwaite(den);
    res.df_method.kind = num.size() == 1 && den.size() == 1
                             ? DfMethodKind::Exact
                             : DfMethodKind::Satterthwaite;
    res.p_value = f_upper_tail(res.f_value, res.df1, res.df2);

    // A side made of exactly two mean squares also gets the corrected
    // estimate, both orderings, as alternate readings of the same F value.
    for (int side = 0; side < 2; ++side) {
      const std::vector<MsPoint>& points = side == 0 ? num : den;
      if (points.size() != 2) continue;
      if (points[0].ms <= 0.0 || points[1].ms <= 0.0) continue;
      const AwPairResult pair = aw_pair(points[0], points[1]);
      for (const std::optional<AwEstimate>& est :
           {pair.by_first, pair.by_second}) {
        if (!est) continue;
        AlternateDf alt;
        alt.side = side;
        alt.method = {DfMethodKind::AmesWebster, est->r_used, est->ordering};
        alt.df1 = side == 0 ? est->f_hat : res.df1;
        alt.df2 = side == 1 ? est->f_hat : res.df2;
        alt.p_value = f_upper_tail(res.f_value, alt.df1, alt.df2);
        alt.selected =
            pair.selected && pair.selected->ordering == est->ordering;
        res.alternates.push_back(alt);
      }
    }
    results.push_back(std::move(res));
  }
  return results;
}

bool ExactnessReport::all_exact() const {
  for (const ExactnessRow& row : rows) {
    if (!row.exact) return false;
  }
  return !rows.empty();
}

ExactnessReport verify_exactness(const ModelVariant& model,
                                 const DesignDims& dims) {
  ExactnessReport report;
  for (const FTestSpec& spec : f_test_plan(model)) {
    auto total = [&](const std::vector<SourceId>& sources) {
      std::vector<EmsExpression> exprs;
      exprs.reserve(sources.size());
      for (SourceId s : sources) exprs.push_back(ems(model, dims, s));
      return ems_sum(exprs);
    };
    const EmsExpression diff =
        ems_difference(total(spec.numerator), total(spec.denominator));

    EmsExpression expected;
    if (spec.hypothesis.kind == Hypothesis::Kind::VarZero) {
      expected.add_term(component_of(spec.source),
                        source_multiplier(spec.source));
    } else {
      expected.add_q(spec.source);
    }

    const bool exact = diff.same_terms(expected);
    report.rows.push_back(
        {spec.source, exact, exact ? "" : to_string(diff, true)});
  }
  return report;
}

void require_exactness(const ModelVariant& model, const DesignDims& dims) {
  for (const ExactnessRow& row : verify_exactness(model, dims).rows) {
    if (!row.exact) throw ExactnessViolation(row.source, row.residual);
  }
}

}  // namespace stripsplit
