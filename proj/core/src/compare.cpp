#include "stripsplit/compare.hpp"

#include "stripsplit/distributions.hpp"

namespace stripsplit {

namespace {

constexpr std::array<SourceId, 7> kTreatments = {
    SourceId::A,  SourceId::B,  SourceId::AB, SourceId::C,
    SourceId::AC, SourceId::BC, SourceId::ABC};

AnovaRow pooled_row(SourceId slot, const AnovaTable& strip,
                    std::initializer_list<SourceId> parts) {
  AnovaRow row{slot, 0, 0.0, 0.0};
  for (SourceId part : parts) {
    const AnovaRow& src = strip.row(part);
    row.df += src.df;
    row.ss += src.ss;
  }
  row.ms = row.ss / row.df;
  return row;
}

// Every treatment MS over one residual row, exact df, fixed-effects reading.
std::vector<FTestResult> tests_against(const AnovaTable& table,
                                       SourceId residual) {
  const AnovaRow& err = table.row(residual);
  std::vector<FTestResult> results;
  results.reserve(kTreatments.size());
  for (SourceId src : kTreatments) {
    const AnovaRow& row = table.row(src);
    FTestResult res;
    res.source = src;
    res.f_value = row.ms / err.ms;
    res.df1 = row.df;
    res.df2 = err.df;
    res.df_method = DfMethod{DfMethodKind::Exact, 0.0, 0};
    res.p_value = f_upper_tail(res.f_value, res.df1, res.df2);
    results.push_back(std::move(res));
  }
  return results;
}

bool significant(const std::vector<FTestResult>& results, SourceId source,
                 double alpha) {
  for (const FTestResult& res : results) {
    if (res.source == source) return res.p_value < alpha;
  }
  throw std::out_of_range("no test for source " +
                          std::string(source_name(source)));
}

}  // namespace

AnovaTable factorial_anova(const BalancedLayout& layout) {
  const AnovaTable strip = anova_table(layout);
  AnovaTable out{strip.dims, {}};
  for (SourceId src : {SourceId::R, SourceId::A, SourceId::B, SourceId::AB,
                       SourceId::C, SourceId::AC, SourceId::BC,
                       SourceId::ABC}) {
    out.rows.push_back(strip.row(src));
  }
  out.rows.push_back(pooled_row(
      SourceId::eT, strip,
      {SourceId::eA, SourceId::eB, SourceId::eAB, SourceId::eT}));
  return out;
}

AnovaTable split_split_anova(const BalancedLayout& layout) {
  const AnovaTable strip = anova_table(layout);
  AnovaTable out{strip.dims, {}};
  for (SourceId src :
       {SourceId::R, SourceId::A, SourceId::eA, SourceId::B, SourceId::AB}) {
    out.rows.push_back(strip.row(src));
  }
  out.rows.push_back(
      pooled_row(SourceId::eAB, strip, {SourceId::eB, SourceId::eAB}));
  for (SourceId src : {SourceId::C, SourceId::AC, SourceId::BC, SourceId::ABC,
                       SourceId::eT}) {
    out.rows.push_back(strip.row(src));
  }
  return out;
}

std::vector<FTestResult> factorial_tests(const AnovaTable& table) {
  return tests_against(table, SourceId::eT);
}

std::vector<FTestResult> split_split_tests(const AnovaTable& table) {
  return tests_against(table, SourceId::eT);
}

DesignComparison compare_designs(const BalancedLayout& layout, double alpha) {
  DesignComparison cmp{alpha,
                       anova_table(layout),
                       factorial_anova(layout),
                       split_split_anova(layout),
                       {},
                       {},
                       {},
                       {}};

  const ModelVariant all_fixed{EffectKind::Fixed, EffectKind::Fixed,
                               EffectKind::Fixed};
  cmp.strip_tests = evaluate(f_test_plan(all_fixed), cmp.strip);
  cmp.factorial_results = factorial_tests(cmp.factorial);
  cmp.split_results = split_split_tests(cmp.split_split);

  for (SourceId src : kTreatments) {
    const bool in_strip = significant(cmp.strip_tests, src, alpha);
    const bool in_factorial = significant(cmp.factorial_results, src, alpha);
    const bool in_split = significant(cmp.split_results, src, alpha);
    if (in_strip != in_factorial || in_strip != in_split) {
      cmp.divergences.push_back({src, in_strip, in_factorial, in_split});
    }
  }
  return cmp;
}

}  // namespace stripsplit
