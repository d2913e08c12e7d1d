#include <doctest.h>

#include <stdexcept>

#include "stripsplit/ems.hpp"

using namespace stripsplit;

TEST_SUITE_BEGIN("ems");

TEST_CASE("component names round-trip and accept the bare spelling") {
  for (SourceId src : all_sources()) {
    const VarianceComponent comp = component_of(src);
    CHECK(source_of(comp) == src);
    CHECK(parse_component(component_name(comp)) == comp);
  }
  CHECK(component_name(VarianceComponent::eAB) == "s2_eAB");
  CHECK(parse_component("eT") == VarianceComponent::eT);
  CHECK(parse_component("s2_AB") == VarianceComponent::AB);
  CHECK_THROWS_AS(parse_component("s2_zz"), std::invalid_argument);
}

TEST_CASE("coefficient masks evaluate and print") {
  const DesignDims d(2, 4, 3, 3);
  CHECK(coef_value(coef("bcr"), d) == 18);
  CHECK(coef_value(coef("ac"), d) == 12);
  CHECK(coef_value(coef(""), d) == 1);
  CHECK(coef_symbol(coef("rcb")) == "bcr");
  CHECK(coef_symbol(coef("")) == "1");
  CHECK_THROWS_AS(coef("bx"), std::invalid_argument);
}

TEST_CASE("source multipliers are the table coefficients") {
  CHECK(source_multiplier(SourceId::R) == coef("abc"));
  CHECK(source_multiplier(SourceId::A) == coef("bcr"));
  CHECK(source_multiplier(SourceId::eA) == coef("bc"));
  CHECK(source_multiplier(SourceId::AB) == coef("cr"));
  CHECK(source_multiplier(SourceId::eAB) == coef("c"));
  CHECK(source_multiplier(SourceId::C) == coef("abr"));
  CHECK(source_multiplier(SourceId::ABC) == coef("r"));
  CHECK(source_multiplier(SourceId::eT) == coef(""));
}

TEST_CASE("all-random ABC line is its multiplier plus the residual") {
  const DesignDims d(2, 4, 3, 3);
  const EmsExpression line =
      ems(ModelVariant::parse("RRR"), d, SourceId::ABC);
  CHECK(line.coefficient(VarianceComponent::ABC) == 2);
  CHECK(line.coefficient(VarianceComponent::eT) == 1);
  CHECK(line.coefficient(VarianceComponent::AB) == 0);
  CHECK_FALSE(line.has_q(SourceId::ABC));
  CHECK(to_string(line, true) == "r*s2_ABC + s2_eT");
}

TEST_CASE("all-fixed C line is its Q term plus the residual") {
  const DesignDims d(2, 4, 3, 3);
  const EmsExpression line = ems(ModelVariant::parse("FFF"), d, SourceId::C);
  CHECK(line.has_q(SourceId::C));
  CHECK(line.coefficient(VarianceComponent::eT) == 1);
  CHECK(line.coefficient(VarianceComponent::C) == 0);
  CHECK(to_string(line, true) == "Q(C) + s2_eT");
}

TEST_CASE("residual variance has coefficient one in every line") {
  const DesignDims d(3, 2, 4, 2);
  for (const ModelVariant& v : all_model_variants()) {
    for (SourceId src : all_sources()) {
      CHECK(ems(v, d, src).coefficient(VarianceComponent::eT) == 1);
    }
  }
}

TEST_CASE("block line coefficients at the published dims") {
  const DesignDims d(2, 4, 3, 3);
  for (const ModelVariant& v : all_model_variants()) {
    const EmsExpression line = ems(v, d, SourceId::R);
    CHECK(line.coefficient(VarianceComponent::R) == 36);
    CHECK(line.coefficient(VarianceComponent::eA) == 9);
    CHECK(line.coefficient(VarianceComponent::eB) == 12);
    CHECK(line.coefficient(VarianceComponent::eAB) == 3);
    CHECK(line.coefficient(VarianceComponent::eT) == 1);
  }
}

TEST_CASE("error lines do not depend on the model variant") {
  const DesignDims d(3, 3, 2, 4);
  const ModelVariant base = ModelVariant::parse("FFF");
  for (const ModelVariant& v : all_model_variants()) {
    for (SourceId err :
         {SourceId::eA, SourceId::eB, SourceId::eAB, SourceId::eT}) {
      CHECK(ems(v, d, err).same_terms(ems(base, d, err)));
    }
  }
}

TEST_CASE("a random source's own coefficient is its multiplier") {
  const DesignDims d(3, 4, 2, 3);
  for (const ModelVariant& v : all_model_variants()) {
    for (SourceId src : all_sources()) {
      if (derived_effect_kind(v, src) != EffectKind::Random) continue;
      const EmsExpression line = ems(v, d, src);
      CHECK(line.coefficient(component_of(src)) ==
            coef_value(source_multiplier(src), d));
    }
  }
}

TEST_CASE("a fixed source carries its Q term and no own variance") {
  const DesignDims d(2, 2, 2, 2);
  for (const ModelVariant& v : all_model_variants()) {
    for (SourceId src : all_sources()) {
      const EmsExpression line = ems(v, d, src);
      if (derived_effect_kind(v, src) == EffectKind::Fixed) {
        CHECK(line.has_q(src));
        CHECK(line.coefficient(component_of(src)) == 0);
      } else {
        CHECK_FALSE(line.has_q(src));
      }
    }
  }
}

TEST_CASE("fixed-block alternative of the block line") {
  const DesignDims d(2, 4, 3, 3);
  const EmsExpression line = fixed_block_ems_r(d);
  CHECK(line.has_q(SourceId::R));
  CHECK(line.coefficient(VarianceComponent::R) == 0);
  CHECK(line.coefficient(VarianceComponent::eA) == 9);
  CHECK(line.coefficient(VarianceComponent::eB) == 12);
  CHECK(line.coefficient(VarianceComponent::eAB) == 3);
  CHECK(to_string(fixed_block_ems_r_symbolic(), true) ==
        "Q(R) + bc*s2_eA + ac*s2_eB + c*s2_eAB + s2_eT");
}

TEST_CASE("sum with the empty expression is an identity") {
  const DesignDims d(2, 4, 3, 3);
  const EmsExpression x = ems(ModelVariant::parse("RFR"), d, SourceId::B);
  CHECK(ems_sum({x, EmsExpression{}}).same_terms(x));
  CHECK(EmsExpression{}.empty());
}

TEST_CASE("sum of the all-random eAB and ABC lines") {
  const DesignDims d(2, 4, 3, 3);
  const ModelVariant rrr = ModelVariant::parse("RRR");
  const EmsExpression total =
      ems_sum({ems(rrr, d, SourceId::eAB), ems(rrr, d, SourceId::ABC)});
  CHECK(total.coefficient(VarianceComponent::eAB) == 3);
  CHECK(total.coefficient(VarianceComponent::ABC) == 2);
  CHECK(total.coefficient(VarianceComponent::eT) == 2);
  CHECK(to_string(total, true) == "c*s2_eAB + r*s2_ABC + 2*s2_eT");
}

TEST_CASE("difference cancels shared terms") {
  const DesignDims d(2, 4, 3, 3);
  const ModelVariant rrr = ModelVariant::parse("RRR");
  const EmsExpression diff = ems_difference(ems(rrr, d, SourceId::AC),
                                            ems(rrr, d, SourceId::ABC));
  CHECK(diff.coefficient(VarianceComponent::AC) == 6);
  CHECK(diff.coefficient(VarianceComponent::ABC) == 0);
  CHECK(diff.coefficient(VarianceComponent::eT) == 0);
  CHECK(ems_difference(ems(rrr, d, SourceId::AC), ems(rrr, d, SourceId::AC))
            .empty());
}

TEST_CASE("numeric evaluation treats missing entries as zero") {
  const DesignDims d(2, 3, 3, 3);
  const ModelVariant rrr = ModelVariant::parse("RRR");
  const EmsExpression line = ems(rrr, d, SourceId::AB);
  // cr*AB + c*eAB + r*ABC + eT at (r,c) = (2,3)
  const std::map<VarianceComponent, double> sigmas = {
      {VarianceComponent::AB, 0.5}, {VarianceComponent::eT, 1.0}};
  CHECK(ems_value(line, sigmas, {}) == doctest::Approx(6 * 0.5 + 1.0));

  const EmsExpression fixed_c =
      ems(ModelVariant::parse("FFF"), d, SourceId::C);
  CHECK(ems_value(fixed_c, {}, {{SourceId::C, 2.5}}) == doctest::Approx(2.5));
  CHECK(ems_value(fixed_c, {}, {}) == doctest::Approx(0.0));
}

TEST_CASE("coefficient lookup without dims is an error") {
  const EmsExpression line =
      ems_symbolic(ModelVariant::parse("RRR"), SourceId::A);
  CHECK_THROWS_AS(line.coefficient(VarianceComponent::A), std::logic_error);
  CHECK(to_string(line, true) ==
        "bcr*s2_A + bc*s2_eA + cr*s2_AB + c*s2_eAB + br*s2_AC + r*s2_ABC + "
        "s2_eT");
}

TEST_SUITE_END();
