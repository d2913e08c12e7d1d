#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "stripsplit/df_approx.hpp"

using namespace stripsplit;

TEST_SUITE_BEGIN("df_approx");

TEST_CASE("a single mean square keeps its exact df") {
  CHECK(satterthwaite({{3.7, 5}}) == 5.0);
  CHECK(satterthwaite({{0.02, 171}}) == 171.0);
}

TEST_CASE("effective df of the block over residual-line pair") {
  // MS 9.4758 on 1 df with MS 0.3141 on 6 df:
  // (9.4758 + 0.3141)^2 / (9.4758^2/1 + 0.3141^2/6) = 1.06720.
  const double f = satterthwaite({{9.4758, 1}, {0.3141, 6}});
  CHECK(std::fabs(f - 1.06720) < 0.0005);
}

TEST_CASE("satterthwaite rejects empty and nonpositive input") {
  CHECK_THROWS_AS(satterthwaite({}), std::invalid_argument);
  CHECK_THROWS_AS(satterthwaite({{1.0, 3}, {-1.0, 3}}), std::invalid_argument);
}

TEST_CASE("satterthwaite is scale invariant") {
  const std::vector<MsPoint> points = {{2.5, 3}, {0.8, 12}, {1.1, 7}};
  const double base = satterthwaite(points);
  for (double lambda : {0.001, 0.5, 42.0, 1e6}) {
    std::vector<MsPoint> scaled = points;
    for (MsPoint& p : scaled) p.ms *= lambda;
    CHECK(satterthwaite(scaled) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("tuning constant from its closed form") {
  // n2/(n2-2) * (2(n1+n2-2)/(n1(n2-4)) + 1) at (6, 24):
  // (24/22) * (2*28/(6*20) + 1) = 1.6000.
  CHECK(std::fabs(aw_rstar(6, 24) - 1.6) < 0.0005);
  CHECK(aw_rstar(1, 6) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK_THROWS_AS(aw_rstar(3, 4), std::domain_error);
  CHECK_THROWS_AS(aw_rstar(5, 2), std::domain_error);
  CHECK_THROWS_AS(aw_rstar(0, 10), std::domain_error);
}

TEST_CASE("corrected estimate at r = 1 is the satterthwaite value") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ms_dist(0.01, 50.0);
  std::uniform_int_distribution<int> df_dist(1, 200);
  for (int trial = 0; trial < 1000; ++trial) {
    const MsPoint p{ms_dist(rng), df_dist(rng)};
    const MsPoint q{ms_dist(rng), df_dist(rng)};
    const double direct = satterthwaite({p, q});
    const double via_aw = aw_f(p, q, 1.0);
    CHECK(std::fabs(via_aw - direct) <= 1e-12 * direct);
  }
}

TEST_CASE("corrected estimate stays inside its bounds") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ms_dist(0.01, 50.0);
  std::uniform_real_distribution<double> r_dist(0.05, 10.0);
  std::uniform_int_distribution<int> df_dist(1, 200);
  for (int trial = 0; trial < 1000; ++trial) {
    const MsPoint p{ms_dist(rng), df_dist(rng)};
    const MsPoint q{ms_dist(rng), df_dist(rng)};
    const double f = aw_f(p, q, r_dist(rng));
    CHECK(f >= std::min(p.df, q.df) - 1e-9);
    CHECK(f <= p.df + q.df + 1e-9);
  }
}

TEST_CASE("the estimate peaks at the matched variance ratio") {
  // phi2 = n2/n1 maximizes (1+phi2)^2/(1/n1 + phi2^2/n2) at exactly n1+n2.
  const MsPoint p{2.0, 4};
  const MsPoint q{3.0, 10};
  // phi2 = r*ms2/ms1 = n2/n1  =>  r = (n2*ms1)/(n1*ms2).
  const double r = (10.0 * 2.0) / (4.0 * 3.0);
  CHECK(aw_f(p, q, r) == doctest::Approx(14.0).epsilon(1e-12));
}

TEST_CASE("both orderings of the residual-line pair are reported") {
  // MS_eAB = 0.3141 on 6 df versus MS_ABC = 3.2911 on 12 df.
  const AwPairResult res = aw_pair({0.3141, 6}, {3.2911, 12});
  REQUIRE(res.by_first.has_value());
  REQUIRE(res.by_second.has_value());
  CHECK(res.by_first->ordering == 0);
  CHECK(res.by_second->ordering == 1);
  CHECK(res.by_first->r_used == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.by_second->r_used == doctest::Approx(3.5).epsilon(1e-12));
  for (const AwEstimate& est : {*res.by_first, *res.by_second}) {
    CHECK(est.f_hat >= 6.0);
    CHECK(est.f_hat <= 18.0);
    CHECK(std::isfinite(est.f_hat));
  }
  CHECK(res.f_s == doctest::Approx(14.14221213735961).epsilon(1e-10));
  CHECK(res.by_first->f_hat ==
        doctest::Approx(13.112876250390244).epsilon(1e-10));
  CHECK(res.by_second->f_hat ==
        doctest::Approx(17.459558641423342).epsilon(1e-10));
  // One estimate under f_s, one above: the one below is selected.
  REQUIRE(res.selected.has_value());
  CHECK(res.selected->ordering == 0);
}

TEST_CASE("small denominator df force the satterthwaite fallback") {
  const AwPairResult res = aw_pair({1.0, 3}, {2.0, 3});
  CHECK_FALSE(res.by_first.has_value());
  CHECK_FALSE(res.by_second.has_value());
  CHECK_FALSE(res.selected.has_value());
  CHECK(res.f_s == doctest::Approx(satterthwaite({{1.0, 3}, {2.0, 3}})));

  // One ordering valid, the other not: still a fallback, but the valid
  // estimate is reported.
  const AwPairResult half = aw_pair({9.4758, 1}, {0.3141, 6});
  CHECK(half.by_first.has_value());
  CHECK_FALSE(half.by_second.has_value());
  CHECK_FALSE(half.selected.has_value());
}

TEST_SUITE_END();
