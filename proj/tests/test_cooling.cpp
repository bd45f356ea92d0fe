#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "support.hpp"

using namespace dabopt;

TEST(RequiredRth, Substitution) {
  EXPECT_NEAR(required_rth(100, 25, 100, 0.1, 400), 0.1625, 1e-12);
  EXPECT_NEAR(required_rth(100, 25, 0, 0.1, 400), 0.1875, 1e-12);
  EXPECT_LE(required_rth(100, 25, 800, 0.1, 400), 0.0);
}

TEST(HeatsinkCost, HandExpansion) {
  const HeatsinkGeometry g{0.1, 0.04, 0.003, 0.03, 0.002, 9};
  const HeatsinkCostModel m{40.0, 2700.0};
  const auto c = heatsink_cost(g, m);
  EXPECT_NEAR(c.volume, 7.2e-5, 1e-12 * 7.2e-5);
  EXPECT_NEAR(c.mass, 0.1944, 1e-12);
  EXPECT_NEAR(c.cost, 0.1944 * 40.0, 1e-12);
  EXPECT_EQ(heatsink_cost(g, {0.0, 2700.0}).cost, 0.0);
  // zero fins still counts one fin volume
  const HeatsinkGeometry bare{0.1, 0.04, 0.003, 0.03, 0.002, 0};
  EXPECT_NEAR(heatsink_cost(bare, m).volume, 1.2e-5 + 0.03 * 0.1 * 0.002, 1e-18);
  EXPECT_FALSE(bare.has_channels());
}

TEST(HeatsinkCost, RandomGeometries) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const HeatsinkGeometry g{0.05 + 0.15 * u(rng), 0.04, 0.003, 0.01 + 0.03 * u(rng), 0.001 + 0.002 * u(rng),
                             3 + static_cast<int>(10 * u(rng))};
    const double hand = g.d_s * g.l_s * g.w_s + (g.n_f + 1) * g.h_f * g.l_s * g.t_f;
    EXPECT_NEAR(heatsink_cost(g, {40.0, 2700.0}).volume, hand, 1e-12 * hand);
  }
}

TEST(Pair, ReferenceGeometryMatchesOracle) {
  const HeatsinkGeometry g{0.100, 0.040, 0.003, 0.035, 0.001, 15};
  const auto r = evaluate_pair(support::fan("9GA0412P3J01"), g);
  ASSERT_TRUE(r);
  EXPECT_LT(support::rel(r->volume_flow, oracle::hs_flow), 0.02);
  EXPECT_LT(support::rel(r->r_th_s_a, oracle::hs_rth), 0.02);
  EXPECT_NEAR(fan_pressure(support::fan("9GA0412P3J01"), r->volume_flow), r->pressure, 1e-3 * r->pressure);
}

TEST(Pair, FewerFinsMoreFlow) {
  const auto& fan = support::fan("9GA0412P3J01");
  double prev = 0.0;
  for (int n_f : {21, 15, 9, 6, 3}) {
    const auto r = evaluate_pair(fan, {0.1, 0.04, 0.003, 0.03, 0.001, n_f});
    ASSERT_TRUE(r);
    EXPECT_GT(r->volume_flow, prev);
    prev = r->volume_flow;
  }
}

TEST(Pair, ConvectionInverseInArea) {
  EXPECT_DOUBLE_EQ(convection_resistance(50.0, 0.02, 1.0, 0.0) / convection_resistance(50.0, 0.04, 1.0, 0.0), 2.0);
}

TEST(Pair, BlockedChannels) {
  EXPECT_FALSE(evaluate_pair(support::fan("9GA0412P3J01"), {0.1, 0.04, 0.003, 0.03, 0.004, 10}));
}

TEST(Optimize, UnconstrainedIsCheapest) {
  const auto& db = support::shipped_db();
  const auto all = cooling_candidates(db.fans, db.heatsink);
  const auto best = optimize_cooling(std::numeric_limits<double>::infinity(), all);
  ASSERT_TRUE(best);
  for (const auto& c : all) EXPECT_LE(best->total_cost, c.total_cost);
  EXPECT_EQ(best->fan.part_id, "9GA0412P7G001");
}

TEST(Optimize, BelowBestAchievable) {
  const auto& db = support::shipped_db();
  EXPECT_FALSE(optimize_cooling(0.05, db.fans, db.heatsink));
  EXPECT_FALSE(optimize_cooling(-1.0, db.fans, db.heatsink));
  EXPECT_THROW(optimize_cooling(0.2, {}, db.heatsink), std::invalid_argument);
}

TEST(Optimize, MatchesExhaustiveScan) {
  const auto& db = support::shipped_db();
  const double limit = 0.16;
  const auto got = optimize_cooling(limit, db.fans, db.heatsink);

  // independent scan over the documented grid
  std::optional<std::tuple<double, double, std::string, HeatsinkGeometry>> best;
  for (const auto& fan : db.fans)
    for (int il = 0; il <= 6; ++il)
      for (int ih = 0;; ++ih) {
        const double h_f = 0.010 + 0.005 * ih;
        if (h_f > fan.width + 1e-12) break;
        for (int it = 1; it <= 5; ++it)
          for (int n_f = 3; n_f <= 48; n_f += 3) {
            const HeatsinkGeometry g{0.050 + 0.025 * il, fan.width, 0.003, h_f, 0.001 * it, n_f};
            if (n_f * g.t_f >= g.w_s) continue;
            const auto r = evaluate_pair(fan, g);
            if (!r || !(r->r_th_s_a < limit)) continue;
            const double mass = (g.d_s * g.l_s * g.w_s + (n_f + 1) * h_f * g.l_s * g.t_f) * 2700.0;
            const double cost = mass * db.heatsink.cost_per_kg + fan.unit_cost;
            const auto key = std::make_tuple(cost, mass, fan.part_id, g);
            if (!best || std::tie(cost, mass, fan.part_id) < std::tie(std::get<0>(*best), std::get<1>(*best),
                                                                       std::get<2>(*best)))
              best = key;
          }
      }
  ASSERT_TRUE(best);
  ASSERT_TRUE(got);
  EXPECT_NEAR(got->total_cost, std::get<0>(*best), 1e-9);
  EXPECT_EQ(got->fan.part_id, std::get<2>(*best));
  EXPECT_NEAR(got->geometry.l_s, std::get<3>(*best).l_s, 1e-12);
  EXPECT_NEAR(got->geometry.h_f, std::get<3>(*best).h_f, 1e-12);
  EXPECT_NEAR(got->geometry.t_f, std::get<3>(*best).t_f, 1e-12);
  EXPECT_EQ(got->geometry.n_f, std::get<3>(*best).n_f);
  EXPECT_LT(got->r_th_s_a, limit);
}

TEST(Optimize, CostNonIncreasingInLimit) {
  const auto& db = support::shipped_db();
  const auto all = cooling_candidates(db.fans, db.heatsink);
  double prev = std::numeric_limits<double>::infinity();
  for (double r = 0.11; r < 2.0; r *= 1.15) {
    const auto c = optimize_cooling(r, all);
    if (!c) continue;
    EXPECT_LE(c->total_cost, prev);
    EXPECT_LT(c->r_th_s_a, r);
    prev = c->total_cost;
  }
}
