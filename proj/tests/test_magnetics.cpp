#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "support.hpp"

using namespace dabopt;

namespace {

TransformerGeometry reference_geometry() { return {0.05, 0.05, 0.1, 0.02, 0.5e-3, 12, 11}; }

Pwl sampled_sine(double amp, double f, int n = 4000) {
  std::vector<double> t(n + 1), v(n + 1);
  for (int k = 0; k <= n; ++k) {
    t[k] = k / (f * n);
    v[k] = amp * std::sin(2 * std::numbers::pi * k / n);
  }
  return Pwl::from_polyline(1.0 / f, t, v);
}

Pwl square(double amp, double f) {
  const double T = 1.0 / f;
  return Pwl(T, {{0.0, T / 2, amp, amp}, {T / 2, T, -amp, -amp}});
}

TransformerRequirements shipped_requirements(int N, double f, double n, double lambda = 1.0) {
  const auto& cfg = support::shipped_config();
  ConverterSpec s = make_converter_spec(cfg.system, N, f, n);
  const auto grid = operating_grid(cfg.system, cfg.space, s);
  s.l_lk = size_leakage_inductance(s, grid);
  TransformerRequirements r;
  r.n = n;
  r.f_sw = f;
  r.l_lk = s.l_lk;
  r.t_amb = cfg.system.t_amb;
  r.t_tx_max = cfg.system.t_tx_max;
  r.lambda = lambda;
  for (const auto& op : grid) {
    r.v_in.push_back(op.v_in);
    r.i_l.push_back(build_waveform(op, s, solve_phase_shift(op, s)).inductor_current());
  }
  return r;
}

TransformerGrid small_grid() {
  TransformerGrid g;
  g.w_core = {0.03, 0.04, 0.05};
  g.d_core = {0.02, 0.03, 0.04};
  g.h_wind = {0.09, 0.11, 0.13};
  g.w_lk = {0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.04, 0.045, 0.05};
  g.w_foil = {0.1e-3, 0.2e-3, 0.5e-3};
  g.n_p = {12, 15, 18, 21};
  return g;
}

// Exhaustive reference built from the public per-design models only.
std::optional<TransformerDesign> brute_force(const TransformerRequirements& req, const TransformerGrid& grid) {
  const auto& db = support::shipped_db();
  const double v_max = *std::max_element(req.v_in.begin(), req.v_in.end());
  std::optional<TransformerDesign> best;
  std::array<double, 6> best_key{};
  for (double w_core : grid.w_core)
    for (double d_core : grid.d_core)
      for (double h_wind : grid.h_wind)
        for (double w_lk : grid.w_lk)
          for (double foil : grid.w_foil)
            for (int n_p : grid.n_p) {
              TransformerGeometry g{w_core, d_core, h_wind, w_lk, foil, n_p, secondary_turns(n_p, req.n)};
              if (std::abs(static_cast<double>(g.n_s) / n_p - req.n) > 0.05 * req.n) continue;
              if (!(flux_density(v_max, req.f_sw, n_p, g.core_area()) < db.core.b_sat)) continue;
              const double l = estimate_leakage(g);
              if (std::abs(l - req.l_lk) > 0.10 * req.l_lk) continue;
              const auto tc = transformer_cost(g, db.core.cost_per_m3, db.winding.cost_per_m3);
              double sum = 0.0;
              bool ok = true;
              for (std::size_t k = 0; k < req.v_in.size(); ++k) {
                const double b = flux_density(req.v_in[k], req.f_sw, n_p, g.core_area());
                const double pc = core_loss_igse(triangular_flux(b, req.f_sw), db.core, tc.v_core);
                const double pw = transformer_winding_loss(req.i_l[k], req.n, g, db.winding, req.t_tx_max);
                const auto th = thermal_check(pc, pw, g, req.t_amb);
                ok = ok && th.converged && th.hotspot() <= req.t_tx_max;
                sum += pc + pw;
              }
              if (!ok) continue;
              const double obj = tc.total() + req.lambda * sum / req.v_in.size();
              const std::array<double, 6> key{obj, tc.total(), w_core, d_core, h_wind, w_lk};
              if (!best || key < best_key) {
                best_key = key;
                TransformerDesign d;
                d.geometry = g;
                d.cost = tc;
                d.objective = obj;
                d.avg_loss = sum / req.v_in.size();
                best = d;
              }
            }
  return best;
}

}  // namespace

TEST(Flux, Substitution) {
  EXPECT_NEAR(flux_density(800, 30e3, 10, 2.5e-3), 0.266667, 1e-6);
  EXPECT_DOUBLE_EQ(flux_density(800, 30e3, 20, 2.5e-3), 0.5 * flux_density(800, 30e3, 10, 2.5e-3));
}

TEST(Leakage, EnergyIntegralOracle) {
  EXPECT_LT(support::rel(estimate_leakage(reference_geometry()), oracle::leakage_energy), 5e-3);
}

TEST(Leakage, MonotoneInGapAndQuadraticInTurns) {
  auto g = reference_geometry();
  const double a = estimate_leakage(g);
  g.w_lk += 1e-3;
  EXPECT_GT(estimate_leakage(g), a);
  const double one = estimate_leakage(10, 0.3, 0.02, 0.005, 0.005, 0.1);
  EXPECT_DOUBLE_EQ(estimate_leakage(20, 0.3, 0.02, 0.005, 0.005, 0.1), 4.0 * one);
}

TEST(CoreLoss, SinusoidMatchesSteinmetz) {
  const auto& m = support::shipped_db().core;
  for (double f : {10e3, 30e3, 100e3})
    for (double b : {0.05, 0.1, 0.2}) {
      const double ref = m.steinmetz_k * std::pow(f, m.steinmetz_alpha) * std::pow(b, m.steinmetz_beta);
      EXPECT_LT(support::rel(igse_density(sampled_sine(b, f), m), ref), 0.01) << f << " Hz, " << b << " T";
    }
}

TEST(CoreLoss, TriangleClosedForm) {
  const auto& m = support::shipped_db().core;
  const double b = 0.15, f = 30e3;
  const double closed = igse_ki(m) * std::pow(2 * b, m.steinmetz_beta - m.steinmetz_alpha) *
                        std::pow(4 * b * f, m.steinmetz_alpha);
  EXPECT_LT(support::rel(igse_density(triangular_flux(b, f), m), closed), 1e-12);
  EXPECT_LT(support::rel(core_loss_igse(triangular_flux(b, f), m, 2e-4), closed * 2e-4), 1e-12);
}

TEST(CoreLoss, NoRipple) {
  const auto& m = support::shipped_db().core;
  EXPECT_EQ(igse_density(Pwl(1e-4, {{0.0, 1e-4, 0.1, 0.1}}), m), 0.0);
}

TEST(Winding, DcExact) {
  const auto& w = support::shipped_db().winding;
  const FoilWinding fw{10, 0.3, 0.5e-3, 0.096, 0.1};
  const Pwl dc(1.0 / 30e3, {{0.0, 1.0 / 30e3, 12.0, 12.0}});
  EXPECT_DOUBLE_EQ(winding_loss(dc, fw, w, 100.0), 144.0 * fw.r_dc(w.resistivity(100.0)));
}

TEST(Winding, ThinFoilLimit) {
  const auto& w = support::shipped_db().winding;
  const FoilWinding fw{4, 0.3, 5e-6, 0.096, 0.1};
  const Pwl i = sampled_sine(10.0, 30e3, 400);
  const double dc_equiv = i.rms() * i.rms() * fw.r_dc(w.resistivity(60.0));
  EXPECT_LT(support::rel(winding_loss(i, fw, w, 60.0), dc_equiv), 0.01);
  EXPECT_NEAR(dowell_factor(1e-4, 1), 1.0, 1e-12);
  EXPECT_NEAR(dowell_factor(5e-3, 1), dowell_factor(1.2e-2, 1), 1e-6);
}

TEST(Winding, SquareWaveHighHarmonicOracle) {
  const auto& w = support::shipped_db().winding;
  ASSERT_DOUBLE_EQ(w.resistivity_20c, 1.72e-8);
  ASSERT_DOUBLE_EQ(w.temp_coefficient, 0.00393);
  const FoilWinding thin{1, 0.3, 0.1e-3, 0.096, 0.1};
  const FoilWinding thick{1, 0.3, 0.5e-3, 0.096, 0.1};
  EXPECT_LT(support::rel(winding_loss(square(10.0, 30e3), thin, w, 100.0), oracle::square_wave_loss_1), 5e-3);
  EXPECT_LT(support::rel(winding_loss(square(10.0, 30e3), thick, w, 100.0), oracle::square_wave_loss_5), 5e-3);
}

TEST(Thermal, ZeroLoss) {
  const auto th = thermal_check(0.0, 0.0, reference_geometry(), 25.0);
  EXPECT_TRUE(th.converged);
  EXPECT_NEAR(th.t_core, 25.0, 1e-9);
  EXPECT_NEAR(th.t_wind, 25.0, 1e-9);
}

TEST(Thermal, NodalSolverOracle) {
  const auto th = thermal_check(20.0, 30.0, reference_geometry(), 25.0);
  EXPECT_TRUE(th.converged);
  EXPECT_NEAR(th.t_core, oracle::thermal_t_core, 0.5);
  EXPECT_NEAR(th.t_wind, oracle::thermal_t_wind, 0.5);
}

TEST(Thermal, RiseIncreasesWithLoss) {
  double prev = 25.0;
  for (double p : {5.0, 10.0, 20.0, 40.0}) {
    const auto th = thermal_check(p, p, reference_geometry(), 25.0);
    EXPECT_GT(th.hotspot(), prev);
    prev = th.hotspot();
  }
}

TEST(Cost, VolumeSubstitution) {
  const TransformerGeometry g{0.05, 0.05, 0.1, 0.02, 0.5e-3, 6, 6};
  ASSERT_NEAR(g.w_wind(), 0.03, 1e-15);
  const auto c = transformer_cost(g, 1.5e5, 2.7e5);
  EXPECT_NEAR(c.v_core, 9.0e-4, 1e-12 * 9e-4);
  EXPECT_NEAR(c.c_core, 9.0e-4 * 1.5e5, 1e-9);
  const double area = g.w_foil * g.foil_height();
  const double v_w = g.n_p * g.mlt_primary() * area + g.n_s * g.mlt_secondary() * area;
  EXPECT_NEAR(c.v_w, v_w, 1e-12 * v_w);
  EXPECT_NEAR(c.c_w, v_w * 2.7e5, 1e-12 * v_w * 2.7e5);
  EXPECT_EQ(transformer_cost(g, 0.0, 0.0).total(), 0.0);
}

TEST(Cost, VolumePositiveOverGrid) {
  const auto grid = TransformerGrid::standard();
  for (double w : grid.w_core)
    for (double h : grid.h_wind)
      for (int np : {3, 50}) {
        const TransformerGeometry g{w, 0.2, h, 0.05, 2e-3, np, np};
        EXPECT_GT(transformer_cost(g, 1, 1).v_core, 0.0);
      }
}

TEST(Turns, Convention) {
  EXPECT_EQ(secondary_turns(12, 0.9), 11);
  EXPECT_EQ(secondary_turns(10, 0.8), 8);
  EXPECT_TRUE(turns_ratio_ok(12, 11, 0.9, 0.05));
  EXPECT_FALSE(turns_ratio_ok(3, 1, 0.5, 0.05));
}

TEST(Optimize, MatchesBruteForceOnSmallGrid) {
  const auto req = shipped_requirements(14, 70e3, 0.8);
  const auto grid = small_grid();
  const auto& db = support::shipped_db();
  const auto got = optimize_transformer(req, db.core, db.winding, grid);
  const auto ref = brute_force(req, grid);
  ASSERT_TRUE(ref) << "oracle found no design";
  ASSERT_TRUE(got.design) << got.reason;
  const auto& a = got.design->geometry;
  const auto& b = ref->geometry;
  EXPECT_EQ(a.w_core, b.w_core);
  EXPECT_EQ(a.d_core, b.d_core);
  EXPECT_EQ(a.h_wind, b.h_wind);
  EXPECT_EQ(a.w_lk, b.w_lk);
  EXPECT_EQ(a.w_foil, b.w_foil);
  EXPECT_EQ(a.n_p, b.n_p);
  EXPECT_NEAR(got.design->objective, ref->objective, 1e-9 * ref->objective);
}

TEST(Optimize, ZeroLambdaIsCheapestFeasible) {
  auto req = shipped_requirements(14, 70e3, 0.8, 0.0);
  const auto grid = small_grid();
  const auto& db = support::shipped_db();
  const auto got = optimize_transformer(req, db.core, db.winding, grid);
  const auto ref = brute_force(req, grid);
  ASSERT_TRUE(got.design && ref);
  EXPECT_NEAR(got.design->cost.total(), ref->cost.total(), 1e-9);
}

TEST(Optimize, ReturnedDesignPassesGates) {
  const auto req = shipped_requirements(7, 30e3, 0.9);
  const auto& db = support::shipped_db();
  const auto got = optimize_transformer(req, db.core, db.winding, TransformerGrid::standard());
  ASSERT_TRUE(got.design) << got.reason;
  const auto& d = *got.design;
  EXPECT_LT(d.b_max, db.core.b_sat);
  EXPECT_LE(std::abs(d.l_lk_tx - req.l_lk), 0.10 * req.l_lk);
  for (std::size_t k = 0; k < d.p_core.size(); ++k) {
    EXPECT_GE(d.p_core[k], 0.0);
    EXPECT_GE(d.p_wind[k], 0.0);
    EXPECT_LE(std::max(d.t_core[k], d.t_wind[k]), req.t_tx_max);
    if (k % 2 == 0) {  // 10 % load before 100 % load
      EXPECT_LE(d.p_wind[k], d.p_wind[k + 1]);
    }
  }
  const auto th = thermal_check(d.p_core.back(), d.p_wind.back(), d.geometry, req.t_amb);
  EXPECT_LE(th.hotspot(), req.t_tx_max);
}

TEST(Optimize, UnreachableLeakage) {
  auto req = shipped_requirements(14, 70e3, 0.8);
  req.l_lk = 1e-3;
  const auto& db = support::shipped_db();
  const auto got = optimize_transformer(req, db.core, db.winding, small_grid());
  EXPECT_FALSE(got.design);
  EXPECT_NE(got.reason.find("leakage"), std::string::npos);
}
