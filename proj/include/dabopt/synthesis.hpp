#pragma once

// Full per-configuration evaluation, 350 kW scaling, min-max normalization, Pareto front,
// benchmark filter and the parallel sweep driver.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "dabopt/capbank.hpp"
#include "dabopt/cooling.hpp"
#include "dabopt/datastore.hpp"
#include "dabopt/electrical.hpp"
#include "dabopt/magnetics.hpp"
#include "dabopt/semis.hpp"

namespace dabopt {

struct DesignVariables {
  int n_modules{7};
  double f_sw{30e3};
  double n{0.9};
};

struct PointResult {
  OperatingPoint op;
  double d{0.0};
  std::array<double, 5> t{};
  std::array<double, 5> i_l{};
  double p_semis_primary{0.0};   // whole bridge
  double p_semis_secondary{0.0};
  double t_j_primary{0.0};
  double t_j_secondary{0.0};
  double p_core{0.0};
  double p_wind{0.0};
  double p_cap{0.0};
  double p_loss{0.0};
  double efficiency{0.0};
};

struct CostBreakdown {
  double switches{0.0};
  double cooling{0.0};
  double transformer{0.0};
  double capacitors{0.0};

  double module() const { return switches + cooling + transformer + capacitors; }
};

struct DesignEvaluation {
  DesignVariables vars;
  bool feasible{false};
  std::string reason;
  double l_lk{0.0};
  CostBreakdown cost;
  std::vector<PointResult> points;
  double avg_loss{0.0};          // per module, mean over the grid
  double scaled_cost{0.0};       // N * module cost
  double scaled_avg_loss{0.0};   // N * avg_loss
  double min_eff_full_load{0.0};
  double avg_eff_all{0.0};
  double avg_eff_full_load{0.0};
  double norm_cost{0.0};
  double norm_loss{0.0};
  bool pareto{false};
  bool benchmark_pass{false};

  std::optional<SwitchSelection> primary_switch;
  std::optional<SwitchSelection> secondary_switch;
  std::optional<CoolingDesign> primary_cooling;
  std::optional<CoolingDesign> secondary_cooling;
  std::optional<TransformerDesign> transformer;
  std::optional<CapacitorBank> capacitors;
};

inline double average_loss_metric(const std::vector<double>& losses) {
  if (losses.empty()) return 0.0;
  return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
}

// Shared read-only inputs of a sweep; cooling candidates are precomputed once.
class Evaluator {
 public:
  Evaluator(Config cfg, Databases db, TransformerGrid tx_grid = TransformerGrid::standard(), HeatsinkGrid hs_grid = {})
      : cfg_(std::move(cfg)), db_(std::move(db)), tx_grid_(std::move(tx_grid)) {
    cooling_ = cooling_candidates(db_.fans, db_.heatsink, hs_grid);
  }

  const Config& config() const { return cfg_; }
  const Databases& databases() const { return db_; }

  DesignEvaluation evaluate(const DesignVariables& v) const {
    DesignEvaluation e;
    e.vars = v;
    const SystemSpec& sys = cfg_.system;
    const ModelOptions& mo = cfg_.model;
    auto fail = [&](std::string why) {
      e.feasible = false;
      e.reason = std::move(why);
      return e;
    };

    ConverterSpec spec = make_converter_spec(sys, v.n_modules, v.f_sw, v.n);
    const auto grid = operating_grid(sys, cfg_.space, spec);
    spec.l_lk = size_leakage_inductance(spec, grid, mo.d_design);
    e.l_lk = spec.l_lk;
    if (!(spec.l_lk > 0.0) || !std::isfinite(spec.l_lk)) return fail("electrical: no leakage inductance");

    std::vector<CurrentStats> stats;
    stats.reserve(grid.size());
    e.points.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      double d = 0.0;
      try {
        d = solve_phase_shift(grid[k], spec);
      } catch (const InfeasiblePower& ex) {
        return fail(std::string("electrical: ") + ex.what());
      }
      const WaveformSolution w = build_waveform(grid[k], spec, d);
      stats.push_back(extract_current_stats(w, grid[k]));
      auto& pr = e.points[k];
      pr.op = grid[k];
      pr.d = d;
      pr.t = w.t;
      pr.i_l = w.i_l;
    }

    // Devices, sized at the worst rms over the grid.
    double rms_p = 0.0, rms_s = 0.0;
    for (const auto& s : stats) {
      rms_p = std::max(rms_p, s.primary.total_rms());
      rms_s = std::max(rms_s, s.secondary.total_rms());
    }
    e.primary_switch = select_device(rms_p, db_.switches, sys.v_in_max, Bridge::primary, mo.rms_margin,
                                     mo.voltage_margin, mo.max_parallel);
    if (!e.primary_switch) return fail("semis: no primary device meets the current/voltage margins");
    e.secondary_switch = select_device(rms_s, db_.switches, sys.v_out_max, Bridge::secondary, mo.rms_margin,
                                       mo.voltage_margin, mo.max_parallel);
    if (!e.secondary_switch) return fail("semis: no secondary device meets the current/voltage margins");

    double die_max_p = 0.0, die_max_s = 0.0, bridge_max_p = 0.0, bridge_max_s = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto lp = bridge_die_loss(stats[k].primary, *e.primary_switch, v.f_sw, sys.t_c_max);
      const auto ls = bridge_die_loss(stats[k].secondary, *e.secondary_switch, v.f_sw, sys.t_c_max);
      if (!lp.converged || !ls.converged) return fail("semis: electro-thermal iteration did not converge");
      if (lp.over_limit || ls.over_limit) return fail("semis: junction temperature above device limit");
      auto& pr = e.points[k];
      pr.p_semis_primary = lp.p_loss_sw * e.primary_switch->device_count();
      pr.p_semis_secondary = ls.p_loss_sw * e.secondary_switch->device_count();
      pr.t_j_primary = lp.t_j;
      pr.t_j_secondary = ls.t_j;
      die_max_p = std::max(die_max_p, lp.p_loss_sw);
      die_max_s = std::max(die_max_s, ls.p_loss_sw);
      bridge_max_p = std::max(bridge_max_p, pr.p_semis_primary);
      bridge_max_s = std::max(bridge_max_s, pr.p_semis_secondary);
    }

    // One heatsink per bridge, sized for the worst grid point.
    auto cool = [&](double die_max, double bridge_max) -> std::optional<CoolingDesign> {
      if (!(bridge_max > 0.0)) return optimize_cooling(std::numeric_limits<double>::infinity(), cooling_);
      const double r_max = required_rth(sys.t_c_max, sys.t_amb, die_max, mo.r_th_cs, bridge_max);
      return optimize_cooling(r_max, cooling_);
    };
    e.primary_cooling = cool(die_max_p, bridge_max_p);
    if (!e.primary_cooling) return fail("cooling: no fan/heatsink meets the primary bridge resistance");
    e.secondary_cooling = cool(die_max_s, bridge_max_s);
    if (!e.secondary_cooling) return fail("cooling: no fan/heatsink meets the secondary bridge resistance");

    TransformerRequirements req;
    req.n = v.n;
    req.f_sw = v.f_sw;
    req.l_lk = spec.l_lk;
    req.t_amb = sys.t_amb;
    req.t_tx_max = sys.t_tx_max;
    req.lambda = mo.lambda_usd_per_w;
    req.harmonics = mo.harmonics;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      req.v_in.push_back(grid[k].v_in);
      req.i_l.push_back(stats[k].winding_current);
    }
    auto tx = optimize_transformer(req, db_.core, db_.winding, tx_grid_);
    if (!tx.design) return fail(tx.reason);
    e.transformer = std::move(tx.design);

    double c_o = 0.0;
    for (const auto& s : stats) c_o = std::max(c_o, required_capacitance(s, sys.dv_c_max));
    e.capacitors = select_bank(c_o, sys.v_out_max, db_.capacitors, mo.cap_voltage_margin);
    if (!e.capacitors) return fail("capacitors: no bank meets capacitance and voltage");

    std::vector<double> losses;
    double full = 0.0;
    for (const auto& op : grid) full = std::max(full, op.load_fraction);
    double eff_sum = 0.0, eff_full_sum = 0.0;
    int full_count = 0;
    e.min_eff_full_load = 1.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      auto& pr = e.points[k];
      pr.p_core = e.transformer->p_core[k];
      pr.p_wind = e.transformer->p_wind[k];
      pr.p_cap = capacitor_loss(*e.capacitors, stats[k].cap_rms);
      e.capacitors->p_cap.push_back(pr.p_cap);
      pr.p_loss = pr.p_semis_primary + pr.p_semis_secondary + pr.p_core + pr.p_wind + pr.p_cap;
      pr.efficiency = pr.op.p_req / (pr.op.p_req + pr.p_loss);
      losses.push_back(pr.p_loss);
      eff_sum += pr.efficiency;
      if (pr.op.load_fraction == full) {
        e.min_eff_full_load = std::min(e.min_eff_full_load, pr.efficiency);
        eff_full_sum += pr.efficiency;
        ++full_count;
      }
    }
    e.avg_loss = average_loss_metric(losses);
    e.avg_eff_all = eff_sum / static_cast<double>(grid.size());
    e.avg_eff_full_load = full_count ? eff_full_sum / full_count : 0.0;

    e.cost.switches = e.primary_switch->cost() + e.secondary_switch->cost();
    e.cost.cooling = e.primary_cooling->total_cost + e.secondary_cooling->total_cost;
    e.cost.transformer = e.transformer->cost.total();
    e.cost.capacitors = e.capacitors->total_cost;
    e.scaled_cost = v.n_modules * e.cost.module();
    e.scaled_avg_loss = v.n_modules * e.avg_loss;
    e.feasible = true;
    return e;
  }

 private:
  Config cfg_;
  Databases db_;
  TransformerGrid tx_grid_;
  std::vector<CoolingDesign> cooling_;
};

// ---------------------------------------------------------------------------
// Pareto front and normalization

struct Objective {
  double cost{0.0};
  double loss{0.0};
};

inline bool dominates(const Objective& a, const Objective& b) {
  return a.cost <= b.cost && a.loss <= b.loss && (a.cost < b.cost || a.loss < b.loss);
}

// Non-dominated flags by a cost-sorted sweep, O(n log n).
inline std::vector<bool> pareto_front(const std::vector<Objective>& pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(pts[a].cost, pts[a].loss) < std::tie(pts[b].cost, pts[b].loss);
  });
  std::vector<bool> member(pts.size(), false);
  double best = std::numeric_limits<double>::infinity();  // lowest loss at strictly lower cost
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && pts[order[j]].cost == pts[order[i]].cost) ++j;
    const double group_min = pts[order[i]].loss;
    if (group_min < best)
      for (std::size_t k = i; k < j && pts[order[k]].loss == group_min; ++k) member[order[k]] = true;
    best = std::min(best, group_min);
    i = j;
  }
  return member;
}

inline std::vector<double> min_max(const std::vector<double>& v) {
  if (v.empty()) return {};
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double a = *lo, span = *hi - *lo;
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(span > 0.0 ? (x - a) / span : 0.0);
  return out;
}

// Min-max normalizes the scaled axes over feasible evaluations and marks Pareto members.
// Returns false when nothing is feasible.
inline bool scale_and_normalize(std::vector<DesignEvaluation>& evals) {
  std::vector<std::size_t> idx;
  std::vector<double> cost, loss;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    auto& e = evals[i];
    e.pareto = false;
    if (!e.feasible) continue;
    e.scaled_cost = e.vars.n_modules * e.cost.module();
    e.scaled_avg_loss = e.vars.n_modules * e.avg_loss;
    idx.push_back(i);
    cost.push_back(e.scaled_cost);
    loss.push_back(e.scaled_avg_loss);
  }
  if (idx.empty()) return false;
  const auto nc = min_max(cost), nl = min_max(loss);
  std::vector<Objective> pts;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    evals[idx[k]].norm_cost = nc[k];
    evals[idx[k]].norm_loss = nl[k];
    pts.push_back({nc[k], nl[k]});
  }
  const auto front = pareto_front(pts);
  for (std::size_t k = 0; k < idx.size(); ++k) evals[idx[k]].pareto = front[k];
  return true;
}

struct BenchmarkResult {
  std::optional<std::size_t> index;
  double best_min_efficiency{0.0};
};

// Min scaled cost among designs whose worst full-load efficiency reaches the threshold.
// Ties: lower scaled average loss, then fewer modules, lower f_sw, lower n.
inline BenchmarkResult benchmark_filter(std::vector<DesignEvaluation>& evals, double threshold = 0.95) {
  BenchmarkResult r;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    auto& e = evals[i];
    e.benchmark_pass = false;
    if (!e.feasible) continue;
    r.best_min_efficiency = std::max(r.best_min_efficiency, e.min_eff_full_load);
    if (!(e.min_eff_full_load >= threshold)) continue;
    e.benchmark_pass = true;
    if (!r.index) {
      r.index = i;
      continue;
    }
    const auto& b = evals[*r.index];
    if (std::tie(e.scaled_cost, e.scaled_avg_loss, e.vars.n_modules, e.vars.f_sw, e.vars.n) <
        std::tie(b.scaled_cost, b.scaled_avg_loss, b.vars.n_modules, b.vars.f_sw, b.vars.n))
      r.index = i;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sweep

// Grid order: N, then f_sw, then n, each as listed in the design space.
inline std::vector<DesignVariables> design_grid(const DesignSpace& s) {
  std::vector<DesignVariables> out;
  for (int n_mod : s.n_modules)
    for (double f : s.f_sw)
      for (double n : s.turns_ratio) out.push_back({n_mod, f, n});
  return out;
}

inline int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename Progress>
std::vector<DesignEvaluation> run_sweep(const Evaluator& ev, const std::vector<DesignVariables>& vars, int jobs,
                                        Progress&& progress) {
  std::vector<DesignEvaluation> out(vars.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= vars.size()) return;
      out[i] = ev.evaluate(vars[i]);
      progress(done.fetch_add(1) + 1, vars.size());
    }
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(1, vars.size()))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

inline std::vector<DesignEvaluation> run_sweep(const Evaluator& ev, const std::vector<DesignVariables>& vars, int jobs) {
  return run_sweep(ev, vars, jobs, [](std::size_t, std::size_t) {});
}

}  // namespace dabopt
