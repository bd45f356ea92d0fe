#pragma once

// Forced-convection cooling: fan x straight-fin heatsink scan against a required sink-to-ambient
// thermal resistance.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dabopt/datastore.hpp"

namespace dabopt {

struct HeatsinkGeometry {
  double l_s{0.1};     // sink length along the flow
  double w_s{0.04};    // sink width, equal to the fan width
  double d_s{0.003};   // baseplate thickness
  double h_f{0.03};    // fin height
  double t_f{0.001};   // fin thickness
  int n_f{10};         // fin count

  double channel_width() const { return n_f > 1 ? (w_s - n_f * t_f) / (n_f - 1) : 0.0; }
  bool has_channels() const { return n_f >= 2 && n_f * t_f < w_s && channel_width() > 0.0; }
};

// Dry air at a 40 C film temperature.
namespace air {
inline constexpr double density = 1.127;        // kg/m^3
inline constexpr double viscosity = 1.918e-5;   // Pa s
inline constexpr double conductivity = 0.02662; // W/(m K)
inline constexpr double heat_capacity = 1007.0; // J/(kg K)
inline constexpr double prandtl = viscosity * heat_capacity / conductivity;
}  // namespace air

inline constexpr double k_aluminum = 200.0;  // W/(m K), extrusion alloy

// Thermal resistance with case-to-sink drop of the hottest die removed from the budget.
inline double required_rth(double t_c_max, double t_amb, double p_loss_sw_max, double r_th_c_s, double p_loss_tot_max) {
  return (t_c_max - p_loss_sw_max * r_th_c_s - t_amb) / p_loss_tot_max;
}

struct ChannelFlow {
  double velocity{0.0};
  double d_h{0.0};
  double reynolds{0.0};
};

inline ChannelFlow channel_flow(const HeatsinkGeometry& g, double q) {
  const double s = g.channel_width();
  const double area = (g.n_f - 1) * s * g.h_f;
  ChannelFlow c;
  c.velocity = q / area;
  c.d_h = 2.0 * s * g.h_f / (s + g.h_f);
  c.reynolds = air::density * c.velocity * c.d_h / air::viscosity;
  return c;
}

// Fully developed laminar f*Re (Fanning) of a rectangular duct with aspect ratio <= 1.
inline double fully_developed_fre(double aspect) {
  const double a = aspect;
  return 24.0 * (1.0 - 1.3553 * a + 1.9467 * a * a - 1.7012 * a * a * a + 0.9564 * a * a * a * a -
                 0.2537 * a * a * a * a * a);
}

// Pressure drop of the fin array: developing laminar friction plus entry/exit losses.
inline double heatsink_pressure_drop(const HeatsinkGeometry& g, double q) {
  if (q <= 0.0) return 0.0;
  const ChannelFlow c = channel_flow(g, q);
  const double s = g.channel_width();
  const double aspect = std::min(s, g.h_f) / std::max(s, g.h_f);
  const double l_plus = g.l_s / (c.d_h * c.reynolds);
  const double dev = 3.44 / std::sqrt(l_plus);
  const double fre = std::hypot(dev, fully_developed_fre(aspect));
  const double f_app = fre / c.reynolds;
  const double sigma = (g.n_f - 1) * s / g.w_s;
  const double k_c = 0.42 * (1.0 - sigma * sigma);
  const double k_e = (1.0 - sigma * sigma) * (1.0 - sigma * sigma);
  return (4.0 * f_app * g.l_s / c.d_h + k_c + k_e) * 0.5 * air::density * c.velocity * c.velocity;
}

// Linear fan curve from (0, p_max) to (q_max, 0).
inline double fan_pressure(const FanModel& fan, double q) {
  return fan.max_static_pressure * (1.0 - q / fan.max_flow_m3s());
}

// Simultaneously developing laminar flow between plates (Stephan).
inline double nusselt_developing(double x_star) {
  return 7.55 + 0.024 * std::pow(x_star, -1.14) / (1.0 + 0.0358 * std::pow(air::prandtl, 0.17) * std::pow(x_star, -0.64));
}

inline double fin_efficiency(double h, double t_f, double h_f) {
  const double m = std::sqrt(2.0 * h / (k_aluminum * t_f));
  const double mh = m * h_f;
  return mh > 0.0 ? std::tanh(mh) / mh : 1.0;
}

inline double convection_resistance(double h, double fin_area, double fin_eff, double base_area) {
  return 1.0 / (h * (fin_eff * fin_area + base_area));
}

struct PairResult {
  double volume_flow{0.0};  // m^3/s
  double r_th_s_a{0.0};
  double r_base{0.0};
  double r_conv{0.0};
  double r_air{0.0};
  double h{0.0};
  double pressure{0.0};
};

inline std::optional<PairResult> evaluate_pair(const FanModel& fan, const HeatsinkGeometry& g) {
  if (!g.has_channels() || g.h_f <= 0.0 || g.l_s <= 0.0) return std::nullopt;
  const double q_max = fan.max_flow_m3s();
  double lo = 0.0, hi = q_max;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (heatsink_pressure_drop(g, mid) < fan_pressure(fan, mid)) lo = mid;
    else hi = mid;
  }
  const double q = 0.5 * (lo + hi);
  if (!(q > 0.0)) return std::nullopt;

  PairResult r;
  r.volume_flow = q;
  r.pressure = heatsink_pressure_drop(g, q);
  const ChannelFlow c = channel_flow(g, q);
  const double x_star = g.l_s / (c.d_h * c.reynolds * air::prandtl);
  r.h = nusselt_developing(x_star) * air::conductivity / c.d_h;
  const double fin_area = 2.0 * g.n_f * g.h_f * g.l_s;
  const double base_area = (g.n_f - 1) * g.channel_width() * g.l_s;
  r.r_conv = convection_resistance(r.h, fin_area, fin_efficiency(r.h, g.t_f, g.h_f), base_area);
  r.r_base = g.d_s / (k_aluminum * g.l_s * g.w_s);
  r.r_air = 1.0 / (2.0 * air::density * air::heat_capacity * q);
  r.r_th_s_a = r.r_base + r.r_conv + r.r_air;
  return r;
}

struct HeatsinkCost {
  double volume{0.0};
  double mass{0.0};
  double cost{0.0};
};

inline HeatsinkCost heatsink_cost(const HeatsinkGeometry& g, const HeatsinkCostModel& m) {
  HeatsinkCost c;
  c.volume = g.d_s * g.l_s * g.w_s + (g.n_f + 1) * g.h_f * g.l_s * g.t_f;
  c.mass = c.volume * m.aluminum_density;
  c.cost = c.mass * m.cost_per_kg;
  return c;
}

struct CoolingDesign {
  FanModel fan;
  HeatsinkGeometry geometry;
  double r_th_s_a{0.0};
  double volume_flow{0.0};
  double volume{0.0};
  double mass{0.0};
  double heatsink_cost{0.0};
  double total_cost{0.0};
};

// Discretized heatsink search space; fin heights run from h_f_min up to the fan width.
struct HeatsinkGrid {
  std::vector<double> l_s{0.050, 0.075, 0.100, 0.125, 0.150, 0.175, 0.200};
  double h_f_min{0.010};
  double h_f_step{0.005};
  std::vector<double> t_f{0.001, 0.002, 0.003, 0.004, 0.005};
  std::vector<int> n_f{3, 6, 9, 12, 15, 18, 21, 24, 27, 30, 33, 36, 39, 42, 45, 48};
  double d_s{0.003};

  std::vector<double> fin_heights(double fan_width) const {
    std::vector<double> out;
    for (int k = 0;; ++k) {
      const double h = detail::snap(h_f_min + k * h_f_step);
      if (h > fan_width + 1e-12) break;
      out.push_back(h);
    }
    return out;
  }
};

inline bool cooling_less(const CoolingDesign& a, const CoolingDesign& b) {
  return std::tie(a.total_cost, a.mass, a.fan.part_id, a.geometry.l_s, a.geometry.h_f, a.geometry.t_f, a.geometry.n_f) <
         std::tie(b.total_cost, b.mass, b.fan.part_id, b.geometry.l_s, b.geometry.h_f, b.geometry.t_f, b.geometry.n_f);
}

// Every valid fan x geometry pairing, sorted by the selection order (cost, mass, part id, geometry).
inline std::vector<CoolingDesign> cooling_candidates(const std::vector<FanModel>& fans, const HeatsinkCostModel& cost_model,
                                                     const HeatsinkGrid& grid = {}) {
  std::vector<CoolingDesign> out;
  for (const auto& fan : fans) {
    for (double l_s : grid.l_s)
      for (double h_f : grid.fin_heights(fan.width))
        for (double t_f : grid.t_f)
          for (int n_f : grid.n_f) {
            HeatsinkGeometry g{l_s, fan.width, grid.d_s, h_f, t_f, n_f};
            if (!g.has_channels()) continue;
            const auto pair = evaluate_pair(fan, g);
            if (!pair) continue;
            const auto hc = heatsink_cost(g, cost_model);
            CoolingDesign d;
            d.fan = fan;
            d.geometry = g;
            d.r_th_s_a = pair->r_th_s_a;
            d.volume_flow = pair->volume_flow;
            d.volume = hc.volume;
            d.mass = hc.mass;
            d.heatsink_cost = hc.cost;
            d.total_cost = hc.cost + fan.unit_cost;
            out.push_back(std::move(d));
          }
  }
  std::sort(out.begin(), out.end(), cooling_less);
  return out;
}

// First (cheapest) candidate strictly below the resistance limit; candidates must be pre-sorted.
inline std::optional<CoolingDesign> optimize_cooling(double r_th_s_a_max, const std::vector<CoolingDesign>& sorted) {
  if (!(r_th_s_a_max > 0.0)) return std::nullopt;
  for (const auto& c : sorted)
    if (c.r_th_s_a < r_th_s_a_max) return c;
  return std::nullopt;
}

inline std::optional<CoolingDesign> optimize_cooling(double r_th_s_a_max, const std::vector<FanModel>& fans,
                                                     const HeatsinkCostModel& cost_model,
                                                     const HeatsinkGrid& grid = {}) {
  if (fans.empty()) throw std::invalid_argument("optimize_cooling: empty fan list");
  return optimize_cooling(r_th_s_a_max, cooling_candidates(fans, cost_model, grid));
}

}  // namespace dabopt
