#pragma once

// Foil-wound transformer: flux density, energy-method leakage, iGSE core loss, Dowell winding
// loss, two-node thermal network, volume-based cost and the exhaustive geometry scan.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dabopt/datastore.hpp"
#include "dabopt/pwl.hpp"

namespace dabopt {

inline constexpr double mu_0 = 4e-7 * std::numbers::pi;
inline constexpr double stefan_boltzmann = 5.670374419e-8;

// Clearance added to each winding build and kept between foil edge and yoke.
inline constexpr double winding_clearance = 0.002;

struct TransformerGeometry {
  double w_core{0.05};
  double d_core{0.05};
  double h_wind{0.1};
  double w_lk{0.02};
  double w_foil{0.5e-3};
  int n_p{12};
  int n_s{12};

  double core_area() const { return w_core * d_core; }
  double build_p() const { return n_p * w_foil; }
  double build_s() const { return n_s * w_foil; }
  double foil_height() const { return h_wind - 2.0 * winding_clearance; }
  double w_wind() const { return build_p() + winding_clearance + w_lk + build_s() + winding_clearance; }
  double leg_perimeter() const { return 2.0 * (w_core + d_core); }
  double mlt_primary() const { return leg_perimeter() + 2.0 * std::numbers::pi * (winding_clearance + 0.5 * build_p()); }
  double mlt_secondary() const {
    return leg_perimeter() + 2.0 * std::numbers::pi * (winding_clearance + build_p() + w_lk + 0.5 * build_s());
  }
  double mlt_gap() const { return leg_perimeter() + 2.0 * std::numbers::pi * (winding_clearance + build_p() + 0.5 * w_lk); }
  bool valid() const { return n_p >= 1 && n_s >= 1 && foil_height() > 0.0 && w_wind() > 0.0; }
};

// Peak flux of a 50 % duty square-wave excitation.
inline double flux_density(double v_in, double f_sw, int n_p, double core_area) {
  return v_in / (4.0 * f_sw * n_p * core_area);
}

inline Pwl triangular_flux(double b_peak, double f_sw) {
  const double t = 1.0 / f_sw;
  const double tt[] = {0.0, 0.5 * t, t};
  const double bb[] = {-b_peak, b_peak, -b_peak};
  return Pwl::from_polyline(t, tt, bb);
}

// Energy-method leakage of two concentric foil windings separated by a gap w_lk.
inline double estimate_leakage(int n_p, double mlt, double w_lk, double build_p, double build_s, double h_wind) {
  return mu_0 * n_p * n_p * mlt * (w_lk + (build_p + build_s) / 3.0) / h_wind;
}

inline double estimate_leakage(const TransformerGeometry& g) {
  return estimate_leakage(g.n_p, g.mlt_gap(), g.w_lk, g.build_p(), g.build_s(), g.h_wind);
}

// iGSE coefficient k_i from the sinusoidal Steinmetz parameters.
inline double igse_ki(const CoreMaterial& m) {
  const double a = m.steinmetz_alpha, b = m.steinmetz_beta;
  const double cos_integral = 2.0 * std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (a + 1.0)) / std::tgamma(0.5 * a + 1.0);
  return m.steinmetz_k / (std::pow(2.0 * std::numbers::pi, a - 1.0) * cos_integral * std::pow(2.0, b - a));
}

// Volumetric iGSE loss density [W/m^3] of a periodic piecewise-linear flux waveform (major loop).
inline double igse_density(const Pwl& b, const CoreMaterial& m) {
  if (b.empty()) return 0.0;
  double b_min = b.segments().front().v0, b_max = b_min;
  for (const auto& s : b.segments()) {
    b_min = std::min({b_min, s.v0, s.v1});
    b_max = std::max({b_max, s.v0, s.v1});
  }
  const double dbpp = b_max - b_min;
  if (!(dbpp > 0.0)) return 0.0;
  const double ki = igse_ki(m);
  const double a = m.steinmetz_alpha;
  double acc = 0.0;
  for (const auto& s : b.segments()) {
    const double dt = s.duration();
    acc += std::pow(std::abs(s.v1 - s.v0) / dt, a) * dt;
  }
  return ki * std::pow(dbpp, m.steinmetz_beta - a) * acc / b.period();
}

inline double core_loss_igse(const Pwl& b, const CoreMaterial& m, double v_core) { return igse_density(b, m) * v_core; }

// Dowell resistance factor of a foil winding with `layers` layers at penetration ratio delta.
inline double dowell_factor(double delta, int layers) {
  double s1, s2;  // delta*zeta1, delta*zeta2
  if (delta < 1e-2) {
    const double d4 = delta * delta * delta * delta;
    s1 = 1.0 + 4.0 * d4 / 45.0;
    s2 = d4 / 6.0;
  } else if (delta > 20.0) {
    s1 = delta;
    s2 = delta;
  } else {
    s1 = delta * (std::sinh(2 * delta) + std::sin(2 * delta)) / (std::cosh(2 * delta) - std::cos(2 * delta));
    s2 = delta * (std::sinh(delta) - std::sin(delta)) / (std::cosh(delta) + std::cos(delta));
  }
  const double m = layers;
  return s1 + 2.0 / 3.0 * (m * m - 1.0) * s2;
}

struct FoilWinding {
  int turns{1};
  double mlt{0.0};
  double thickness{0.0};
  double foil_height{0.0};
  double window_height{0.0};

  double r_dc(double resistivity) const { return resistivity * turns * mlt / (thickness * foil_height); }
  double porosity() const { return foil_height / window_height; }
};

inline double skin_depth(double resistivity, double f) { return std::sqrt(resistivity / (std::numbers::pi * f * mu_0)); }

inline double foil_penetration(const FoilWinding& w, double resistivity, double f) {
  return w.thickness / skin_depth(resistivity, f) * std::sqrt(w.porosity());
}

namespace detail {

// Residual spectrum above harmonic H modelled as I_v^2 ~ v^-p up to 10 H. The decay p comes from the
// energy ratio of the bands (H/4, H/2] and (H/2, H]. Nodes are Simpson points in ln v; the weights
// sum to one, so sum_j w_j F(v_j) is the tail-averaged resistance factor.
struct TailQuadrature {
  std::vector<double> nodes;  // harmonic numbers, not integers
  std::vector<double> weights;
};

inline constexpr int tail_intervals = 32;

inline std::vector<double> tail_nodes(int harmonics) {
  const double a = std::log(harmonics + 0.5), b = std::log(10.0 * harmonics + 0.5);
  std::vector<double> v;
  for (int k = 0; k <= tail_intervals; ++k) v.push_back(std::exp(a + (b - a) * k / tail_intervals));
  return v;
}

// i2[h] = energy of harmonic h for h = 1..H
inline TailQuadrature tail_quadrature(const std::vector<double>& i2, int harmonics) {
  double lo = 0.0, hi = 0.0;
  for (int h = harmonics / 4 + 1; h <= harmonics; ++h) (h <= harmonics / 2 ? lo : hi) += i2[static_cast<std::size_t>(h)];
  double p = hi > 0.0 && lo > 0.0 ? 1.0 + std::log2(lo / hi) : 2.0;
  p = std::clamp(p, 2.0, 8.0);
  TailQuadrature q;
  q.nodes = tail_nodes(harmonics);
  double den = 0.0;
  for (int k = 0; k <= tail_intervals; ++k) {
    const double c = (k == 0 || k == tail_intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    q.weights.push_back(c * std::pow(q.nodes[static_cast<std::size_t>(k)], 1.0 - p));
    den += q.weights.back();
  }
  for (double& w : q.weights) w /= den;
  return q;
}

}  // namespace detail

// Harmonic-domain loss of one foil winding carrying current i(t): DC + harmonics 1..H exactly,
// the residual rms energy above H through the tail quadrature.
inline double winding_loss(const Pwl& current, const FoilWinding& w, const WindingMaterial& mat, double t_wind,
                           int harmonics = 50) {
  const double rho = mat.resistivity(t_wind);
  const double r_dc = w.r_dc(rho);
  const double f0 = 1.0 / current.period();
  const double dc = current.mean();
  double loss = dc * dc * r_dc;
  double captured = dc * dc;
  std::vector<double> i2(harmonics + 1, 0.0);
  for (int h = 1; h <= harmonics; ++h) {
    const double irms = current.harmonic_rms(h);
    i2[h] = irms * irms;
    captured += i2[h];
    loss += i2[h] * r_dc * dowell_factor(foil_penetration(w, rho, h * f0), w.turns);
  }
  const double total = current.rms() * current.rms();
  const double tail = std::max(0.0, total - captured);
  if (tail > 1e-12 * total) {
    const auto q = detail::tail_quadrature(i2, harmonics);
    double f = 0.0;
    for (std::size_t j = 0; j < q.nodes.size(); ++j)
      f += q.weights[j] * dowell_factor(foil_penetration(w, rho, q.nodes[j] * f0), w.turns);
    loss += tail * r_dc * f;
  }
  return loss;
}

inline FoilWinding primary_winding(const TransformerGeometry& g) {
  return {g.n_p, g.mlt_primary(), g.w_foil, g.foil_height(), g.h_wind};
}
inline FoilWinding secondary_winding(const TransformerGeometry& g) {
  return {g.n_s, g.mlt_secondary(), g.w_foil, g.foil_height(), g.h_wind};
}

// Primary winding carries i_L, the secondary i_L / n.
inline double transformer_winding_loss(const Pwl& i_l, double n, const TransformerGeometry& g, const WindingMaterial& mat,
                                       double t_wind, int harmonics = 50) {
  return winding_loss(i_l, primary_winding(g), mat, t_wind, harmonics) +
         winding_loss(i_l.scaled(1.0 / n), secondary_winding(g), mat, t_wind, harmonics);
}

// ---------------------------------------------------------------------------
// Thermal network: core node and winding node, each to ambient by natural convection and
// radiation, coupled through the bobbin clearance.

inline constexpr double emissivity = 0.85;
inline constexpr double k_insulation = 0.25;  // W/(m K)

struct ThermalAreas {
  double core{0.0};
  double winding{0.0};
  double coupling{0.0};
  double core_height{0.0};
  double winding_height{0.0};
};

inline ThermalAreas thermal_areas(const TransformerGeometry& g) {
  const double ww = g.w_wind();
  const double width = 2.0 * g.w_core + 2.0 * ww;
  const double height = g.h_wind + g.w_core;
  ThermalAreas a;
  a.core = 2.0 * (width * height - 2.0 * ww * g.h_wind) + 2.0 * height * g.d_core + 2.0 * width * g.d_core;
  a.winding = 2.0 * g.h_wind * (g.w_core + 4.0 * ww);
  a.coupling = g.leg_perimeter() * g.h_wind;
  a.core_height = height;
  a.winding_height = g.h_wind;
  return a;
}

inline double surface_htc(double t_surface, double t_amb, double length) {
  const double dt = std::max(0.0, t_surface - t_amb);
  const double ts = t_surface + 273.15, ta = t_amb + 273.15;
  const double h_conv = 1.42 * std::pow(dt / length, 0.25);
  const double h_rad = dt > 1e-9 ? emissivity * stefan_boltzmann * (ts * ts * ts * ts - ta * ta * ta * ta) / dt
                                 : 4.0 * emissivity * stefan_boltzmann * ta * ta * ta;
  return h_conv + h_rad;
}

struct TxThermal {
  double t_core{0.0};
  double t_wind{0.0};
  int iterations{0};
  bool converged{false};

  double hotspot() const { return std::max(t_core, t_wind); }
};

inline TxThermal thermal_check(double p_core, double p_wind, const TransformerGeometry& g, double t_amb,
                               double tol = 0.1, int max_iter = 200) {
  const ThermalAreas a = thermal_areas(g);
  const double g_cw = k_insulation * a.coupling / winding_clearance;
  TxThermal r;
  double tc = t_amb, tw = t_amb;
  for (int k = 1; k <= max_iter; ++k) {
    const double g_ca = surface_htc(tc, t_amb, a.core_height) * a.core;
    const double g_wa = surface_htc(tw, t_amb, a.winding_height) * a.winding;
    // [g_ca + g_cw, -g_cw; -g_cw, g_wa + g_cw] * [dtc; dtw] = [p_core; p_wind] (rises over ambient)
    const double a11 = g_ca + g_cw, a22 = g_wa + g_cw, a12 = -g_cw;
    const double det = a11 * a22 - a12 * a12;
    const double dtc = (p_core * a22 - a12 * p_wind) / det;
    const double dtw = (a11 * p_wind - a12 * p_core) / det;
    const double tc_new = t_amb + dtc, tw_new = t_amb + dtw;
    const double change = std::max(std::abs(tc_new - tc), std::abs(tw_new - tw));
    tc = tc_new;
    tw = tw_new;
    r.iterations = k;
    if (change < tol) {
      r.converged = true;
      break;
    }
  }
  r.t_core = tc;
  r.t_wind = tw;
  return r;
}

// ---------------------------------------------------------------------------
// Cost

struct TransformerCost {
  double v_core{0.0};
  double c_core{0.0};
  double v_w{0.0};
  double c_w{0.0};

  double total() const { return c_core + c_w; }
};

inline TransformerCost transformer_cost(const TransformerGeometry& g, double core_cost_per_m3, double winding_cost_per_m3) {
  TransformerCost c;
  c.v_core = 2.0 * g.w_core * g.d_core * (g.h_wind + g.w_core + g.w_wind());
  c.c_core = c.v_core * core_cost_per_m3;
  const double area = g.w_foil * g.foil_height();
  c.v_w = g.n_p * g.mlt_primary() * area + g.n_s * g.mlt_secondary() * area;
  c.c_w = c.v_w * winding_cost_per_m3;
  return c;
}

// ---------------------------------------------------------------------------
// Optimizer

struct TransformerGrid {
  std::vector<double> w_core;
  std::vector<double> d_core;
  std::vector<double> h_wind;
  std::vector<double> w_lk;
  std::vector<double> w_foil{0.1e-3, 0.2e-3, 0.5e-3, 1e-3, 2e-3};
  std::vector<int> n_p;

  static TransformerGrid standard() {
    TransformerGrid g;
    for (int k = 1; k <= 10; ++k) g.w_core.push_back(0.01 * k);
    for (int k = 1; k <= 20; ++k) g.d_core.push_back(0.01 * k);
    for (int k = 1; k <= 20; ++k) g.h_wind.push_back(0.01 * k);
    for (int k = 0; k <= 8; ++k) g.w_lk.push_back(detail::snap(0.01 + 0.005 * k));
    for (int k = 3; k <= 50; k += 3) g.n_p.push_back(k);
    return g;
  }
};

struct TransformerRequirements {
  double n{1.0};
  double f_sw{0.0};
  double l_lk{0.0};
  std::vector<double> v_in;  // per operating point
  std::vector<Pwl> i_l;      // per operating point, primary winding current
  double t_amb{25.0};
  double t_tx_max{100.0};
  double lambda{1.0};        // USD per W of average loss
  double ratio_tolerance{0.05};
  double leakage_tolerance{0.10};
  int harmonics{50};
};

struct TransformerDesign {
  TransformerGeometry geometry;
  double l_lk_tx{0.0};
  double b_max{0.0};
  std::vector<double> p_core;
  std::vector<double> p_wind;
  std::vector<double> t_core;
  std::vector<double> t_wind;
  TransformerCost cost;
  double avg_loss{0.0};
  double objective{0.0};
};

inline int secondary_turns(int n_p, double n) { return static_cast<int>(std::lround(n * n_p)); }

inline bool turns_ratio_ok(int n_p, int n_s, double n, double tol) {
  return n_s >= 1 && std::abs(static_cast<double>(n_s) / n_p - n) <= tol * n;
}

namespace detail {

// Per-harmonic energy of each winding current, shared by every geometry of a scan.
struct HarmonicSpectra {
  int harmonics{0};
  std::vector<std::vector<double>> per_point;  // [k][h], h = 0 is DC^2, h = H + 1 is the tail
  std::vector<std::vector<double>> tail_weights;  // [k][j] over tail_nodes(H)
};

inline HarmonicSpectra spectra(const std::vector<Pwl>& currents, int harmonics) {
  HarmonicSpectra s;
  s.harmonics = harmonics;
  for (const auto& i : currents) {
    std::vector<double> e(static_cast<std::size_t>(harmonics + 2), 0.0);
    const double dc = i.mean();
    e[0] = dc * dc;
    double captured = e[0];
    for (int h = 1; h <= harmonics; ++h) {
      const double r = i.harmonic_rms(h);
      e[static_cast<std::size_t>(h)] = r * r;
      captured += r * r;
    }
    e[static_cast<std::size_t>(harmonics + 1)] = std::max(0.0, i.rms() * i.rms() - captured);
    s.tail_weights.push_back(tail_quadrature(e, harmonics).weights);
    s.per_point.push_back(std::move(e));
  }
  return s;
}

// sum_h F_h(m) E_h = A + (m^2 - 1) B for a foil of given penetration at the fundamental.
struct DowellSums {
  double a{0.0};
  double b{0.0};
  double at(int layers) const { return a + (static_cast<double>(layers) * layers - 1.0) * b; }
};

// Single-layer factor and the (m^2 - 1) slope at h = 1 .. H and at the tail nodes.
struct DowellTable {
  std::vector<double> f1;
  std::vector<double> slope;
  std::vector<double> tail_f1;
  std::vector<double> tail_slope;
};

inline DowellTable dowell_table(double delta_1, int harmonics) {
  DowellTable t;
  auto push = [&](double v, std::vector<double>& f1s, std::vector<double>& slopes) {
    const double d = delta_1 * std::sqrt(v);
    const double f1 = dowell_factor(d, 1);
    f1s.push_back(f1);
    slopes.push_back((dowell_factor(d, 2) - f1) / 3.0);
  };
  for (int h = 1; h <= harmonics; ++h) push(h, t.f1, t.slope);
  for (double v : tail_nodes(harmonics)) push(v, t.tail_f1, t.tail_slope);
  return t;
}

inline DowellSums dowell_sums(const std::vector<double>& energy, const std::vector<double>& tail_w, const DowellTable& t) {
  DowellSums out{energy[0], 0.0};
  const std::size_t h_max = t.f1.size();
  for (std::size_t h = 1; h <= h_max; ++h) {
    out.a += t.f1[h - 1] * energy[h];
    out.b += t.slope[h - 1] * energy[h];
  }
  const double tail = energy[h_max + 1];
  if (tail > 0.0) {
    for (std::size_t j = 0; j < tail_w.size(); ++j) {
      out.a += tail * tail_w[j] * t.tail_f1[j];
      out.b += tail * tail_w[j] * t.tail_slope[j];
    }
  }
  return out;
}

}  // namespace detail

struct TransformerScanResult {
  std::optional<TransformerDesign> design;
  std::string reason;
  std::size_t candidates{0};
};

// Exhaustive scan over the geometry grid. Gates: turns ratio, B_max < B_sat, leakage within
// tolerance of the target, hotspot <= t_tx_max. Minimizes cost + lambda * average loss, with
// ties broken by cost then geometry. Winding losses are evaluated at t_tx_max.
inline TransformerScanResult optimize_transformer(const TransformerRequirements& req, const CoreMaterial& core,
                                                  const WindingMaterial& wind, const TransformerGrid& grid) {
  TransformerScanResult out;
  const std::size_t points = req.v_in.size();
  if (points == 0 || req.i_l.size() != points) {
    out.reason = "transformer: empty operating grid";
    return out;
  }
  const double v_in_max = *std::max_element(req.v_in.begin(), req.v_in.end());
  const double beta = core.steinmetz_beta;
  const double rho = wind.resistivity(req.t_tx_max);

  // Core loss density for n_p * A_c = 1; iGSE is homogeneous of degree beta in B.
  std::vector<double> pv_unit(points);
  double pv_unit_mean = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    pv_unit[k] = igse_density(triangular_flux(req.v_in[k] / (4.0 * req.f_sw), req.f_sw), core);
    pv_unit_mean += pv_unit[k] / static_cast<double>(points);
  }

  const auto spec = detail::spectra(req.i_l, req.harmonics);
  const double n2 = req.n * req.n;

  // Dowell sums per (foil, window height): mean over points and per point.
  const std::size_t nf = grid.w_foil.size(), nh = grid.h_wind.size();
  std::vector<detail::DowellSums> mean_sums(nf * nh);
  std::vector<std::vector<detail::DowellSums>> point_sums(nf * nh, std::vector<detail::DowellSums>(points));
  for (std::size_t fi = 0; fi < nf; ++fi)
    for (std::size_t hi = 0; hi < nh; ++hi) {
      const double h_wind = grid.h_wind[hi];
      const double foil_h = h_wind - 2.0 * winding_clearance;
      if (foil_h <= 0.0) continue;
      const double delta1 = grid.w_foil[fi] / skin_depth(rho, req.f_sw) * std::sqrt(foil_h / h_wind);
      const auto table = detail::dowell_table(delta1, req.harmonics);
      auto& mean = mean_sums[fi * nh + hi];
      for (std::size_t k = 0; k < points; ++k) {
        const auto ps = detail::dowell_sums(spec.per_point[k], spec.tail_weights[k], table);
        point_sums[fi * nh + hi][k] = ps;
        mean.a += ps.a / static_cast<double>(points);
        mean.b += ps.b / static_cast<double>(points);
      }
    }

  struct Candidate {
    double objective;
    double cost;
    std::size_t ip, iwc, idc, ifo, ih, ilk;
  };
  // Geometry tie-break is lexicographic in (w_core, d_core, h_wind, w_lk, w_foil, n_p).
  auto lex_key = [](const Candidate& c) { return std::tie(c.iwc, c.idc, c.ih, c.ilk, c.ifo, c.ip); };
  auto heap_greater = [&](const Candidate& a, const Candidate& b) {
    if (a.objective != b.objective) return a.objective > b.objective;
    if (a.cost != b.cost) return a.cost > b.cost;
    return lex_key(a) > lex_key(b);
  };

  std::vector<Candidate> feasible;
  bool any_ratio = false, any_flux = false, any_leak = false;
  const double l_lo = req.l_lk * (1.0 - req.leakage_tolerance);
  const double l_hi = req.l_lk * (1.0 + req.leakage_tolerance);

  for (std::size_t ip = 0; ip < grid.n_p.size(); ++ip) {
    const int n_p = grid.n_p[ip];
    const int n_s = secondary_turns(n_p, req.n);
    if (!turns_ratio_ok(n_p, n_s, req.n, req.ratio_tolerance)) continue;
    any_ratio = true;
    for (std::size_t iwc = 0; iwc < grid.w_core.size(); ++iwc) {
      for (std::size_t idc = 0; idc < grid.d_core.size(); ++idc) {
        const double w_core = grid.w_core[iwc], d_core = grid.d_core[idc];
        const double ac = w_core * d_core;
        if (!(flux_density(v_in_max, req.f_sw, n_p, ac) < core.b_sat)) continue;
        any_flux = true;
        const double core_density = pv_unit_mean * std::pow(n_p * ac, -beta);
        const double perim = 2.0 * (w_core + d_core);
        for (std::size_t ifo = 0; ifo < nf; ++ifo) {
          const double foil = grid.w_foil[ifo];
          const double bp = n_p * foil, bs = n_s * foil;
          const double mlt_p = perim + 2.0 * std::numbers::pi * (winding_clearance + 0.5 * bp);
          for (std::size_t ih = 0; ih < nh; ++ih) {
            const double h_wind = grid.h_wind[ih];
            const double foil_h = h_wind - 2.0 * winding_clearance;
            if (foil_h <= 0.0) continue;
            const double area = foil * foil_h;
            const auto& ds = mean_sums[ifo * nh + ih];
            const double rdc_p = rho * n_p * mlt_p / area;
            const double p_wind_p = rdc_p * ds.at(n_p);
            for (std::size_t ilk = 0; ilk < grid.w_lk.size(); ++ilk) {
              const double w_lk = grid.w_lk[ilk];
              const double mlt_gap = perim + 2.0 * std::numbers::pi * (winding_clearance + bp + 0.5 * w_lk);
              const double l_tx = estimate_leakage(n_p, mlt_gap, w_lk, bp, bs, h_wind);
              if (l_tx > l_hi) break;  // l_tx grows with w_lk
              if (l_tx < l_lo) continue;
              any_leak = true;
              const double mlt_s = perim + 2.0 * std::numbers::pi * (winding_clearance + bp + w_lk + 0.5 * bs);
              const double rdc_s = rho * n_s * mlt_s / area;
              const double p_wind = p_wind_p + rdc_s * ds.at(n_s) / n2;
              const double w_wind = bp + bs + w_lk + 2.0 * winding_clearance;
              const double v_core = 2.0 * ac * (h_wind + w_core + w_wind);
              const double cost =
                  v_core * core.cost_per_m3 + (n_p * mlt_p + n_s * mlt_s) * area * wind.cost_per_m3;
              const double avg_loss = core_density * v_core + p_wind;
              feasible.push_back({cost + req.lambda * avg_loss, cost, ip, iwc, idc, ifo, ih, ilk});
            }
          }
        }
      }
    }
  }
  out.candidates = feasible.size();
  if (!any_ratio) {
    out.reason = "transformer: no integer turns meet the turns ratio";
    return out;
  }
  if (!any_flux) {
    out.reason = "transformer: flux density above saturation for every core";
    return out;
  }
  if (!any_leak) {
    out.reason = "transformer: target leakage inductance unreachable";
    return out;
  }

  std::make_heap(feasible.begin(), feasible.end(), heap_greater);
  while (!feasible.empty()) {
    std::pop_heap(feasible.begin(), feasible.end(), heap_greater);
    const Candidate c = feasible.back();
    feasible.pop_back();

    TransformerGeometry g;
    g.w_core = grid.w_core[c.iwc];
    g.d_core = grid.d_core[c.idc];
    g.h_wind = grid.h_wind[c.ih];
    g.w_lk = grid.w_lk[c.ilk];
    g.w_foil = grid.w_foil[c.ifo];
    g.n_p = grid.n_p[c.ip];
    g.n_s = secondary_turns(g.n_p, req.n);

    const TransformerCost tc = transformer_cost(g, core.cost_per_m3, wind.cost_per_m3);
    const double v_core = tc.v_core;
    const double np_ac = g.n_p * g.core_area();
    const double rdc_p = rho * g.n_p * g.mlt_primary() / (g.w_foil * g.foil_height());
    const double rdc_s = rho * g.n_s * g.mlt_secondary() / (g.w_foil * g.foil_height());
    const auto& sums = point_sums[c.ifo * nh + c.ih];

    TransformerDesign d;
    d.geometry = g;
    d.cost = tc;
    d.l_lk_tx = estimate_leakage(g);
    d.b_max = flux_density(v_in_max, req.f_sw, g.n_p, g.core_area());
    d.p_core.resize(points);
    d.p_wind.resize(points);
    d.t_core.resize(points);
    d.t_wind.resize(points);
    bool ok = true;
    double sum = 0.0;
    for (std::size_t k = 0; k < points && ok; ++k) {
      d.p_core[k] = pv_unit[k] * std::pow(np_ac, -beta) * v_core;
      d.p_wind[k] = rdc_p * sums[k].at(g.n_p) + rdc_s * sums[k].at(g.n_s) / n2;
      sum += d.p_core[k] + d.p_wind[k];
      const TxThermal th = thermal_check(d.p_core[k], d.p_wind[k], g, req.t_amb);
      d.t_core[k] = th.t_core;
      d.t_wind[k] = th.t_wind;
      ok = th.converged && th.hotspot() <= req.t_tx_max;
    }
    if (!ok) continue;
    d.avg_loss = sum / static_cast<double>(points);
    d.objective = tc.total() + req.lambda * d.avg_loss;
    out.design = std::move(d);
    return out;
  }
  out.reason = "transformer: every candidate exceeds the temperature limit";
  return out;
}

}  // namespace dabopt
