#pragma once

// Single-phase-shift DAB model: leakage sizing, phase-shift solution, piecewise-linear
// inductor current and the device / winding / capacitor current statistics derived from it.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dabopt/datastore.hpp"
#include "dabopt/pwl.hpp"

namespace dabopt {

struct InfeasiblePower : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConverterSpec {
  double p_conv_max{0.0};
  double i_conv_max{0.0};
  double n{1.0};  // turns ratio, secondary referred to primary as v_ac2 / n
  double f_sw{0.0};
  double l_lk{0.0};

  double t_sw() const { return 1.0 / f_sw; }
};

inline ConverterSpec make_converter_spec(const SystemSpec& sys, int n_modules, double f_sw, double n) {
  ConverterSpec s;
  s.p_conv_max = sys.p_max_total / n_modules;
  s.i_conv_max = sys.i_max_total / n_modules;
  s.n = n;
  s.f_sw = f_sw;
  return s;
}

struct OperatingPoint {
  double v_out{0.0};
  double load_fraction{1.0};
  double v_in{0.0};
  double p_req{0.0};
  double i_out{0.0};
};

// Unity conversion ratio point, clamped to the regulated input band.
inline double select_input_voltage(double v_out, double n, double v_in_min, double v_in_max) {
  return std::clamp(v_out / n, v_in_min, v_in_max);
}

inline double required_power(double v_out, double load_fraction, const ConverterSpec& spec) {
  return load_fraction * std::min(spec.p_conv_max, v_out * spec.i_conv_max);
}

inline std::vector<double> output_voltage_grid(const SystemSpec& sys, double step) {
  std::vector<double> v;
  const auto count = static_cast<long>(std::floor((sys.v_out_max - sys.v_out_min) / step + 1e-9));
  for (long k = 0; k <= count; ++k) v.push_back(detail::snap(sys.v_out_min + static_cast<double>(k) * step));
  if (v.back() < sys.v_out_max - 1e-9) v.push_back(sys.v_out_max);
  return v;
}

// Grid order: output voltage ascending, then load fractions in configured order.
inline std::vector<OperatingPoint> operating_grid(const SystemSpec& sys, const DesignSpace& space,
                                                  const ConverterSpec& spec) {
  std::vector<OperatingPoint> grid;
  for (double v_out : output_voltage_grid(sys, space.v_out_grid_step)) {
    for (double load : space.load_fractions) {
      OperatingPoint op;
      op.v_out = v_out;
      op.load_fraction = load;
      op.v_in = select_input_voltage(v_out, spec.n, sys.v_in_min, sys.v_in_max);
      op.p_req = required_power(v_out, load, spec);
      op.i_out = op.p_req / v_out;
      grid.push_back(op);
    }
  }
  return grid;
}

// L = V_out V_in D (1 - D) / (2 n f_sw P) for one operating point.
inline double leakage_for_point(double v_in, double v_out, double n, double f_sw, double p, double d) {
  return v_out * v_in * d * (1.0 - d) / (2.0 * n * f_sw * p);
}

// Smallest leakage over the full-load cells, so every cell stays reachable with D <= d_design.
inline double size_leakage_inductance(const ConverterSpec& spec, const std::vector<OperatingPoint>& grid,
                                      double d_design = 0.5) {
  if (grid.empty()) throw std::invalid_argument("size_leakage_inductance: empty grid");
  double full = 0.0;
  for (const auto& op : grid) full = std::max(full, op.load_fraction);
  double l = std::numeric_limits<double>::infinity();
  for (const auto& op : grid) {
    if (op.load_fraction != full || !(op.p_req > 0.0)) continue;
    l = std::min(l, leakage_for_point(op.v_in, op.v_out, spec.n, spec.f_sw, op.p_req, d_design));
  }
  return l;
}

inline double sps_power(double v_in, double v_out, double n, double f_sw, double l_lk, double d) {
  return v_in * v_out * d * (1.0 - d) / (2.0 * n * f_sw * l_lk);
}

inline double solve_phase_shift(const OperatingPoint& op, const ConverterSpec& spec) {
  if (op.p_req <= 0.0) return 0.0;
  const double kappa = 2.0 * spec.n * spec.f_sw * spec.l_lk * op.p_req / (op.v_in * op.v_out);
  if (kappa > 0.25 + 1e-12) {
    std::ostringstream msg;
    msg << "power " << op.p_req << " W not reachable at V_out=" << op.v_out << " V, V_in=" << op.v_in
        << " V (kappa=" << kappa << ")";
    throw InfeasiblePower(msg.str());
  }
  return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * kappa)));
}

struct WaveformSolution {
  double d{0.0};
  double t_sw{0.0};
  double v_in{0.0};
  double v_out{0.0};
  double n{1.0};
  double l_lk{0.0};
  std::array<double, 5> t{};    // {0, dT/2, T/2, T/2 + dT/2, T}
  std::array<double, 5> i_l{};  // inductor current at the breakpoints
  std::array<double, 4> v_pri{};  // primary bridge voltage per segment
  std::array<double, 4> v_sec{};  // secondary bridge voltage per segment

  Pwl inductor_current() const {
    std::vector<Segment> segs;
    for (std::size_t k = 0; k < 4; ++k) segs.push_back({t[k], t[k + 1], i_l[k], i_l[k + 1]});
    return Pwl(t_sw, std::move(segs));
  }

  // Mean power delivered by the primary bridge.
  double input_power() const {
    double e = 0.0;
    for (std::size_t k = 0; k < 4; ++k) e += v_pri[k] * 0.5 * (i_l[k] + i_l[k + 1]) * (t[k + 1] - t[k]);
    return e / t_sw;
  }

  // Mean power absorbed by the secondary bridge (current i_L / n).
  double output_power() const {
    double e = 0.0;
    for (std::size_t k = 0; k < 4; ++k) e += v_sec[k] * 0.5 * (i_l[k] + i_l[k + 1]) / n * (t[k + 1] - t[k]);
    return e / t_sw;
  }
};

inline WaveformSolution build_waveform(const OperatingPoint& op, const ConverterSpec& spec, double d) {
  if (!(d >= 0.0 && d <= 0.5)) throw std::invalid_argument("build_waveform: phase shift outside [0, 0.5]");
  WaveformSolution w;
  w.d = d;
  w.t_sw = spec.t_sw();
  w.v_in = op.v_in;
  w.v_out = op.v_out;
  w.n = spec.n;
  w.l_lk = spec.l_lk;
  const double half = 0.5 * w.t_sw;
  w.t = {0.0, d * half, half, half + d * half, w.t_sw};
  w.v_pri = {op.v_in, op.v_in, -op.v_in, -op.v_in};
  w.v_sec = {-op.v_out, op.v_out, op.v_out, -op.v_out};

  // Steady state with i_L(0) = -i_L(T/2).
  const double v2 = op.v_out / spec.n;
  w.i_l[0] = -(op.v_in + v2 * (2.0 * d - 1.0)) * w.t_sw / (4.0 * spec.l_lk);
  for (std::size_t k = 0; k < 4; ++k) {
    const double slope = (w.v_pri[k] - w.v_sec[k] / spec.n) / spec.l_lk;
    w.i_l[k + 1] = w.i_l[k] + slope * (w.t[k + 1] - w.t[k]);
  }
  return w;
}

struct DeviceStats {
  double rms{0.0};
  double avg{0.0};
};

// Currents of one switch position in a bridge. All four positions of a bridge share the same
// profile shifted by half a period; forward current flows in the channel, reverse in the diode.
struct BridgeCurrents {
  Pwl channel;
  Pwl diode;
  DeviceStats channel_stats;
  DeviceStats diode_stats;
  double turn_on_current{0.0};   // device current just after turn-on (< 0 means ZVS)
  double turn_off_current{0.0};  // device current just before turn-off (<= 0 means lossless)
  double switched_voltage{0.0};

  double total_rms() const {
    return std::sqrt(channel_stats.rms * channel_stats.rms + diode_stats.rms * diode_stats.rms);
  }
};

struct CurrentStats {
  double f_sw{0.0};
  double n{1.0};
  BridgeCurrents primary;
  BridgeCurrents secondary;
  Pwl winding_current;  // primary winding = inductor current
  double tx_primary_rms{0.0};
  double tx_secondary_rms{0.0};
  Pwl capacitor_current;
  double cap_rms{0.0};
  double cap_avg{0.0};
  double cap_abs_charge{0.0};  // integral of |i_c| over one period
  double ripple_charge{0.0};   // half of the above
};

namespace detail {
inline BridgeCurrents bridge_currents(const Pwl& device_current, double on_at, double off_at, double v_sw) {
  BridgeCurrents b;
  b.channel = device_current.positive_part();
  b.diode = device_current.negative_part();
  b.channel_stats = {b.channel.rms(), b.channel.mean()};
  b.diode_stats = {b.diode.rms(), b.diode.mean()};
  b.turn_on_current = on_at;
  b.turn_off_current = off_at;
  b.switched_voltage = v_sw;
  return b;
}
}  // namespace detail

inline CurrentStats extract_current_stats(const WaveformSolution& w, const OperatingPoint& op) {
  CurrentStats s;
  s.f_sw = 1.0 / w.t_sw;
  s.n = w.n;
  const Pwl il = w.inductor_current();
  const double half = 0.5 * w.t_sw;

  // Primary position S1: gated during the first half period, carries +i_L.
  s.primary = detail::bridge_currents(il.gated(0.0, half), w.i_l[0], w.i_l[2], w.v_in);

  // Secondary position Q1: gated during [dT/2, T/2 + dT/2), carries -i_L/n in its forward direction.
  const Pwl sec = il.scaled(-1.0 / w.n).gated(w.t[1], w.t[3]);
  s.secondary = detail::bridge_currents(sec, -w.i_l[1] / w.n, -w.i_l[3] / w.n, w.v_out);

  s.winding_current = il;
  s.tx_primary_rms = il.rms();
  s.tx_secondary_rms = s.tx_primary_rms / w.n;

  // Rectified secondary current minus the DC output current.
  std::vector<Segment> ic;
  for (std::size_t k = 0; k < 4; ++k) {
    const double sign = w.v_sec[k] > 0.0 ? 1.0 : -1.0;
    ic.push_back({w.t[k], w.t[k + 1], sign * w.i_l[k] / w.n - op.i_out, sign * w.i_l[k + 1] / w.n - op.i_out});
  }
  s.capacitor_current = Pwl(w.t_sw, std::move(ic));
  s.cap_rms = s.capacitor_current.rms();
  s.cap_avg = s.capacitor_current.mean();
  s.cap_abs_charge = s.capacitor_current.abs_integral();
  s.ripple_charge = 0.5 * s.cap_abs_charge;
  return s;
}

}  // namespace dabopt
