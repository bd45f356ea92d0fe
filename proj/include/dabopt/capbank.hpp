#pragma once

// Output capacitor: ripple-limited capacitance, bank composition from a fitted film series,
// ESR loss.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dabopt/datastore.hpp"
#include "dabopt/electrical.hpp"
#include "dabopt/pwl.hpp"

namespace dabopt {

// C_o = (1 / (4 dV)) * integral of |i_c| over one period.
inline double required_capacitance(double abs_charge, double dv_c_max) { return abs_charge / (4.0 * dv_c_max); }

inline double required_capacitance(const Pwl& i_c, double dv_c_max) {
  return required_capacitance(i_c.abs_integral(), dv_c_max);
}

inline double required_capacitance(const CurrentStats& s, double dv_c_max) {
  return required_capacitance(s.cap_abs_charge, dv_c_max);
}

struct CapacitorBank {
  std::string part_id;
  double unit_capacitance{0.0};
  double unit_voltage{0.0};
  int series_count{1};
  int parallel_count{1};
  double unit_cost{0.0};
  double unit_esr{0.0};
  double total_capacitance{0.0};
  double total_cost{0.0};
  double r_esr_effective{0.0};
  std::vector<double> p_cap;

  int unit_count() const { return series_count * parallel_count; }
};

inline CapacitorBank make_bank(const CapacitorSample& unit, const CapacitorSeries& series, int s, int p) {
  CapacitorBank b;
  b.part_id = unit.part_id;
  b.unit_capacitance = unit.capacitance;
  b.unit_voltage = unit.rated_voltage;
  b.series_count = s;
  b.parallel_count = p;
  b.unit_cost = series.unit_cost(unit.capacitance, unit.rated_voltage);
  b.unit_esr = series.unit_esr(unit.capacitance, unit.rated_voltage);
  b.total_capacitance = p * unit.capacitance / s;
  b.total_cost = s * p * b.unit_cost;
  b.r_esr_effective = b.unit_esr * s / p;
  return b;
}

inline double capacitor_loss(const CapacitorBank& bank, double i_c_rms) { return bank.r_esr_effective * i_c_rms * i_c_rms; }

inline bool bank_meets(const CapacitorBank& b, double c_o_worst, double v_out_max, double voltage_margin) {
  return b.series_count * b.unit_voltage >= voltage_margin * v_out_max * (1.0 - 1e-12) &&
         b.total_capacitance >= c_o_worst * (1.0 - 1e-12);
}

inline bool bank_less(const CapacitorBank& a, const CapacitorBank& b) {
  if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
  if (a.r_esr_effective != b.r_esr_effective) return a.r_esr_effective < b.r_esr_effective;
  return a.part_id < b.part_id;
}

// For each catalog unit the cheapest arrangement uses the fewest series units that hold the
// voltage and the fewest parallel strings that reach c_o; the best unit wins.
inline std::optional<CapacitorBank> select_bank(double c_o_worst, double v_out_max, const CapacitorSeries& series,
                                                double voltage_margin = 1.1, int max_units = 10000) {
  std::optional<CapacitorBank> best;
  for (const auto& unit : series.samples) {
    if (!(unit.rated_voltage > 0.0) || !(unit.capacitance > 0.0)) continue;
    const int s = std::max(1, static_cast<int>(std::ceil(voltage_margin * v_out_max / unit.rated_voltage - 1e-12)));
    const int p = std::max(1, static_cast<int>(std::ceil(c_o_worst * s / unit.capacitance - 1e-12)));
    if (static_cast<long>(s) * p > max_units) continue;
    CapacitorBank b = make_bank(unit, series, s, p);
    if (!bank_meets(b, c_o_worst, v_out_max, voltage_margin)) {
      b = make_bank(unit, series, s, p + 1);
      if (!bank_meets(b, c_o_worst, v_out_max, voltage_margin)) continue;
    }
    if (!best || bank_less(b, *best)) best = std::move(b);
  }
  return best;
}

}  // namespace dabopt
