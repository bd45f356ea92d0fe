#pragma once

// Semiconductor selection and losses: table-interpolated conduction loss, scaled datasheet
// switching energies with ZVS detection, and the electro-thermal fixed point.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dabopt/datastore.hpp"
#include "dabopt/electrical.hpp"
#include "dabopt/interp.hpp"

namespace dabopt {

enum class Bridge { primary, secondary };

struct SwitchSelection {
  const SwitchDevice* device{nullptr};
  int parallel_count{1};
  Bridge bridge{Bridge::primary};

  int device_count() const { return 4 * parallel_count; }
  double cost() const { return device ? device_count() * device->unit_cost : 0.0; }
};

struct SwitchLossResult {
  double p_cond{0.0};     // per die
  double p_sw{0.0};       // per die, turn-on + turn-off
  double p_rr{0.0};       // per die, reverse recovery
  double t_j{0.0};
  double p_loss_sw{0.0};  // per die total
  int iterations{0};
  bool converged{true};
  bool clamped{false};
  bool over_limit{false};
};

// Time-averaged i * v(i, T_j) of one die; channel and diode tables evaluated separately.
inline double conduction_loss(const BridgeCurrents& b, const SwitchDevice& dev, double t_j, int parallel = 1,
                              ClampFlag* flag = nullptr) {
  const double share = 1.0 / parallel;
  auto channel = [&](double i) {
    const double id = i * share;
    return id > 0.0 ? id * dev.conduction(t_j, id, flag) : 0.0;
  };
  auto diode = [&](double i) {
    const double id = i * share;
    return id > 0.0 ? id * dev.diode(t_j, id, flag) : 0.0;
  };
  return b.channel.average_of(channel, 64) + b.diode.average_of(diode, 64);
}

struct SwitchingConditions {
  double f_sw{0.0};
  double t_j{25.0};
  int parallel{1};
};

struct SwitchingLoss {
  double p_sw{0.0};
  double p_rr{0.0};
};

inline double temperature_factor(double coeff, double t_j, double t_ref) {
  return std::max(0.0, 1.0 + coeff * (t_j - t_ref));
}

// Per-die switching and reverse-recovery loss. A turn-on with negative device current is ZVS
// (no E_on, no recovery of the complementary diode); a turn-off with non-positive current is lossless.
inline SwitchingLoss switching_loss(const BridgeCurrents& b, const SwitchDevice& dev, const SwitchingConditions& c,
                                    ClampFlag* flag = nullptr) {
  const double k_v = b.switched_voltage / dev.ref.v_sw;
  const double i_on = b.turn_on_current / c.parallel;
  const double i_off = b.turn_off_current / c.parallel;
  double e_sw = 0.0;
  double e_rr = 0.0;
  if (i_on > 0.0) {
    e_sw += dev.e_on(i_on, flag) * dev.rg_scale_on * temperature_factor(dev.ktj_on, c.t_j, dev.ref.t_j) * k_v;
    e_rr += dev.e_rr(i_on, flag) * dev.rg_scale_rr * temperature_factor(dev.ktj_rr, c.t_j, dev.ref.t_j) * k_v;
  }
  if (i_off > 0.0)
    e_sw += dev.e_off(i_off, flag) * dev.rg_scale_off * temperature_factor(dev.ktj_off, c.t_j, dev.ref.t_j) * k_v;
  return {c.f_sw * e_sw, c.f_sw * e_rr};
}

// Cheapest (device, parallel count) meeting the per-die rms and blocking-voltage margins.
inline std::optional<SwitchSelection> select_device(double worst_rms, const std::vector<SwitchDevice>& db,
                                                    double bus_voltage, Bridge bridge, double rms_margin = 0.8,
                                                    double voltage_margin = 0.85, int max_parallel = 4) {
  if (db.empty()) throw std::invalid_argument("select_device: empty switch database");
  std::optional<SwitchSelection> best;
  for (const auto& dev : db) {
    if (bus_voltage > voltage_margin * dev.v_rating) continue;
    for (int p = 1; p <= max_parallel; ++p) {
      if (worst_rms / p > rms_margin * dev.i_d_100c) continue;
      SwitchSelection cand{&dev, p, bridge};
      if (!best || cand.cost() < best->cost() ||
          (cand.cost() == best->cost() &&
           (p < best->parallel_count || (p == best->parallel_count && dev.part_id < best->device->part_id))))
        best = cand;
      break;  // more dies of the same part only cost more
    }
  }
  return best;
}

struct FixedPoint {
  double t_j{0.0};
  double p_loss{0.0};
  int iterations{0};
  bool converged{false};
};

// t_j <- t_ref + p(t_j) * r_th until the update moves less than `tol`.
// `iterations` counts the temperature updates that were still significant.
template <typename LossFn>
FixedPoint electro_thermal_iterate(LossFn&& losses, double t_ref, double r_th, double tol = 0.5,
                                   int max_iter = 50) {
  if (!(r_th > 0.0)) throw std::invalid_argument("electro_thermal_iterate: r_th must be positive");
  FixedPoint fp;
  double t = t_ref;
  for (int k = 1; k <= max_iter; ++k) {
    const double p = losses(t);
    const double t_next = t_ref + p * r_th;
    fp.t_j = t_next;
    fp.p_loss = p;
    if (!std::isfinite(t_next) || t_next > 1e4) return fp;
    if (std::abs(t_next - t) < tol) {
      fp.iterations = k - 1;
      fp.converged = true;
      return fp;
    }
    t = t_next;
    fp.iterations = k;
  }
  return fp;
}

// Per-die losses of one bridge position with the junction settled against a case held at t_case.
inline SwitchLossResult bridge_die_loss(const BridgeCurrents& b, const SwitchSelection& sel, double f_sw,
                                        double t_case) {
  const SwitchDevice& dev = *sel.device;
  ClampFlag flag;
  auto total = [&](double t_j) {
    const double pc = conduction_loss(b, dev, t_j, sel.parallel_count, &flag);
    const auto sw = switching_loss(b, dev, {f_sw, t_j, sel.parallel_count}, &flag);
    return pc + sw.p_sw + sw.p_rr;
  };
  const FixedPoint fp = electro_thermal_iterate(total, t_case, dev.r_th_jc);
  SwitchLossResult r;
  r.t_j = fp.t_j;
  r.iterations = fp.iterations;
  r.converged = fp.converged;
  r.p_cond = conduction_loss(b, dev, fp.t_j, sel.parallel_count, &flag);
  const auto sw = switching_loss(b, dev, {f_sw, fp.t_j, sel.parallel_count}, &flag);
  r.p_sw = sw.p_sw;
  r.p_rr = sw.p_rr;
  r.p_loss_sw = r.p_cond + r.p_sw + r.p_rr;
  r.clamped = flag.clamped;
  r.over_limit = fp.t_j > dev.t_j_max;
  return r;
}

}  // namespace dabopt
