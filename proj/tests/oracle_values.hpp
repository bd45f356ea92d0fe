#pragma once
// Generated by tests/oracles/compute_oracles.py; do not edit by hand.

namespace oracle {
// 800 V / 400 V, n 0.9, d 0.2, 30 kHz, 32 uH; 1e5-step integration
inline constexpr double breakpoints[5] = {-138.888888889, -9.2592592593, 138.888888889, 9.25925925928, -138.888888889};
// N 7, 30 kHz, n 0.9, V_out 400 V full load; 1e5-sample midpoint quadrature
inline constexpr double gp_L = 3.88888888889e-05;
inline constexpr double gp_d = 0.499999994732;
inline constexpr double gp_il_rms = 92.3776795174;
inline constexpr double gp_pri_channel_rms = 58.9530220345;
inline constexpr double gp_pri_diode_rms = 28.1311051568;
inline constexpr double gp_sec_channel_rms = 19.9270784233;
inline constexpr double gp_sec_diode_rms = 69.7895978394;
inline constexpr double gp_cap_rms = 73.711002343;
inline constexpr double gp_cap_abs_charge = 0.00210561371893;
// L_s 100 mm, 9GA0412P3J01 (225 Pa), n_f 15, t_f 1 mm, h_f 35 mm
inline constexpr double hs_flow = 0.00632491972929;
inline constexpr double hs_rth = 0.246379401193;
// w_core 50, d_core 50, h_wind 100, w_lk 20 mm, foil 0.5 mm, 12:11 turns; window energy sum
inline constexpr double leakage_energy = 1.34787963122e-05;
// same geometry, P_core 20 W, P_wind 30 W, 25 C ambient; Newton solve
inline constexpr double thermal_t_core = 61.9515496627;
inline constexpr double thermal_t_wind = 65.9862316037;
// 10 A square wave, 30 kHz, single turn, foil 0.1 mm, MLT 0.3 m, 100 C, 500 harmonics
inline constexpr double square_wave_loss_1 = 0.0715826415511;
// 10 A square wave, 30 kHz, single turn, foil 0.5 mm, MLT 0.3 m, 100 C, 500 harmonics
inline constexpr double square_wave_loss_5 = 0.0210952550022;
}  // namespace oracle
