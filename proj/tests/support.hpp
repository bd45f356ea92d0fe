#pragma once

#include <filesystem>
#include <random>

#include "dabopt/dabopt.hpp"

namespace support {

inline std::filesystem::path data_dir() { return DABOPT_DATA_DIR; }

inline const dabopt::Config& shipped_config() {
  static const dabopt::Config cfg = dabopt::load_config(data_dir() / "system.conf");
  return cfg;
}

inline const dabopt::Databases& shipped_db() {
  static const dabopt::Databases db = dabopt::load_databases(shipped_config().paths);
  return db;
}

inline const dabopt::SwitchDevice& device(const std::string& id) {
  for (const auto& d : shipped_db().switches)
    if (d.part_id == id) return d;
  throw std::runtime_error("no device " + id);
}

inline const dabopt::FanModel& fan(const std::string& id) {
  for (const auto& f : shipped_db().fans)
    if (f.part_id == id) return f;
  throw std::runtime_error("no fan " + id);
}

// Dense midpoint average of g(x(t)) over one period of a Pwl.
template <typename F>
double sampled_mean(const dabopt::Pwl& x, F&& g, int steps = 100000) {
  const double T = x.period();
  double acc = 0.0;
  for (int k = 0; k < steps; ++k) acc += g(x.at((k + 0.5) * T / steps));
  return acc / steps;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace support
