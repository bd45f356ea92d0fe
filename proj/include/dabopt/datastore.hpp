#pragma once

// Input loading and validation: system requirements, design-space ranges and the
// component databases (switches, fans, heatsink prices, core/foil data, capacitors).

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dabopt/interp.hpp"

namespace dabopt {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  ValidationError(std::string field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Domain types

struct SystemSpec {
  double p_max_total{350e3};
  double i_max_total{500.0};
  double v_out_min{150.0};
  double v_out_max{1000.0};
  double v_in_min{600.0};
  double v_in_max{850.0};
  double t_amb{25.0};
  double t_c_max{100.0};
  double t_tx_max{100.0};
  double dv_c_max{5.0};
};

struct DesignSpace {
  std::vector<int> n_modules;
  std::vector<double> f_sw;
  std::vector<double> turns_ratio;
  double v_out_grid_step{50.0};
  std::vector<double> load_fractions{0.1, 1.0};
};

// Tunable model constants. Every field has a documented default and a [model] config key.
struct ModelOptions {
  double d_design{0.5};              // phase shift used to size the leakage inductance
  double rms_margin{0.8};            // per-die rms current <= margin * I_d@100C
  double voltage_margin{0.85};       // DC bus <= margin * device voltage rating
  double r_th_cs{0.10};              // case-to-sink resistance per die position [K/W]
  double lambda_usd_per_w{1.0};      // transformer objective weight on average loss
  double cap_voltage_margin{1.1};    // bank rating >= margin * v_out_max
  double efficiency_threshold{0.95}; // benchmark filter on min full-load efficiency
  int harmonics{50};                 // winding-loss Fourier harmonics
  int max_parallel{4};               // dies per switch position
};

struct Paths {
  std::filesystem::path switches;
  std::filesystem::path fans;
  std::filesystem::path heatsinks;
  std::filesystem::path cores;
  std::filesystem::path capacitors;
};

struct Config {
  SystemSpec system;
  DesignSpace space;
  ModelOptions model;
  Paths paths;
};

struct ReferenceConditions {
  double r_g{0.0};
  double t_j{25.0};
  double v_sw{800.0};
};

struct SwitchDevice {
  std::string part_id;
  double v_rating{0.0};
  double r_ds_on_ref{0.0};
  double i_d_100c{0.0};
  double unit_cost{0.0};
  double r_th_jc{0.0};
  CurveFamily conduction;  // junction temperature -> (current -> channel drop)
  CurveFamily diode;       // junction temperature -> (current -> diode drop)
  Table1D e_on;            // current -> energy at reference conditions
  Table1D e_off;
  Table1D e_rr;
  ReferenceConditions ref;
  double rg_scale_on{1.0};
  double rg_scale_off{1.0};
  double rg_scale_rr{1.0};
  // Relative energy change per kelvin away from ref.t_j (temperature scaling factor).
  double ktj_on{0.0};
  double ktj_off{0.0};
  double ktj_rr{0.0};
  double t_j_max{175.0};
};

struct FanModel {
  std::string part_id;
  double width{0.04};
  double height{0.04};
  double depth{0.015};
  double max_flow{0.0};            // m^3/min
  double max_static_pressure{0.0}; // Pa
  double unit_cost{0.0};

  double max_flow_m3s() const { return max_flow / 60.0; }
};

struct HeatsinkCostModel {
  double cost_per_kg{0.0};
  double aluminum_density{2700.0};
};

struct CoreMaterial {
  std::string name;
  double b_sat{0.0};
  double steinmetz_k{0.0};
  double steinmetz_alpha{0.0};
  double steinmetz_beta{0.0};
  double cost_per_m3{0.0};
  double density{0.0};
};

struct WindingMaterial {
  std::string name;
  double resistivity_20c{0.0};
  double temp_coefficient{0.0};
  double cost_per_m3{0.0};

  double resistivity(double t_c) const { return resistivity_20c * (1.0 + temp_coefficient * (t_c - 20.0)); }
};

struct CapacitorSample {
  std::string part_id;
  double capacitance{0.0};
  double rated_voltage{0.0};
  double cost{0.0};
  double esr{0.0};
};

struct CapacitorSeries {
  std::vector<CapacitorSample> samples;
  double a1_c{0.0}, a2_c{0.0}, a3_c{0.0};
  double a1_r{0.0}, a2_r{0.0}, a3_r{0.0};
  double cost_residual_rms{0.0};
  double esr_residual_rms{0.0};

  double unit_cost(double c, double v) const { return a1_c * c + a2_c * v + a3_c; }
  double unit_esr(double c, double v) const { return a1_r / c + a2_r / (c * v) + a3_r; }
};

struct Databases {
  std::vector<SwitchDevice> switches;
  std::vector<FanModel> fans;
  HeatsinkCostModel heatsink;
  CoreMaterial core;
  WindingMaterial winding;
  CapacitorSeries capacitors;
};

// ---------------------------------------------------------------------------
// Text helpers

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::string strip_comment(std::string_view line) {
  const auto pos = line.find('#');
  return trim(pos == std::string_view::npos ? line : line.substr(0, pos));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) throw ParseError(what + ": not a number: '" + s + "'");
  return v;
}

inline int to_int(const std::string& s, const std::string& what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(what + ": not an integer: '" + s + "'");
  return v;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Snaps accumulated range values (0.2 + 7 * 0.1) to 12 significant digits.
inline double snap(double v) {
  if (v == 0.0) return 0.0;
  const double scale = std::pow(10.0, 11 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
  return std::round(v * scale) / scale;
}

}  // namespace detail

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Parses "a,b,c" or "min:step:max".
inline std::vector<double> parse_range(const std::string& text, const std::string& what) {
  const std::string t = detail::trim(text);
  if (t.empty()) throw ParseError(what + ": empty list");
  if (t.find(':') != std::string::npos) {
    const auto parts = detail::split(t, ':');
    if (parts.size() != 3) throw ParseError(what + ": range must be min:step:max");
    const double lo = detail::to_double(parts[0], what);
    const double step = detail::to_double(parts[1], what);
    const double hi = detail::to_double(parts[2], what);
    if (!(step > 0.0) || hi < lo) throw ParseError(what + ": invalid range '" + t + "'");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) out.push_back(detail::snap(lo + static_cast<double>(k) * step));
    return out;
  }
  std::vector<double> out;
  for (const auto& p : detail::split(t, ',')) out.push_back(detail::to_double(p, what));
  return out;
}

// ---------------------------------------------------------------------------
// INI-style config: [section] / key = value

using IniFile = std::map<std::string, std::map<std::string, std::string>>;

inline IniFile parse_ini(std::string_view text) {
  IniFile ini;
  std::string section;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    if (!line.empty()) {
      if (line.front() == '[') {
        if (line.back() != ']') throw ParseError("line " + std::to_string(line_no) + ": unterminated section header");
        section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
        ini[section];
      } else {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty()) throw ParseError("line " + std::to_string(line_no) + ": key outside of a section");
        ini[section][detail::trim(std::string_view(line).substr(0, eq))] =
            detail::trim(std::string_view(line).substr(eq + 1));
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return ini;
}

// ---------------------------------------------------------------------------
// Record tables: "@table name", a header line of column names, then one record per line.

struct RecordTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& col) const {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) throw ParseError("table '" + name + "': missing required column '" + col + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
  bool has_column(const std::string& col) const {
    return std::find(columns.begin(), columns.end(), col) != columns.end();
  }
  double num(std::size_t row, const std::string& col) const {
    return detail::to_double(rows[row][column(col)], name + "." + col);
  }
  double num_or(std::size_t row, const std::string& col, double fallback) const {
    return has_column(col) ? num(row, col) : fallback;
  }
  const std::string& str(std::size_t row, const std::string& col) const { return rows[row][column(col)]; }
};

using RecordFile = std::map<std::string, RecordTable>;

inline RecordFile parse_records(std::string_view text, const std::string& origin = "<memory>") {
  RecordFile file;
  RecordTable* current = nullptr;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    if (!line.empty()) {
      const auto where = origin + ":" + std::to_string(line_no);
      if (line.rfind("@table", 0) == 0) {
        const auto toks = detail::split_ws(line);
        if (toks.size() != 2) throw ParseError(where + ": expected '@table <name>'");
        current = &file[toks[1]];
        current->name = toks[1];
      } else if (!current) {
        throw ParseError(where + ": record outside of a table");
      } else if (current->columns.empty()) {
        current->columns = detail::split_ws(line);
      } else {
        auto toks = detail::split_ws(line);
        if (toks.size() != current->columns.size())
          throw ParseError(where + ": expected " + std::to_string(current->columns.size()) + " fields, got " +
                           std::to_string(toks.size()));
        current->rows.push_back(std::move(toks));
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return file;
}

inline const RecordTable& require_table(const RecordFile& f, const std::string& name, const std::string& origin) {
  const auto it = f.find(name);
  if (it == f.end()) throw ParseError(origin + ": missing table '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Validation

inline void validate(const SystemSpec& s) {
  if (!(s.p_max_total > 0.0)) throw ValidationError("p_max_w", "must be positive");
  if (!(s.i_max_total > 0.0)) throw ValidationError("i_max_a", "must be positive");
  if (!(s.v_out_min > 0.0)) throw ValidationError("v_out_min_v", "must be positive");
  if (!(s.v_out_min < s.v_out_max)) throw ValidationError("v_out_min_v", "must be below v_out_max_v");
  if (!(s.v_in_min > 0.0)) throw ValidationError("v_in_min_v", "must be positive");
  if (!(s.v_in_min < s.v_in_max)) throw ValidationError("v_in_min_v", "must be below v_in_max_v");
  if (!(s.t_amb < s.t_c_max)) throw ValidationError("t_c_max_c", "must exceed t_amb_c");
  if (!(s.t_amb < s.t_tx_max)) throw ValidationError("t_tx_max_c", "must exceed t_amb_c");
  if (!(s.dv_c_max > 0.0)) throw ValidationError("dv_c_max_v", "must be positive");
}

inline void validate(const DesignSpace& d) {
  if (d.n_modules.empty()) throw ValidationError("n_modules", "empty list");
  if (d.f_sw.empty()) throw ValidationError("f_sw_hz", "empty list");
  if (d.turns_ratio.empty()) throw ValidationError("turns_ratio", "empty list");
  if (d.load_fractions.empty()) throw ValidationError("load_fractions", "empty list");
  for (int n : d.n_modules)
    if (n < 1) throw ValidationError("n_modules", "every module count must be >= 1");
  for (double f : d.f_sw)
    if (!(f > 0.0)) throw ValidationError("f_sw_hz", "every frequency must be positive");
  for (double n : d.turns_ratio)
    if (!(n > 0.0)) throw ValidationError("turns_ratio", "every turns ratio must be positive");
  for (double l : d.load_fractions)
    if (!(l > 0.0 && l <= 1.0)) throw ValidationError("load_fractions", "fractions must lie in (0, 1]");
  if (!(d.v_out_grid_step > 0.0)) throw ValidationError("v_out_grid_step_v", "must be positive");
}

inline void validate(const ModelOptions& m) {
  if (!(m.d_design > 0.0 && m.d_design <= 0.5)) throw ValidationError("d_design", "must lie in (0, 0.5]");
  if (!(m.rms_margin > 0.0 && m.rms_margin <= 1.0)) throw ValidationError("rms_margin", "must lie in (0, 1]");
  if (!(m.voltage_margin > 0.0 && m.voltage_margin <= 1.0)) throw ValidationError("voltage_margin", "must lie in (0, 1]");
  if (!(m.r_th_cs >= 0.0)) throw ValidationError("r_th_cs", "must be non-negative");
  if (!(m.lambda_usd_per_w >= 0.0)) throw ValidationError("lambda_usd_per_w", "must be non-negative");
  if (!(m.cap_voltage_margin >= 1.0)) throw ValidationError("cap_voltage_margin", "must be >= 1");
  if (m.harmonics < 1) throw ValidationError("harmonics", "must be >= 1");
  if (m.max_parallel < 1) throw ValidationError("max_parallel", "must be >= 1");
}

// ---------------------------------------------------------------------------
// Config

inline Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
  const IniFile ini = parse_ini(text);
  auto section = [&](const std::string& name) -> const std::map<std::string, std::string>& {
    static const std::map<std::string, std::string> none;
    const auto it = ini.find(name);
    return it == ini.end() ? none : it->second;
  };
  auto required = [&](const std::map<std::string, std::string>& sec, const std::string& sec_name,
                      const std::string& key) -> const std::string& {
    const auto it = sec.find(key);
    if (it == sec.end()) throw ParseError("[" + sec_name + "] missing required key '" + key + "'");
    return it->second;
  };

  Config cfg;
  const auto& sys = section("system");
  auto num = [&](const std::string& key) { return detail::to_double(required(sys, "system", key), key); };
  cfg.system.p_max_total = num("p_max_w");
  cfg.system.i_max_total = num("i_max_a");
  cfg.system.v_out_min = num("v_out_min_v");
  cfg.system.v_out_max = num("v_out_max_v");
  cfg.system.v_in_min = num("v_in_min_v");
  cfg.system.v_in_max = num("v_in_max_v");
  cfg.system.t_amb = num("t_amb_c");
  cfg.system.t_c_max = num("t_c_max_c");
  cfg.system.t_tx_max = num("t_tx_max_c");
  cfg.system.dv_c_max = num("dv_c_max_v");

  const auto& ds = section("design_space");
  for (double v : parse_range(required(ds, "design_space", "n_modules"), "n_modules")) {
    if (v != std::floor(v)) throw ValidationError("n_modules", "module counts must be integers");
    cfg.space.n_modules.push_back(static_cast<int>(v));
  }
  cfg.space.f_sw = parse_range(required(ds, "design_space", "f_sw_hz"), "f_sw_hz");
  cfg.space.turns_ratio = parse_range(required(ds, "design_space", "turns_ratio"), "turns_ratio");
  if (auto it = ds.find("v_out_grid_step_v"); it != ds.end())
    cfg.space.v_out_grid_step = detail::to_double(it->second, "v_out_grid_step_v");
  if (auto it = ds.find("load_fractions"); it != ds.end())
    cfg.space.load_fractions = parse_range(it->second, "load_fractions");

  const auto& model = section("model");
  auto opt = [&](const std::string& key, double& target) {
    if (auto it = model.find(key); it != model.end()) target = detail::to_double(it->second, key);
  };
  opt("d_design", cfg.model.d_design);
  opt("rms_margin", cfg.model.rms_margin);
  opt("voltage_margin", cfg.model.voltage_margin);
  opt("r_th_cs", cfg.model.r_th_cs);
  opt("lambda_usd_per_w", cfg.model.lambda_usd_per_w);
  opt("cap_voltage_margin", cfg.model.cap_voltage_margin);
  opt("efficiency_threshold", cfg.model.efficiency_threshold);
  if (auto it = model.find("harmonics"); it != model.end()) cfg.model.harmonics = detail::to_int(it->second, "harmonics");
  if (auto it = model.find("max_parallel"); it != model.end())
    cfg.model.max_parallel = detail::to_int(it->second, "max_parallel");

  const auto& paths = section("paths");
  auto path = [&](const std::string& key, const std::string& fallback) {
    const auto it = paths.find(key);
    std::filesystem::path p = it == paths.end() ? fallback : it->second;
    return p.is_absolute() ? p : base_dir / p;
  };
  cfg.paths.switches = path("switches", "switches.db");
  cfg.paths.fans = path("fans", "fans.db");
  cfg.paths.heatsinks = path("heatsinks", "heatsinks.db");
  cfg.paths.cores = path("cores", "cores.db");
  cfg.paths.capacitors = path("capacitors", "capacitors.db");

  validate(cfg.system);
  validate(cfg.space);
  validate(cfg.model);
  return cfg;
}

inline Config load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ParseError("config not found: " + path.string());
  return parse_config(detail::read_file(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Component databases

inline std::vector<SwitchDevice> parse_switch_db(std::string_view text, const std::string& origin = "switches.db") {
  const RecordFile f = parse_records(text, origin);
  const auto dev_it = f.find("devices");
  if (dev_it == f.end() || dev_it->second.rows.empty()) throw ParseError(origin + ": no devices");
  const RecordTable& dev = dev_it->second;
  const RecordTable& cond = require_table(f, "conduction", origin);
  const RecordTable& sw = require_table(f, "switching", origin);

  std::vector<SwitchDevice> out;
  for (std::size_t r = 0; r < dev.rows.size(); ++r) {
    SwitchDevice d;
    d.part_id = dev.str(r, "part_id");
    d.v_rating = dev.num(r, "v_rating");
    d.r_ds_on_ref = dev.num(r, "r_ds_on_ref");
    d.i_d_100c = dev.num(r, "i_d_100c");
    d.unit_cost = dev.num(r, "unit_cost");
    d.r_th_jc = dev.num(r, "r_th_jc");
    d.ref.r_g = dev.num(r, "ref_rg");
    d.ref.t_j = dev.num(r, "ref_tj");
    d.ref.v_sw = dev.num(r, "ref_v");
    d.rg_scale_on = dev.num_or(r, "rg_scale_on", 1.0);
    d.rg_scale_off = dev.num_or(r, "rg_scale_off", 1.0);
    d.rg_scale_rr = dev.num_or(r, "rg_scale_rr", 1.0);
    d.ktj_on = dev.num_or(r, "ktj_on", 0.0);
    d.ktj_off = dev.num_or(r, "ktj_off", 0.0);
    d.ktj_rr = dev.num_or(r, "ktj_rr", 0.0);
    d.t_j_max = dev.num_or(r, "t_j_max", 175.0);
    const std::string who = origin + ": " + d.part_id;
    if (!(d.i_d_100c > 0.0)) throw ValidationError(d.part_id + ".i_d_100c", "must be positive");
    if (!(d.unit_cost > 0.0)) throw ValidationError(d.part_id + ".unit_cost", "must be positive");
    if (!(d.v_rating > 0.0)) throw ValidationError(d.part_id + ".v_rating", "must be positive");
    if (!(d.ref.v_sw > 0.0)) throw ValidationError(d.part_id + ".ref_v", "must be positive");

    // conduction: part_id kind tj current voltage
    std::map<std::string, std::map<double, std::vector<std::pair<double, double>>>> curves;
    for (std::size_t k = 0; k < cond.rows.size(); ++k) {
      if (cond.str(k, "part_id") != d.part_id) continue;
      curves[cond.str(k, "kind")][cond.num(k, "tj")].emplace_back(cond.num(k, "current"), cond.num(k, "voltage"));
    }
    for (const char* kind : {"channel", "diode"}) {
      const auto it = curves.find(kind);
      if (it == curves.end()) throw ParseError(who + ": missing " + std::string(kind) + " conduction table");
      CurveFamily& fam = std::string(kind) == "channel" ? d.conduction : d.diode;
      for (const auto& [tj, pts] : it->second) {
        std::vector<double> x, y;
        for (const auto& [i, v] : pts) {
          x.push_back(i);
          y.push_back(v);
        }
        bool ok = true;
        try {
          Table1D t(std::move(x), std::move(y));
          // forward drop must not fall as current rises
          ok = t.y_monotone_nondecreasing();
          if (ok) fam.add(tj, std::move(t));
        } catch (const std::invalid_argument&) {
          ok = false;
        }
        if (!ok) throw ValidationError(d.part_id + "." + kind, "non-monotone lookup table at tj=" + std::to_string(tj));
      }
    }

    std::map<std::string, std::vector<std::pair<double, double>>> energies;
    for (std::size_t k = 0; k < sw.rows.size(); ++k) {
      if (sw.str(k, "part_id") != d.part_id) continue;
      energies[sw.str(k, "kind")].emplace_back(sw.num(k, "current"), sw.num(k, "energy"));
    }
    for (const char* kind : {"on", "off", "rr"}) {
      const auto it = energies.find(kind);
      if (it == energies.end()) throw ParseError(who + ": missing e_" + std::string(kind) + " table");
      std::vector<double> x, y;
      for (const auto& [i, e] : it->second) {
        if (e < 0.0) throw ValidationError(d.part_id + ".e_" + kind, "negative switching energy");
        x.push_back(i);
        y.push_back(e);
      }
      try {
        Table1D t(std::move(x), std::move(y));
        if (std::string(kind) == "on") d.e_on = std::move(t);
        else if (std::string(kind) == "off") d.e_off = std::move(t);
        else d.e_rr = std::move(t);
      } catch (const std::invalid_argument&) {
        throw ValidationError(d.part_id + ".e_" + kind, "non-monotone lookup table");
      }
    }
    out.push_back(std::move(d));
  }
  std::stable_sort(out.begin(), out.end(), [](const SwitchDevice& a, const SwitchDevice& b) {
    return a.unit_cost != b.unit_cost ? a.unit_cost < b.unit_cost : a.part_id < b.part_id;
  });
  return out;
}

inline std::vector<SwitchDevice> load_switch_db(const std::filesystem::path& path) {
  return parse_switch_db(detail::read_file(path), path.string());
}

inline std::vector<FanModel> parse_fan_db(std::string_view text, const std::string& origin = "fans.db") {
  const RecordFile f = parse_records(text, origin);
  const RecordTable& t = require_table(f, "fans", origin);
  if (t.rows.empty()) throw ParseError(origin + ": no fans");
  std::vector<FanModel> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    FanModel m;
    m.part_id = t.str(r, "part_id");
    m.width = t.num(r, "width_m");
    m.height = t.num(r, "height_m");
    m.depth = t.num(r, "depth_m");
    m.max_flow = t.num(r, "max_flow_m3min");
    m.max_static_pressure = t.num(r, "max_static_pressure_pa");
    m.unit_cost = t.num(r, "unit_cost");
    if (!(m.max_flow > 0.0)) throw ValidationError(m.part_id + ".max_flow", "must be positive");
    if (!(m.max_static_pressure > 0.0)) throw ValidationError(m.part_id + ".max_static_pressure", "must be positive");
    if (!(m.width > 0.0)) throw ValidationError(m.part_id + ".width", "must be positive");
    out.push_back(std::move(m));
  }
  return out;
}

// Least-squares slope through the origin: cost = rate * quantity.
inline double fit_unit_rate(const std::vector<std::pair<double, double>>& quantity_cost) {
  double num = 0.0, den = 0.0;
  for (const auto& [q, c] : quantity_cost) {
    num += q * c;
    den += q * q;
  }
  if (!(den > 0.0)) throw FitError("unit-rate fit needs at least one positive quantity");
  return num / den;
}

inline HeatsinkCostModel parse_heatsink_db(std::string_view text, const std::string& origin = "heatsinks.db") {
  const RecordFile f = parse_records(text, origin);
  const RecordTable& t = require_table(f, "heatsink_prices", origin);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t r = 0; r < t.rows.size(); ++r) pts.emplace_back(t.num(r, "mass_kg"), t.num(r, "cost_usd"));
  HeatsinkCostModel m;
  m.cost_per_kg = fit_unit_rate(pts);
  if (!(m.cost_per_kg > 0.0)) throw ValidationError("heatsink.cost_per_kg", "must be positive");
  return m;
}

struct MagneticsData {
  CoreMaterial core;
  WindingMaterial winding;
};

inline MagneticsData parse_core_db(std::string_view text, const std::string& origin = "cores.db") {
  const RecordFile f = parse_records(text, origin);
  const RecordTable& mat = require_table(f, "core_material", origin);
  const RecordTable& cp = require_table(f, "core_prices", origin);
  const RecordTable& wm = require_table(f, "winding_material", origin);
  const RecordTable& fp = require_table(f, "foil_prices", origin);
  if (mat.rows.empty()) throw ParseError(origin + ": no core material");
  if (wm.rows.empty()) throw ParseError(origin + ": no winding material");

  MagneticsData d;
  d.core.name = mat.str(0, "name");
  d.core.b_sat = mat.num(0, "b_sat_t");
  d.core.steinmetz_k = mat.num(0, "k");
  d.core.steinmetz_alpha = mat.num(0, "alpha");
  d.core.steinmetz_beta = mat.num(0, "beta");
  d.core.density = mat.num(0, "density_kgm3");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t r = 0; r < cp.rows.size(); ++r) pts.emplace_back(cp.num(r, "volume_m3"), cp.num(r, "cost_usd"));
  d.core.cost_per_m3 = fit_unit_rate(pts);
  if (!(d.core.b_sat > 0.0)) throw ValidationError("core.b_sat", "must be positive");
  if (!(1.0 < d.core.steinmetz_alpha && d.core.steinmetz_alpha < d.core.steinmetz_beta))
    throw ValidationError("core.alpha", "Steinmetz exponents must satisfy 1 < alpha < beta");

  d.winding.name = wm.str(0, "name");
  d.winding.resistivity_20c = wm.num(0, "resistivity_20c");
  d.winding.temp_coefficient = wm.num(0, "temp_coefficient");
  pts.clear();
  for (std::size_t r = 0; r < fp.rows.size(); ++r) pts.emplace_back(fp.num(r, "volume_m3"), fp.num(r, "cost_usd"));
  d.winding.cost_per_m3 = fit_unit_rate(pts);
  if (!(d.winding.resistivity_20c > 0.0)) throw ValidationError("winding.resistivity_20c", "must be positive");
  return d;
}

// Least-squares fit of  cost = a1*C + a2*V + a3  and  esr = a1/C + a2/(C*V) + a3.
inline CapacitorSeries fit_capacitor_coeffs(std::vector<CapacitorSample> samples) {
  if (samples.size() < 4) throw FitError("capacitor fit is under-determined: need at least 4 samples");
  for (const auto& s : samples)
    if (!(s.capacitance > 0.0 && s.rated_voltage > 0.0 && s.cost > 0.0))
      throw ValidationError("capacitor " + s.part_id, "capacitance, voltage and cost must be positive");

  const auto m = static_cast<Eigen::Index>(samples.size());
  auto solve = [&](const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double& residual_rms) {
    // Column scaling keeps the rank decision independent of units (F vs V).
    const Eigen::VectorXd norms = a.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < norms.size(); ++j)
      if (!(norms(j) > 0.0)) throw FitError("capacitor fit is rank-deficient");
    const Eigen::MatrixXd scaled = a * norms.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(1e-9);
    if (qr.rank() < a.cols()) throw FitError("capacitor fit is rank-deficient");
    const Eigen::VectorXd x = qr.solve(b).cwiseQuotient(norms);
    residual_rms = std::sqrt((a * x - b).squaredNorm() / static_cast<double>(b.size()));
    return x;
  };

  Eigen::MatrixXd ac(m, 3), ar(m, 3);
  Eigen::VectorXd bc(m), br(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    ac(i, 0) = s.capacitance;
    ac(i, 1) = s.rated_voltage;
    ac(i, 2) = 1.0;
    bc(i) = s.cost;
    ar(i, 0) = 1.0 / s.capacitance;
    ar(i, 1) = 1.0 / (s.capacitance * s.rated_voltage);
    ar(i, 2) = 1.0;
    br(i) = s.esr;
  }
  CapacitorSeries series;
  const Eigen::VectorXd xc = solve(ac, bc, series.cost_residual_rms);
  const Eigen::VectorXd xr = solve(ar, br, series.esr_residual_rms);
  series.a1_c = xc(0);
  series.a2_c = xc(1);
  series.a3_c = xc(2);
  series.a1_r = xr(0);
  series.a2_r = xr(1);
  series.a3_r = xr(2);
  series.samples = std::move(samples);
  return series;
}

inline CapacitorSeries parse_capacitor_db(std::string_view text, const std::string& origin = "capacitors.db") {
  const RecordFile f = parse_records(text, origin);
  const RecordTable& t = require_table(f, "capacitors", origin);
  std::vector<CapacitorSample> samples;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    samples.push_back({t.str(r, "part_id"), t.num(r, "capacitance_f"), t.num(r, "rated_voltage_v"), t.num(r, "cost_usd"),
                       t.num(r, "esr_ohm")});
  return fit_capacitor_coeffs(std::move(samples));
}

inline Databases load_databases(const Paths& p) {
  for (const auto& path : {p.switches, p.fans, p.heatsinks, p.cores, p.capacitors})
    if (!std::filesystem::exists(path)) throw ParseError("database not found: " + path.string());
  Databases db;
  db.switches = load_switch_db(p.switches);
  db.fans = parse_fan_db(detail::read_file(p.fans), p.fans.string());
  db.heatsink = parse_heatsink_db(detail::read_file(p.heatsinks), p.heatsinks.string());
  const MagneticsData mag = parse_core_db(detail::read_file(p.cores), p.cores.string());
  db.core = mag.core;
  db.winding = mag.winding;
  db.capacitors = parse_capacitor_db(detail::read_file(p.capacitors), p.capacitors.string());
  return db;
}

// Stable content hash of the config and every database it references.
inline std::uint64_t config_hash(const std::filesystem::path& config_path, const Config& cfg) {
  std::uint64_t h = fnv1a64(detail::read_file(config_path));
  for (const auto& path : {cfg.paths.switches, cfg.paths.fans, cfg.paths.heatsinks, cfg.paths.cores, cfg.paths.capacitors})
    h = fnv1a64(detail::read_file(path), h);
  return h;
}

}  // namespace dabopt
