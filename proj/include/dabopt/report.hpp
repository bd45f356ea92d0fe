#pragma once

// Sweep report: JSON round trip and the CSV plot files. CSVs are always rendered from the JSON
// document so `dabopt report` reproduces the sweep's files byte for byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dabopt/synthesis.hpp"

namespace dabopt {

using json = nlohmann::json;

inline std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json to_json(const PointResult& p) {
  return {{"v_out", p.op.v_out},
          {"load_fraction", p.op.load_fraction},
          {"v_in", p.op.v_in},
          {"p_out", p.op.p_req},
          {"i_out", p.op.i_out},
          {"d", p.d},
          {"t", p.t},
          {"i_l", p.i_l},
          {"p_semis_primary", p.p_semis_primary},
          {"p_semis_secondary", p.p_semis_secondary},
          {"t_j_primary", p.t_j_primary},
          {"t_j_secondary", p.t_j_secondary},
          {"p_core", p.p_core},
          {"p_wind", p.p_wind},
          {"p_cap", p.p_cap},
          {"p_loss", p.p_loss},
          {"efficiency", p.efficiency}};
}

inline json row_json(const DesignEvaluation& e) {
  json r = {{"N", e.vars.n_modules},
            {"f_sw_hz", e.vars.f_sw},
            {"turns_ratio", e.vars.n},
            {"feasible", e.feasible},
            {"reason", e.reason},
            {"pareto", e.pareto},
            {"benchmark_pass", e.benchmark_pass}};
  if (e.feasible) {
    r["l_lk_h"] = e.l_lk;
    r["cost_switches_usd"] = e.cost.switches;
    r["cost_cooling_usd"] = e.cost.cooling;
    r["cost_transformer_usd"] = e.cost.transformer;
    r["cost_capacitors_usd"] = e.cost.capacitors;
    r["cost_module_usd"] = e.cost.module();
    r["cost_350kw_usd"] = e.scaled_cost;
    r["avg_loss_w"] = e.avg_loss;
    r["scaled_avg_loss_w"] = e.scaled_avg_loss;
    r["min_eff_full_load"] = e.min_eff_full_load;
    r["avg_eff_all"] = e.avg_eff_all;
    r["avg_eff_full_load"] = e.avg_eff_full_load;
    r["norm_cost"] = e.norm_cost;
    r["norm_loss"] = e.norm_loss;
  }
  return r;
}

// Full record of one design: row fields plus components and the per-point table.
inline json design_json(const DesignEvaluation& e) {
  json d = row_json(e);
  if (!e.feasible) return d;
  auto sw = [](const SwitchSelection& s) {
    return json{{"part_id", s.device->part_id}, {"parallel_count", s.parallel_count}, {"device_count", s.device_count()},
                {"cost_usd", s.cost()}};
  };
  auto cool = [](const CoolingDesign& c) {
    return json{{"fan", c.fan.part_id},       {"l_s_m", c.geometry.l_s},     {"w_s_m", c.geometry.w_s},
                {"h_f_m", c.geometry.h_f},    {"t_f_m", c.geometry.t_f},     {"n_f", c.geometry.n_f},
                {"r_th_s_a", c.r_th_s_a},     {"volume_flow_m3s", c.volume_flow}, {"mass_kg", c.mass},
                {"heatsink_cost_usd", c.heatsink_cost}, {"fan_cost_usd", c.fan.unit_cost}, {"cost_usd", c.total_cost}};
  };
  d["primary_switch"] = sw(*e.primary_switch);
  d["secondary_switch"] = sw(*e.secondary_switch);
  d["primary_cooling"] = cool(*e.primary_cooling);
  d["secondary_cooling"] = cool(*e.secondary_cooling);
  const auto& t = *e.transformer;
  const auto& g = t.geometry;
  d["transformer"] = {{"w_core_m", g.w_core},  {"d_core_m", g.d_core},   {"h_wind_m", g.h_wind},
                      {"w_lk_m", g.w_lk},      {"w_foil_m", g.w_foil},   {"n_p", g.n_p},
                      {"n_s", g.n_s},          {"w_wind_m", g.w_wind()}, {"l_lk_tx_h", t.l_lk_tx},
                      {"b_max_t", t.b_max},    {"v_core_m3", t.cost.v_core}, {"v_w_m3", t.cost.v_w},
                      {"core_cost_usd", t.cost.c_core}, {"winding_cost_usd", t.cost.c_w},
                      {"cost_usd", t.cost.total()}, {"avg_loss_w", t.avg_loss}};
  const auto& c = *e.capacitors;
  d["capacitors"] = {{"part_id", c.part_id},
                     {"unit_capacitance_f", c.unit_capacitance},
                     {"unit_voltage_v", c.unit_voltage},
                     {"series_count", c.series_count},
                     {"parallel_count", c.parallel_count},
                     {"total_capacitance_f", c.total_capacitance},
                     {"r_esr_effective_ohm", c.r_esr_effective},
                     {"cost_usd", c.total_cost}};
  json pts = json::array();
  for (const auto& p : e.points) pts.push_back(to_json(p));
  d["points"] = std::move(pts);
  return d;
}

struct SweepMeta {
  std::string config_path;
  std::uint64_t config_hash{0};
  std::string timestamp;
  double efficiency_threshold{0.95};
  std::size_t n_modules_count{0};
  std::size_t f_sw_count{0};
  std::size_t turns_ratio_count{0};
};

inline json build_report(const std::vector<DesignEvaluation>& evals, const BenchmarkResult& bench, const SweepMeta& meta) {
  json rep;
  rep["meta"] = {{"config", meta.config_path},
                 {"config_hash", hash_hex(meta.config_hash)},
                 {"timestamp", meta.timestamp},
                 {"efficiency_threshold", meta.efficiency_threshold},
                 {"grid", {{"n_modules", meta.n_modules_count},
                           {"f_sw", meta.f_sw_count},
                           {"turns_ratio", meta.turns_ratio_count},
                           {"configurations", evals.size()}}}};
  json rows = json::array();
  json pareto = json::array();
  std::optional<std::size_t> best_eff;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    rows.push_back(row_json(evals[i]));
    if (evals[i].pareto) pareto.push_back(i);
    if (evals[i].feasible && (!best_eff || evals[i].min_eff_full_load > evals[*best_eff].min_eff_full_load)) best_eff = i;
  }
  rep["rows"] = std::move(rows);
  rep["pareto"] = std::move(pareto);
  rep["best_min_efficiency"] = bench.best_min_efficiency;
  rep["recommended"] = bench.index ? design_json(evals[*bench.index]) : json(nullptr);
  // Plot files need a design even when nothing passes the benchmark.
  if (bench.index)
    rep["reference"] = {{"basis", "recommended"}, {"design", rep["recommended"]}};
  else if (best_eff)
    rep["reference"] = {{"basis", "best min full-load efficiency (no design passed the benchmark)"},
                        {"design", design_json(evals[*best_eff])}};
  else
    rep["reference"] = nullptr;
  return rep;
}

namespace detail {

inline std::string num_or_blank(const json& row, const char* key) {
  return row.contains(key) ? fmt6(row.at(key).get<double>()) : std::string();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace detail

inline std::string results_csv(const json& rep) {
  std::ostringstream o;
  o << "N,f_sw_hz,turns_ratio,feasible,reason,cost_switches_usd,cost_cooling_usd,cost_transformer_usd,"
       "cost_capacitors_usd,cost_module_usd,cost_350kw_usd,avg_loss_w,min_eff_full_load,avg_eff_all,pareto,"
       "benchmark_pass\n";
  for (const auto& r : rep.at("rows")) {
    o << r.at("N").get<int>() << ',' << fmt6(r.at("f_sw_hz").get<double>()) << ','
      << fmt6(r.at("turns_ratio").get<double>()) << ',' << (r.at("feasible").get<bool>() ? "true" : "false") << ','
      << csv_field(r.at("reason").get<std::string>());
    for (const char* k : {"cost_switches_usd", "cost_cooling_usd", "cost_transformer_usd", "cost_capacitors_usd",
                          "cost_module_usd", "cost_350kw_usd", "avg_loss_w", "min_eff_full_load", "avg_eff_all"})
      o << ',' << detail::num_or_blank(r, k);
    o << ',' << (r.at("pareto").get<bool>() ? "true" : "false") << ','
      << (r.at("benchmark_pass").get<bool>() ? "true" : "false") << '\n';
  }
  return o.str();
}

inline std::string pareto_csv(const json& rep) {
  std::vector<json> members;
  for (const auto& i : rep.at("pareto")) members.push_back(rep.at("rows").at(i.get<std::size_t>()));
  std::stable_sort(members.begin(), members.end(), [](const json& a, const json& b) {
    return a.at("cost_350kw_usd").get<double>() < b.at("cost_350kw_usd").get<double>();
  });
  std::ostringstream o;
  o << "N,f_sw_hz,turns_ratio,cost_350kw_usd,scaled_avg_loss_w,norm_cost,norm_loss,min_eff_full_load\n";
  for (const auto& r : members)
    o << r.at("N").get<int>() << ',' << fmt6(r.at("f_sw_hz").get<double>()) << ','
      << fmt6(r.at("turns_ratio").get<double>()) << ',' << fmt6(r.at("cost_350kw_usd").get<double>()) << ','
      << fmt6(r.at("scaled_avg_loss_w").get<double>()) << ',' << fmt6(r.at("norm_cost").get<double>()) << ','
      << fmt6(r.at("norm_loss").get<double>()) << ',' << fmt6(r.at("min_eff_full_load").get<double>()) << '\n';
  return o.str();
}

inline std::string efficiency_map_name(const json& design) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "efficiency_map_%d_%.0f_%s.csv", design.at("N").get<int>(),
                design.at("f_sw_hz").get<double>(), fmt6(design.at("turns_ratio").get<double>()).c_str());
  return buf;
}

inline std::string efficiency_map_csv(const json& design) {
  std::ostringstream o;
  o << "v_out_v,load_fraction,v_in_v,p_out_w,d,p_semis_primary_w,p_semis_secondary_w,p_core_w,p_wind_w,p_cap_w,"
       "p_loss_w,efficiency\n";
  for (const auto& p : design.at("points")) {
    bool first = true;
    for (const char* k : {"v_out", "load_fraction", "v_in", "p_out", "d", "p_semis_primary", "p_semis_secondary",
                          "p_core", "p_wind", "p_cap", "p_loss", "efficiency"}) {
      if (!first) o << ',';
      first = false;
      o << fmt6(p.at(k).get<double>());
    }
    o << '\n';
  }
  return o.str();
}

inline std::string cost_breakdown_csv(const json& design) {
  const double module = design.at("cost_module_usd").get<double>();
  std::ostringstream o;
  o << "component,cost_usd,share_of_module\n";
  auto line = [&](const std::string& name, double cost) {
    o << name << ',' << fmt6(cost) << ',' << fmt6(module > 0.0 ? cost / module : 0.0) << '\n';
  };
  line("switches_primary", design.at("primary_switch").at("cost_usd").get<double>());
  line("switches_secondary", design.at("secondary_switch").at("cost_usd").get<double>());
  line("cooling_primary", design.at("primary_cooling").at("cost_usd").get<double>());
  line("cooling_secondary", design.at("secondary_cooling").at("cost_usd").get<double>());
  line("transformer_core", design.at("transformer").at("core_cost_usd").get<double>());
  line("transformer_winding", design.at("transformer").at("winding_cost_usd").get<double>());
  line("capacitors", design.at("capacitors").at("cost_usd").get<double>());
  line("module_total", module);
  o << "scaled_350kw," << fmt6(design.at("cost_350kw_usd").get<double>()) << ",\n";
  return o.str();
}

// Writes every CSV derived from the report; returns the file names written.
inline std::vector<std::string> write_csvs(const json& rep, const std::filesystem::path& dir) {
  std::vector<std::string> written;
  detail::write_text(dir / "results.csv", results_csv(rep));
  written.push_back("results.csv");
  detail::write_text(dir / "pareto.csv", pareto_csv(rep));
  written.push_back("pareto.csv");
  const auto& ref = rep.at("reference");
  if (!ref.is_null()) {
    const auto& d = ref.at("design");
    const std::string name = efficiency_map_name(d);
    detail::write_text(dir / name, efficiency_map_csv(d));
    written.push_back(name);
    detail::write_text(dir / "cost_breakdown.csv", cost_breakdown_csv(d));
    written.push_back("cost_breakdown.csv");
  }
  return written;
}

}  // namespace dabopt
