// dabopt: DAB module design-space sweep, single-design evaluation and report regeneration.
//
// Exit codes
//   0  success
//   1  configuration, database, argument or report error
//   2  sweep finished but no configuration is feasible

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>

#include <CLI11.hpp>

#include "dabopt/dabopt.hpp"
#include "dabopt/report.hpp"

namespace fs = std::filesystem;
using namespace dabopt;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInfeasible = 2;

int jobs_default() {
  if (const char* env = std::getenv("DABOPT_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring DABOPT_JOBS='" << env << "'\n";
  }
  return default_jobs();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Loaded {
  Config cfg;
  Databases db;
};

// Config and database errors are reported with their cause and map to exit 1.
std::optional<Loaded> load_all(const std::string& config_path) {
  try {
    Loaded l{load_config(config_path), {}};
    l.db = load_databases(l.cfg.paths);
    return l;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int jobs, bool quiet) {
  auto loaded = load_all(config_path);
  if (!loaded) return kError;
  const Config& cfg = loaded->cfg;

  const Evaluator ev(cfg, loaded->db);
  const auto vars = design_grid(cfg.space);
  std::mutex io;
  std::size_t last_pct = 0;
  const auto t0 = std::chrono::steady_clock::now();
  auto results = run_sweep(ev, vars, jobs, [&](std::size_t done, std::size_t total) {
    if (quiet) return;
    const std::size_t pct = done * 100 / total;
    std::lock_guard<std::mutex> lock(io);
    if (pct >= last_pct + 10 || done == total) {
      last_pct = pct;
      std::cerr << "  " << done << "/" << total << " configurations\n";
    }
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const bool any = scale_and_normalize(results);
  const auto bench = benchmark_filter(results, cfg.model.efficiency_threshold);

  SweepMeta meta;
  meta.config_path = fs::absolute(config_path).lexically_normal().string();
  meta.config_hash = config_hash(config_path, cfg);
  meta.timestamp = utc_now();
  meta.efficiency_threshold = cfg.model.efficiency_threshold;
  meta.n_modules_count = cfg.space.n_modules.size();
  meta.f_sw_count = cfg.space.f_sw.size();
  meta.turns_ratio_count = cfg.space.turns_ratio.size();
  const json rep = build_report(results, bench, meta);

  try {
    fs::create_directories(out_dir);
    detail::write_text(fs::path(out_dir) / "report.json", rep.dump(1) + "\n");
    const auto files = write_csvs(rep, out_dir);
    if (!quiet) {
      std::cerr << "sweep: " << vars.size() << " configurations in " << fmt6(secs) << " s (" << jobs << " jobs)\n";
      for (const auto& f : files) std::cerr << "  wrote " << (fs::path(out_dir) / f).string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }

  if (!any) {
    std::cerr << "sweep: no feasible configuration\n";
    return kInfeasible;
  }
  if (bench.index) {
    const auto& r = results[*bench.index];
    std::cout << "recommended: N=" << r.vars.n_modules << " f_sw=" << fmt6(r.vars.f_sw) << " Hz n=" << fmt6(r.vars.n)
              << " cost_350kw=" << fmt6(r.scaled_cost) << " USD min_eff_full_load=" << fmt6(r.min_eff_full_load)
              << '\n';
  } else {
    std::cout << "recommended: none (no design reaches min full-load efficiency " << fmt6(cfg.model.efficiency_threshold)
              << "; best achieved " << fmt6(bench.best_min_efficiency) << ")\n";
  }
  return kOk;
}

bool in_range(double v, double lo, double hi) { return v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9); }

void print_evaluation(const DesignEvaluation& e, bool verbose) {
  std::printf("design N=%d f_sw=%s Hz n=%s\n", e.vars.n_modules, fmt6(e.vars.f_sw).c_str(), fmt6(e.vars.n).c_str());
  if (!e.feasible) {
    std::printf("infeasible: %s\n", e.reason.c_str());
    return;
  }
  std::printf("L_lk = %s uH\n", fmt6(e.l_lk * 1e6).c_str());
  const auto& ps = *e.primary_switch;
  const auto& ss = *e.secondary_switch;
  std::printf("primary switches   %s x%d per position (%d dies)\n", ps.device->part_id.c_str(), ps.parallel_count,
              ps.device_count());
  std::printf("secondary switches %s x%d per position (%d dies)\n", ss.device->part_id.c_str(), ss.parallel_count,
              ss.device_count());
  for (const auto* c : {&*e.primary_cooling, &*e.secondary_cooling}) {
    const auto& g = c->geometry;
    std::printf("cooling %s  l_s=%s h_f=%s t_f=%s n_f=%d  R_th,s-a=%s K/W  mass=%s kg\n", c->fan.part_id.c_str(),
                fmt6(g.l_s).c_str(), fmt6(g.h_f).c_str(), fmt6(g.t_f).c_str(), g.n_f, fmt6(c->r_th_s_a).c_str(),
                fmt6(c->mass).c_str());
  }
  const auto& t = *e.transformer;
  const auto& g = t.geometry;
  std::printf("transformer w_core=%s d_core=%s h_wind=%s w_lk=%s foil=%s n_p=%d n_s=%d  L_tx=%s uH  B_max=%s T\n",
              fmt6(g.w_core).c_str(), fmt6(g.d_core).c_str(), fmt6(g.h_wind).c_str(), fmt6(g.w_lk).c_str(),
              fmt6(g.w_foil).c_str(), g.n_p, g.n_s, fmt6(t.l_lk_tx * 1e6).c_str(), fmt6(t.b_max).c_str());
  const auto& c = *e.capacitors;
  std::printf("capacitors %s  %d series x %d parallel  C=%s uF  ESR=%s mOhm\n", c.part_id.c_str(), c.series_count,
              c.parallel_count, fmt6(c.total_capacitance * 1e6).c_str(), fmt6(c.r_esr_effective * 1e3).c_str());

  std::printf("\ncost breakdown (USD per module)\n");
  std::printf("  switches     %10s\n  cooling      %10s\n  transformer  %10s\n  capacitors   %10s\n",
              fmt6(e.cost.switches).c_str(), fmt6(e.cost.cooling).c_str(), fmt6(e.cost.transformer).c_str(),
              fmt6(e.cost.capacitors).c_str());
  std::printf("  module       %10s\n  350 kW total %10s\n", fmt6(e.cost.module()).c_str(), fmt6(e.scaled_cost).c_str());

  std::printf("\n%7s %5s %6s %9s %7s %9s %9s %8s %8s %7s %9s %8s\n", "V_out", "load", "V_in", "P_out", "d", "semi_pri",
              "semi_sec", "core", "wind", "cap", "loss", "eff");
  for (const auto& p : e.points) {
    std::printf("%7s %5s %6s %9s %7s %9s %9s %8s %8s %7s %9s %8s\n", fmt6(p.op.v_out).c_str(),
                fmt6(p.op.load_fraction).c_str(), fmt6(p.op.v_in).c_str(), fmt6(p.op.p_req).c_str(), fmt6(p.d).c_str(),
                fmt6(p.p_semis_primary).c_str(), fmt6(p.p_semis_secondary).c_str(), fmt6(p.p_core).c_str(),
                fmt6(p.p_wind).c_str(), fmt6(p.p_cap).c_str(), fmt6(p.p_loss).c_str(), fmt6(p.efficiency).c_str());
    if (verbose) {
      std::printf("        breakpoints t[us]/i_L[A]:");
      for (std::size_t k = 0; k < 5; ++k) std::printf(" (%s, %s)", fmt6(p.t[k] * 1e6).c_str(), fmt6(p.i_l[k]).c_str());
      std::printf("\n");
    }
  }
  std::printf("\naverage loss %s W  min full-load efficiency %s  mean efficiency all %s  full-load mean %s\n",
              fmt6(e.avg_loss).c_str(), fmt6(e.min_eff_full_load).c_str(), fmt6(e.avg_eff_all).c_str(),
              fmt6(e.avg_eff_full_load).c_str());
}

int cmd_eval(const std::string& config_path, int n_mod, double fsw, double n, bool verbose, bool force) {
  auto loaded = load_all(config_path);
  if (!loaded) return kError;
  const auto& s = loaded->cfg.space;
  if (!force) {
    auto [nlo, nhi] = std::minmax_element(s.n_modules.begin(), s.n_modules.end());
    auto [flo, fhi] = std::minmax_element(s.f_sw.begin(), s.f_sw.end());
    auto [rlo, rhi] = std::minmax_element(s.turns_ratio.begin(), s.turns_ratio.end());
    std::string bad;
    if (n_mod < *nlo || n_mod > *nhi) bad = "N=" + std::to_string(n_mod) + " outside " + std::to_string(*nlo) + ".." + std::to_string(*nhi);
    else if (!in_range(fsw, *flo, *fhi)) bad = "f_sw=" + fmt6(fsw) + " outside " + fmt6(*flo) + ".." + fmt6(*fhi);
    else if (!in_range(n, *rlo, *rhi)) bad = "n=" + fmt6(n) + " outside " + fmt6(*rlo) + ".." + fmt6(*rhi);
    if (!bad.empty()) {
      std::cerr << "error: " << bad << " (use --force to evaluate anyway)\n";
      return kError;
    }
  }
  if (n_mod < 1 || !(fsw > 0.0) || !(n > 0.0)) {
    std::cerr << "error: N, f_sw and n must be positive\n";
    return kError;
  }
  const Evaluator ev(loaded->cfg, loaded->db);
  print_evaluation(ev.evaluate({n_mod, fsw, n}), verbose);
  return kOk;
}

int cmd_report(const std::string& out_dir, const std::string& config_path) {
  const fs::path path = fs::path(out_dir) / "report.json";
  if (!fs::exists(path)) {
    std::cerr << "error: " << path.string() << " not found (run `dabopt sweep` first)\n";
    return kError;
  }
  json rep;
  try {
    rep = json::parse(detail::read_file(path));
  } catch (const json::parse_error& e) {
    std::cerr << "error: " << path.string() << ": corrupt JSON at byte " << e.byte << ": " << e.what() << '\n';
    return kError;
  }
  try {
    if (!config_path.empty()) {
      const Config cfg = load_config(config_path);
      const std::string h = hash_hex(config_hash(config_path, cfg));
      const std::string have = rep.at("meta").at("config_hash").get<std::string>();
      if (h != have) {
        std::cerr << "error: report was produced from a different configuration (hash " << have << ", config " << h
                  << ")\n";
        return kError;
      }
    }
    for (const auto& f : write_csvs(rep, out_dir)) std::cerr << "  wrote " << (fs::path(out_dir) / f).string() << '\n';
  } catch (const json::exception& e) {
    std::cerr << "error: " << path.string() << ": malformed report: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DAB converter design-space optimizer for a 350 kW fast charger"};
  app.require_subcommand(1);

  std::string config = "data/system.conf";
  std::string out = "out";
  int jobs = jobs_default();
  bool quiet = false;
  auto* sweep = app.add_subcommand("sweep", "evaluate every (N, f_sw, n) in the design space");
  sweep->add_option("--config", config, "system configuration file")->capture_default_str();
  sweep->add_option("--out", out, "output directory")->capture_default_str();
  sweep->add_option("--jobs", jobs, "worker threads (default: DABOPT_JOBS or hardware threads)")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--quiet", quiet, "no progress output");

  int n_mod = 0;
  double fsw = 0.0, ratio = 0.0;
  bool verbose = false, force = false;
  auto* eval = app.add_subcommand("eval", "evaluate one design and print its loss table");
  eval->add_option("--config", config, "system configuration file")->capture_default_str();
  eval->add_option("--N", n_mod, "module count")->required();
  eval->add_option("--fsw", fsw, "switching frequency [Hz]")->required();
  eval->add_option("--n", ratio, "transformer turns ratio")->required();
  eval->add_flag("--verbose", verbose, "also print waveform breakpoints");
  eval->add_flag("--force", force, "evaluate outside the configured design space");

  std::string report_config;
  auto* report = app.add_subcommand("report", "regenerate CSV files from a sweep's report.json");
  report->add_option("--out", out, "sweep output directory")->capture_default_str();
  report->add_option("--config", report_config, "refuse if the report came from a different configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  if (*sweep) return cmd_sweep(config, out, jobs, quiet);
  if (*eval) return cmd_eval(config, n_mod, fsw, ratio, verbose, force);
  return cmd_report(out, report_config);
}
