// Batch front door for the handover model: config ingestion, single-run
// analysis, parameter sweeps, analytic-vs-Monte-Carlo validation, and
// (T_t, gamma_HO) feasibility mining. Emits versioned CSV for plotting.
//
// Exit codes: 0 success, 1 tolerance failure (validate), 2 bad input.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "irsho/baseline.hpp"
#include "irsho/config.hpp"
#include "irsho/mc.hpp"
#include "irsho/units.hpp"

namespace {

using irsho::AnalysisResult;
using irsho::BaselineMetrics;
using irsho::ConfigError;
using irsho::EngineConfig;
using irsho::HoMetrics;
using irsho::RunConfig;

// Deterministic shortest-unambiguous float formatting: CSV output must be
// byte-identical for identical (config, seed).
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string();
}

std::ofstream open_csv(const std::filesystem::path& dir,
                       const std::string& name, const std::string& schema) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir.string());
  const std::filesystem::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + p.string());
  out << "# schema: " << schema << "\n";
  return out;
}

constexpr const char* kMetricCols =
    "p_hof,p_pp,trigger_total,exec_total,ex_trigger_m,ex_exec_m,"
    "ex_trigger_over_l,ex_exec_over_l,j_steps,u_steps,clamp_steps";

void write_metric_cells(std::ostream& out, const AnalysisResult& res,
                        double span) {
  const HoMetrics& m = res.metrics;
  const auto over_l = [span](const std::optional<double>& v) {
    return v ? std::optional<double>(*v / span) : std::nullopt;
  };
  out << fmt(m.p_hof) << ',' << fmt(m.p_pp) << ',' << fmt(m.trigger_total)
      << ',' << fmt(m.exec_total) << ',' << fmt_opt(m.ex_trigger) << ','
      << fmt_opt(m.ex_exec) << ',' << fmt_opt(over_l(m.ex_trigger)) << ','
      << fmt_opt(over_l(m.ex_exec)) << ',' << res.j << ',' << res.u << ','
      << res.failure_prob_clamps;
}

void write_pmf(const std::filesystem::path& dir, const std::string& name,
               const std::vector<double>& pmf, const EngineConfig& cfg) {
  std::ofstream out = open_csv(dir, name, "irsho-pmf v1");
  out << "i,x_i,x_i_over_l,probability\n";
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    const double x = cfg.geometry.x(static_cast<int>(i));
    out << i << ',' << fmt(x) << ',' << fmt(x / cfg.geometry.span) << ','
        << fmt(pmf[i]) << '\n';
  }
}

void print_summary(const std::string& label, const AnalysisResult& res,
                   double span) {
  const HoMetrics& m = res.metrics;
  std::printf("%s: P_hof=%.6g P_pp=%.6g triggers=%.6g completed=%.6g",
              label.c_str(), m.p_hof, m.p_pp, m.trigger_total, m.exec_total);
  if (m.ex_trigger) std::printf(" E[x_trig]/L=%.4f", *m.ex_trigger / span);
  if (m.ex_exec) std::printf(" E[x_exec]/L=%.4f", *m.ex_exec / span);
  std::printf(" (j=%d, u=%d)\n", res.j, res.u);
}

// ---- analyze ---------------------------------------------------------------

int cmd_analyze(const std::string& config_path, const std::string& out_dir,
                bool with_baseline) {
  const RunConfig rc = irsho::load_run_config(config_path);
  const EngineConfig cfg = irsho::to_engine_config(rc);
  const AnalysisResult res = irsho::run_analysis(cfg);
  const double span = cfg.geometry.span;

  std::ofstream out = open_csv(out_dir, "metrics.csv", "irsho-metrics v1");
  out << "variant," << kMetricCols
      << ",ratio_p_hof,ratio_p_pp,ratio_ex_trigger,ratio_ex_exec\n";
  out << "surface,";
  write_metric_cells(out, res, span);
  out << ",,,,\n";
  print_summary("surface", res, span);

  if (with_baseline) {
    const AnalysisResult base = irsho::run_baseline_analysis(cfg);
    const BaselineMetrics bm = irsho::pair_ratios(base.metrics, res.metrics);
    out << "baseline,";
    write_metric_cells(out, base, span);
    out << ',' << fmt_opt(bm.ratio_p_hof) << ',' << fmt_opt(bm.ratio_p_pp)
        << ',' << fmt_opt(bm.ratio_ex_trigger) << ','
        << fmt_opt(bm.ratio_ex_exec) << '\n';
    print_summary("baseline", base, span);
    std::printf(
        "ratios vs baseline: P_hof %s, P_pp %s, E[x_trig] %s, E[x_exec] %s\n",
        fmt_opt(bm.ratio_p_hof).empty() ? "n/a" : fmt_opt(bm.ratio_p_hof).c_str(),
        fmt_opt(bm.ratio_p_pp).empty() ? "n/a" : fmt_opt(bm.ratio_p_pp).c_str(),
        fmt_opt(bm.ratio_ex_trigger).empty() ? "n/a"
                                             : fmt_opt(bm.ratio_ex_trigger).c_str(),
        fmt_opt(bm.ratio_ex_exec).empty() ? "n/a"
                                          : fmt_opt(bm.ratio_ex_exec).c_str());
  }

  write_pmf(out_dir, "pmf_trigger.csv", res.metrics.pmf_trigger, cfg);
  write_pmf(out_dir, "pmf_exec.csv", res.metrics.pmf_exec, cfg);
  std::printf("wrote metrics.csv, pmf_trigger.csv, pmf_exec.csv to %s\n",
              out_dir.c_str());
  return 0;
}

// ---- sweep -----------------------------------------------------------------

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

// Numeric fields a sweep may vary. seed/n_trials are excluded: they do not
// affect the analytic metrics a sweep reports.
void apply_field(RunConfig& rc, const std::string& name, double v) {
  if (name == "lambda_b_per_km2") rc.lambda_b_per_km2 = v;
  else if (name == "lambda_r_per_km2") rc.lambda_r_per_km2 = v;
  else if (name == "p_t_dbm") rc.p_t_dbm = v;
  else if (name == "f_c_ghz") rc.f_c_ghz = v;
  else if (name == "alpha") rc.alpha = v;
  else if (name == "d_m") { rc.d_m = v; rc.gamma_irs_db.reset(); }
  else if (name == "gamma_irs_db") { rc.gamma_irs_db = v; rc.d_m.reset(); }
  else if (name == "n_elements") {
    if (v != std::floor(v))
      throw ConfigError("sweep field 'n_elements': values must be integers");
    rc.n_elements = static_cast<int>(v);
  } else if (name == "v_mps") rc.v_mps = v;
  else if (name == "t_d_ms") rc.t_d_ms = v;
  else if (name == "gamma_ho_db") rc.gamma_ho_db = v;
  else if (name == "t_t_ms") rc.t_t_ms = v;
  else if (name == "t_p_s") rc.t_p_s = v;
  else if (name == "q_out_db") rc.q_out_db = v;
  else if (name == "r_o_m") rc.r_o_m = v;
  else if (name == "r_t_m") rc.r_t_m = v;
  else if (name == "l_m") rc.l_m = v;
  else
    throw ConfigError("sweep field '" + name + "' is not a sweepable field");
}

int cmd_sweep(const std::string& sweep_path, const std::string& out_dir) {
  std::ifstream in(sweep_path, std::ios::binary);
  if (!in) throw ConfigError("cannot read sweep file: " + sweep_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sweep file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("sweep root must be a JSON object");

  RunConfig base;
  if (j.contains("base")) base = irsho::parse_run_config(j.at("base").dump());

  if (!j.contains("sweep") || !j.at("sweep").is_array() ||
      j.at("sweep").empty())
    throw ConfigError("sweep file needs a non-empty 'sweep' array");
  const nlohmann::json& axes_json = j.at("sweep");
  if (axes_json.size() > 2)
    throw ConfigError("at most two swept parameters are supported");

  std::vector<SweepAxis> axes;
  for (const auto& a : axes_json) {
    SweepAxis ax;
    if (!a.is_object() || !a.contains("name") || !a.contains("values"))
      throw ConfigError("each sweep entry needs 'name' and 'values'");
    ax.name = a.at("name").get<std::string>();
    if (!a.at("values").is_array() || a.at("values").empty())
      throw ConfigError("sweep field '" + ax.name +
                        "': 'values' must be a non-empty array");
    for (const auto& v : a.at("values")) {
      if (!v.is_number())
        throw ConfigError("sweep field '" + ax.name +
                          "': values must be numbers");
      ax.values.push_back(v.get<double>());
    }
    axes.push_back(std::move(ax));
  }

  std::ofstream out = open_csv(out_dir, "sweep.csv", "irsho-sweep v1");
  out << axes[0].name;
  if (axes.size() == 2) out << ',' << axes[1].name;
  out << ',' << kMetricCols << '\n';

  const std::size_t n_inner = axes.size() == 2 ? axes[1].values.size() : 1;
  long rows = 0;
  for (double v0 : axes[0].values) {
    for (std::size_t k = 0; k < n_inner; ++k) {
      RunConfig rc = base;
      apply_field(rc, axes[0].name, v0);
      if (axes.size() == 2) apply_field(rc, axes[1].name, axes[1].values[k]);
      const EngineConfig cfg = irsho::to_engine_config(rc);
      const AnalysisResult res = irsho::run_analysis(cfg);
      out << fmt(v0);
      if (axes.size() == 2) out << ',' << fmt(axes[1].values[k]);
      out << ',';
      write_metric_cells(out, res, cfg.geometry.span);
      out << '\n';
      ++rows;
    }
  }
  std::printf("sweep: %ld rows -> %s/sweep.csv\n", rows, out_dir.c_str());
  return 0;
}

// ---- validate --------------------------------------------------------------

// Total variation distance between the normalized trigger-location pmfs.
double pmf_tv(const std::vector<double>& a, const std::vector<double>& b) {
  double sa = 0.0, sb = 0.0;
  for (double v : a) sa += v;
  for (double v : b) sb += v;
  if (sa <= 0.0 || sb <= 0.0) return sa == sb ? 0.0 : 1.0;
  double tv = 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double pa = i < a.size() ? a[i] / sa : 0.0;
    const double pb = i < b.size() ? b[i] / sb : 0.0;
    tv += std::abs(pa - pb);
  }
  return 0.5 * tv;
}

int cmd_validate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_flag,
                 std::optional<long long> trials_flag,
                 const std::string& events_path) {
  RunConfig rc = irsho::load_run_config(config_path);
  if (seed_flag) rc.seed = *seed_flag;
  if (trials_flag) rc.n_trials = *trials_flag;
  irsho::validate(rc);
  const EngineConfig cfg = irsho::to_engine_config(rc);

  const AnalysisResult an = irsho::run_analysis(cfg);
  std::vector<irsho::TrialEvent> events;
  std::vector<irsho::TrialEvent>* sink = events_path.empty() ? nullptr : &events;
  const irsho::McMatchedStats mc = irsho::simulate_matched(
      cfg, rc.n_trials, rc.seed, sink, sink ? rc.n_trials : 1);

  struct Row {
    const char* quantity;
    std::optional<double> analytic, mc_value, ci95;
    double delta, tolerance;
  };
  const double tv = pmf_tv(an.metrics.pmf_trigger, mc.pmf_trigger);
  const std::vector<Row> rows = {
      {"p_hof", an.metrics.p_hof, mc.p_hof.mean, mc.p_hof.ci95,
       mc.p_hof.mean - an.metrics.p_hof, 0.02},
      {"p_pp", an.metrics.p_pp, mc.p_pp.mean, mc.p_pp.ci95,
       mc.p_pp.mean - an.metrics.p_pp, 0.02},
      {"trigger_pmf_tv", std::nullopt, std::nullopt, std::nullopt, tv, 0.05},
  };

  std::ofstream out = open_csv(out_dir, "validate.csv", "irsho-validate v1");
  out << "quantity,analytic,mc,delta,mc_ci95,tolerance,status\n";
  bool all_pass = true;
  for (const Row& r : rows) {
    const bool pass = std::abs(r.delta) <= r.tolerance;
    all_pass = all_pass && pass;
    out << r.quantity << ',' << fmt_opt(r.analytic) << ','
        << fmt_opt(r.mc_value) << ',' << fmt(r.delta) << ',' << fmt_opt(r.ci95)
        << ',' << fmt(r.tolerance) << ',' << (pass ? "pass" : "fail") << '\n';
    std::printf("[%s] %-15s analytic=%-12s mc=%-12s |delta|=%.4g tol=%.4g\n",
                pass ? "pass" : "FAIL", r.quantity,
                r.analytic ? fmt(*r.analytic).substr(0, 12).c_str() : "-",
                r.mc_value ? fmt(*r.mc_value).substr(0, 12).c_str() : "-",
                std::abs(r.delta), r.tolerance);
  }

  if (sink) {
    std::ofstream ev = open_csv(out_dir, events_path, "irsho-events v1");
    ev << "trial,step,event,x_i,d,phi_prime\n";
    for (const auto& e : events)
      ev << e.trial << ',' << e.step << ',' << e.kind << ',' << fmt(e.x) << ','
         << fmt(e.d) << ',' << fmt(e.phi) << '\n';
    std::printf("wrote %zu events\n", events.size());
  }

  std::printf("validate: %s (%lld trials, seed %llu)\n",
              all_pass ? "all deltas within tolerance"
                       : "tolerance exceeded (exit 1)",
              static_cast<long long>(mc.n_trials),
              static_cast<unsigned long long>(mc.seed));
  return all_pass ? 0 : 1;
}

// ---- mine ------------------------------------------------------------------

int cmd_mine(const std::string& config_path, const std::string& out_dir,
             double target) {
  if (!(target > 0.0) || !std::isfinite(target))
    throw ConfigError("--target must be a positive probability");
  const RunConfig rc = irsho::load_run_config(config_path);
  const EngineConfig cfg = irsho::to_engine_config(rc);

  // Default grids: sustain times are every step multiple up to 640 ms; the
  // margin spans [-8, +4] dB in half-dB steps.
  std::vector<double> t_grid;
  std::vector<double> t_grid_ms;
  for (int k = 0;; ++k) {
    const double ms = static_cast<double>(k) * rc.t_d_ms;
    if (ms > 640.0 + 1e-9) break;
    t_grid_ms.push_back(ms);
    t_grid.push_back(irsho::units::ms_to_s(ms));
  }
  std::vector<double> gamma_grid, gamma_grid_db;
  for (int k = 0; k <= 24; ++k) {
    const double db = -8.0 + 0.5 * static_cast<double>(k);
    gamma_grid_db.push_back(db);
    gamma_grid.push_back(irsho::units::db_to_linear(db));
  }

  const irsho::MiningResult mr =
      irsho::mine_feasible(cfg, t_grid, gamma_grid, target);

  std::ofstream out = open_csv(out_dir, "mine.csv", "irsho-mine v1");
  out << "t_t_ms,gamma_ho_db,p_hof,p_pp,max_prob,feasible\n";
  long feasible = 0;
  std::size_t idx = 0;
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    for (std::size_t gi = 0; gi < gamma_grid.size(); ++gi, ++idx) {
      const irsho::MiningPoint& p = mr.grid[idx];
      out << fmt(t_grid_ms[ti]) << ',' << fmt(gamma_grid_db[gi]) << ','
          << fmt(p.p_hof) << ',' << fmt(p.p_pp) << ','
          << fmt(std::max(p.p_hof, p.p_pp)) << ','
          << (p.feasible ? "1" : "0") << '\n';
      if (p.feasible) ++feasible;
    }
  }
  std::printf("mine: %zu grid points, %ld feasible at target %.4g\n",
              mr.grid.size(), feasible, target);
  if (mr.best) {
    std::printf("best: T_t=%.6g ms, gamma_HO=%.6g dB, max(P_hof,P_pp)=%.6g\n",
                irsho::units::s_to_ms(mr.best->t_trigger),
                irsho::units::linear_to_db(mr.best->gamma_ho),
                std::max(mr.best->p_hof, mr.best->p_pp));
  } else {
    std::printf("best: none (no feasible point at target %.4g)\n", target);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time handover model for surface-assisted networks"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", events_path;
  std::optional<std::uint64_t> seed_flag;
  std::optional<long long> trials_flag;
  double target = 1e-3;
  bool with_baseline = false;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Run the analytic model once; write metrics and pmfs");
  analyze->add_option("--config", config_path, "JSON run config")->required();
  analyze->add_option("--out", out_dir, "output directory");
  analyze->add_flag("--baseline", with_baseline,
                    "add a paired no-surface row with ratios");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Evaluate the model over one or two parameter grids");
  sweep->add_option("--config", config_path, "JSON sweep spec")->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI::App* validate = app.add_subcommand(
      "validate", "Compare the analytic model to matched-geometry Monte Carlo");
  validate->add_option("--config", config_path, "JSON run config")->required();
  validate->add_option("--out", out_dir, "output directory");
  validate->add_option("--seed", seed_flag, "Monte Carlo seed override");
  validate->add_option("--trials", trials_flag, "Monte Carlo trial override");
  validate->add_option("--events", events_path,
                       "also dump per-trial events to this CSV (in --out)");

  CLI::App* mine = app.add_subcommand(
      "mine", "Grid-search (T_t, gamma_HO) for max(P_hof,P_pp) < target");
  mine->add_option("--config", config_path, "JSON run config")->required();
  mine->add_option("--out", out_dir, "output directory");
  mine->add_option("--target", target, "feasibility threshold (default 1e-3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad command line is bad input
  }

  try {
    if (*analyze) return cmd_analyze(config_path, out_dir, with_baseline);
    if (*sweep) return cmd_sweep(config_path, out_dir);
    if (*validate)
      return cmd_validate(config_path, out_dir, seed_flag, trials_flag,
                          events_path);
    if (*mine) return cmd_mine(config_path, out_dir, target);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
