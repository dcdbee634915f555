#include "irsho/baseline.hpp"

namespace irsho {
namespace {

std::optional<double> safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return std::nullopt;
}

std::optional<double> safe_ratio(const std::optional<double>& num,
                                 const std::optional<double>& den) {
  if (num && den && *den > 0.0) return *num / *den;
  return std::nullopt;
}

}  // namespace

AnalysisResult run_baseline_analysis(const EngineConfig& cfg) {
  EngineConfig base = cfg;
  base.channel = make_channel(cfg.channel.p_t, cfg.channel.f_c,
                              cfg.channel.alpha, 0, cfg.channel.d_serv);
  return run_analysis(base);
}

BaselineMetrics pair_ratios(const HoMetrics& base, const HoMetrics& paired) {
  BaselineMetrics out;
  static_cast<HoMetrics&>(out) = base;
  out.ratio_p_hof = safe_ratio(paired.p_hof, base.p_hof);
  out.ratio_p_pp = safe_ratio(paired.p_pp, base.p_pp);
  out.ratio_ex_trigger = safe_ratio(paired.ex_trigger, base.ex_trigger);
  out.ratio_ex_exec = safe_ratio(paired.ex_exec, base.ex_exec);
  return out;
}

BaselineMetrics run_baseline(const EngineConfig& cfg) {
  const AnalysisResult base = run_baseline_analysis(cfg);
  const AnalysisResult paired = run_analysis(cfg);
  return pair_ratios(base.metrics, paired.metrics);
}

}  // namespace irsho
