#pragma once

#include <optional>

#include "irsho/ho_engine.hpp"

// No-surface reference model: the same engine run with the reflecting
// surfaces degenerated away (N forced to 0), so the channel collapses to the
// direct path and every connection-state mixture reduces to the
// never-connected term. Every relative claim (ping-pong suppression, failure
// amplification, trigger-point shift) is a ratio against this baseline.
namespace irsho {

// Baseline metrics plus ratios of a paired surface-assisted run against the
// baseline. A ratio is present only when its baseline denominator is
// positive; locations compare the normalized expected event abscissas and
// exist only when both runs produced the event.
struct BaselineMetrics : HoMetrics {
  std::optional<double> ratio_p_hof;      // paired.p_hof / base.p_hof
  std::optional<double> ratio_p_pp;       // paired.p_pp / base.p_pp
  std::optional<double> ratio_ex_trigger; // paired.ex_trigger / base.ex_trigger
  std::optional<double> ratio_ex_exec;    // paired.ex_exec / base.ex_exec
};

// The engine run with n_elements forced to 0; everything else (geometry,
// timers, thresholds, surface density) is passed through unchanged. Shares
// run_analysis verbatim, so it equals run_analysis on an N = 0 config to
// machine precision.
AnalysisResult run_baseline_analysis(const EngineConfig& cfg);

// Attach the paired-run ratios to the baseline metrics.
BaselineMetrics pair_ratios(const HoMetrics& base, const HoMetrics& paired);

// Convenience: run both the baseline and the surface-assisted analysis of
// `cfg` and return the baseline metrics with ratios attached.
BaselineMetrics run_baseline(const EngineConfig& cfg);

}  // namespace irsho
