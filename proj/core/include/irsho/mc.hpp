#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "irsho/ho_engine.hpp"

// Monte Carlo oracles for the analytic pipeline.
//
// simulate_matched reproduces the analytic model's own geometry: one surface
// PPP per trial in a band around the straight walk, bisector half-plane cell
// membership, nearest in-cell surface within the serving radius re-selected
// every step, the nearest surface beyond the serving radius as the scatterer
// for unconnected states, and the exact trigger/failure/ping-pong machines at
// the chain discretization. It validates the propagation machinery; model
// assumptions shared by both sides (single-surface measurement, per-step
// independence in the chains) are inherited, not tested.
//
// simulate_full_topology drops the two-BS abstraction: BSs and surfaces are
// drawn over a square region, the user walks through a real cell crossing,
// and surface ownership follows the true nearest-BS partition. It validates
// the two-BS reduction itself.
namespace irsho {

struct McEstimate {
  double mean = 0.0;
  long long n = 0;       // observations behind the mean
  double ci95 = 0.0;     // 1.96 * sample stddev / sqrt(n)
  std::uint64_t seed = 0;
};

// One event row of the optional trial dump.
struct TrialEvent {
  long long trial = 0;
  int step = 0;
  char kind = '?';   // 'T' trigger, 'E' execute, 'F' failure, 'P' ping-pong
  double x = 0.0;    // trajectory abscissa of the event step
  double d = 0.0;    // measurement surface distance at that step
  double phi = 0.0;  // measurement surface angle seen from the user
};

// Full per-step record of one walk, for diagnosis and consistency checks.
struct TrialLog {
  std::vector<int> state_orig;    // connection state 0..3 per step
  std::vector<int> state_target;
  std::vector<double> d_orig;     // measurement surface distance, orig side
  std::vector<double> phi_orig;
  std::vector<double> eta_ho;     // measured trigger ratio per step
  std::vector<double> eta_pp;     // measured back-trigger ratio per step
  std::vector<TrialEvent> events;
};

// Event-logic consistency: triggers only before execution, at most one
// execution, failures only before or at the execution step, ping-pongs only
// after execution and within the observation window. Returns the number of
// violated constraints (0 = consistent).
int trial_log_violations(const TrialLog& log, int j, int u, int n_steps);

struct McMatchedStats {
  McEstimate p_hof, p_pp;                  // per-trial event indicators
  McEstimate trigger_total, exec_total;    // per-trial event counts
  McEstimate ex_trigger, ex_exec;          // mean event abscissa, meters
  std::vector<double> pmf_trigger;         // mean trigger count per step
  std::vector<double> pmf_exec;            // mean execution count per step
  std::vector<std::array<double, 4>> state_freq_orig;    // per step
  std::vector<std::array<double, 4>> state_freq_target;  // per step
  std::array<std::array<double, 4>, 4> trans_freq_orig{};  // row-normalized
  std::array<long long, 4> trans_rows{};   // row visit counts behind it
  long long n_trials = 0;
  std::uint64_t seed = 0;
  long long log_violations = 0;
  TrialLog first_trial;  // complete log of trial 0
};

// Matched-geometry Monte Carlo. Per-trial streams are derived from
// (seed, trial index), so results are bit-reproducible and independent of
// scheduling. If `event_sink` is given, events of trials < log_trials are
// appended to it.
McMatchedStats simulate_matched(const EngineConfig& cfg, long long n_trials,
                                std::uint64_t seed,
                                std::vector<TrialEvent>* event_sink = nullptr,
                                long long log_trials = 1);

// Independently coded reference walker; deliberately naive (no pruning, no
// shared scan machinery) but consuming the same per-trial point set, so event
// sequences must agree trial for trial with simulate_matched.
McMatchedStats simulate_matched_naive(const EngineConfig& cfg,
                                      long long n_trials, std::uint64_t seed,
                                      std::vector<TrialEvent>* event_sink = nullptr,
                                      long long log_trials = 1);

struct McTopologyStats {
  McEstimate p_hof, p_pp;
  McEstimate span;        // crossing length between the perpendicular feet
  long long n_trials = 0;
  long long resampled = 0;  // rejected topologies (no clean single crossing)
  std::uint64_t seed = 0;
};

// Full-topology Monte Carlo over a square of side `region_side` meters: BS
// PPP + surface PPP, serving BS nearest to the walk start, target = owner of
// the first Voronoi cell entered, walk between the perpendicular feet.
// Topologies without a clean single crossing inside the region are resampled
// (and counted).
McTopologyStats simulate_full_topology(const EngineConfig& cfg,
                                       double region_side, long long n_trials,
                                       std::uint64_t seed);

/// Sampled estimate of the connection-state transition law at step i: draws
// n_samples surface PPPs (n_samples >= 1000 required), classifies the state at
// steps i-1 and i from the connection indicators at x(i-2), x(i-1), x(i), and
// tabulates conditional frequencies. freq rows with zero visits are left
// all-zero.
struct TransitionEstimate {
  std::array<std::array<double, 4>, 4> freq{};  // P(state_i = c | prev = r)
  std::array<long long, 4> row_count{};
  long long n = 0;
};

TransitionEstimate estimate_transition_probs(const ScenarioGeometry& g,
                                             Side side, const ChainConfig& cc,
                                             int i, long long n_samples,
                                             std::uint64_t seed);

}  // namespace irsho
