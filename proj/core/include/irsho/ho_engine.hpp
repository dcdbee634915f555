#pragma once

#include <optional>
#include <vector>

#include "irsho/channel.hpp"
#include "irsho/irs_chain.hpp"
#include "irsho/irs_dist.hpp"
#include "irsho/scenario.hpp"

// Discrete-time absorbing chains for the handover life cycle and the per-step
// event probabilities that drive them.
//
// Per measurement step i the user compares the neighbor's signal to the
// serving signal. The trigger ratio mixes the four surface-connection states
// of the serving side (unconnected states measure the nearest surface beyond
// the serving radius as a scatterer; connected states enjoy beamforming).
// Three chains consume the per-step probabilities:
//   * trigger/execution chain  [H_0, H_1, .., H_j, H_c]   (j sustained steps)
//   * failure chain            [F_0, .., F_{j-1}, F_j, F_t, F_c]
//   * ping-pong chain          [PP_0, .., PP_u, PP_t, PP_c]
// The failure chain may fail only while the trigger is in flight; the
// ping-pong chain is seeded each step by the execution probability of a
// concurrently propagated trigger chain.
namespace irsho {

// ---- absorbing-chain state vectors ----------------------------------------

// Trigger/execution chain over [H_0, H_1, ..., H_j, H_c] (j+2 entries).
// Rows H_0..H_{j-1} advance with p_h and reset to H_0 otherwise; H_j moves to
// H_c with probability 1; H_c absorbs.
struct HoChainState {
  std::vector<double> s;
  int j = 0;

  static HoChainState initial(int j);
  void step(double p_h);
  double trigger() const { return s[1]; }                      // mass in H_1
  double exec() const { return s[static_cast<std::size_t>(j)]; }  // mass in H_j
  double completed() const { return s.back(); }                // mass in H_c
};

// Failure chain over [F_0, ..., F_{j-1}, F_j, F_t, F_c] (j+3 entries).
// F_0 advances with p_h (no failure on the trigger step); in-flight rows
// F_1..F_{j-1} fail to F_t with p_f, advance with p_h - p_f, reset otherwise;
// F_j absorbs (handover succeeded); F_t moves to F_c, so the mass observed in
// F_t after step i is exactly the failure inflow of step i.
struct HofChainState {
  std::vector<double> s;
  int j = 0;

  static HofChainState initial(int j);
  // p_f must already satisfy p_f <= p_h (run_analysis clamps and counts).
  void step(double p_h, double p_f);
  double fail_inflow() const { return s[static_cast<std::size_t>(j) + 1]; }
  double failed() const { return s.back(); }
};

// Ping-pong chain over [PP_0, ..., PP_u, PP_t, PP_c] (u+3 entries).
// PP_0 enters the window with the execution probability p_c of the trigger
// chain; PP_1..PP_{u-1} fall to PP_t with p_pp and advance otherwise; PP_u
// absorbs (window survived); PP_t moves to PP_c.
struct PpChainState {
  std::vector<double> s;
  int u = 0;

  static PpChainState initial(int u);
  void step(double p_c, double p_pp);
  double fall_inflow() const { return s[static_cast<std::size_t>(u) + 1]; }
  double fallen() const { return s.back(); }
};

// Dense row-stochastic transition matrices with the same layouts; reference
// forms of the banded updates above (kept for structural tests).
std::vector<std::vector<double>> build_ho_matrix(double p_h, int j);
std::vector<std::vector<double>> build_hof_matrix(double p_h, double p_f,
                                                  int j);
std::vector<std::vector<double>> build_pp_matrix(double p_c, double p_pp,
                                                 int u);

// ---- engine configuration ---------------------------------------------------

struct EngineConfig {
  ScenarioGeometry geometry;
  ChannelParams channel;    // carries N, alpha, beta and the serving radius
  double lambda_r = 0.0;    // surface density, per m^2
  double gamma_ho = 1.0;    // trigger margin, linear ratio
  double q_out = 0.0;       // outage threshold, linear ratio (< 1)
  double t_trigger = 0.0;   // sustain time before execution, seconds
  double t_pp = 0.0;        // ping-pong observation window end, seconds
};

// Sustained-step count j = floor(T_t/T_d) + 1 and window count
// u = ceil((T_p - T_t)/T_d), with guard against float-quotient noise.
int trigger_steps(double t_trigger, double t_d);
int pp_window_steps(double t_pp, double t_trigger, double t_d);

// ---- per-step event probabilities ------------------------------------------

// Per-step traces of the three event probabilities (index 0..I).
struct StepProbs {
  std::vector<double> p_h;   // trigger condition holds
  std::vector<double> p_f;   // serving link in outage (clamped to p_h)
  std::vector<double> p_pp;  // back-trigger condition after the swap
};

// Spec-level single-step probabilities (the mixtures over connection states).
// `chains` must hold the original-side trace for ho/hof and the target-side
// trace for pp, both from propagate() at the engine's lambda_r and radius.
double step_prob_ho(int i, const EngineConfig& cfg, const ChainTrace& orig);
double step_prob_hof(int i, const EngineConfig& cfg, const ChainTrace& orig);
double step_prob_pp(int i, const EngineConfig& cfg, const ChainTrace& target);

// Full traces for one config (shared quadrature pass; p_f not yet clamped).
StepProbs compute_step_probs(const EngineConfig& cfg);

// ---- analysis ----------------------------------------------------------------

struct HoMetrics {
  std::vector<double> pmf_trigger;  // mass entering H_1 at step i
  std::vector<double> pmf_exec;     // mass in H_j at step i (execution pmf)
  double trigger_total = 0.0;       // sum of pmf_trigger (may exceed 1)
  double exec_total = 0.0;          // sum of pmf_exec (= completion prob.)
  double p_hof = 0.0;
  double p_pp = 0.0;
  // Expected event locations, meters from the walk start. Raw sums weight by
  // the (sub-)pmfs as printed; normalized variants divide by the totals and
  // are absent when the corresponding total is zero.
  double ex_trigger_raw = 0.0;
  double ex_exec_raw = 0.0;
  std::optional<double> ex_trigger;
  std::optional<double> ex_exec;
  std::optional<double> ex_hof;
  std::optional<double> ex_pp;
};

struct AnalysisResult {
  HoMetrics metrics;
  StepProbs probs;           // clamped traces actually fed to the chains
  int j = 0;                 // sustained-step count
  int u = 0;                 // ping-pong window count
  long failure_prob_clamps = 0;  // steps where raw p_f exceeded p_h
};

AnalysisResult run_analysis(const EngineConfig& cfg);

// ---- parameter mining --------------------------------------------------------

struct MiningPoint {
  double t_trigger = 0.0;  // seconds
  double gamma_ho = 1.0;   // linear
  double p_hof = 0.0;
  double p_pp = 0.0;
  bool feasible = false;   // max(p_hof, p_pp) < target
};

struct MiningResult {
  std::vector<MiningPoint> grid;     // row-major: t ascending, gamma ascending
  std::optional<MiningPoint> best;   // feasible argmin of max(p_hof, p_pp)
};

// Scans (T_t, gamma_ho) combinations, reusing one quadrature pass over the
// gamma grid; every t_grid value must be a multiple of the step period.
MiningResult mine_feasible(const EngineConfig& base,
                           const std::vector<double>& t_grid,
                           const std::vector<double>& gamma_grid_linear,
                           double target);

}  // namespace irsho
