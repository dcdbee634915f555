#pragma once

#include <array>
#include <vector>

#include "irsho/regions.hpp"
#include "irsho/scenario.hpp"

// Four-state discrete-time chain of the per-side IRS connection. States:
//   0 none      — unconnected at the previous step and still unconnected
//   1 acquired  — unconnected at the previous step, connected now
//   2 dropped   — connected at the previous step, unconnected now
//   3 held      — connected at the previous step and still connected
// Transitions follow the two void probabilities of the IRS point process:
// "no IRS appeared in the newly reachable area" and "every previously
// reachable IRS departed and none arrived".
namespace irsho {

struct IrsStateVector {
  std::array<double, 4> p{1.0, 0.0, 0.0, 0.0};

  double sum() const { return p[0] + p[1] + p[2] + p[3]; }
  double operator[](int m) const { return p[static_cast<std::size_t>(m)]; }
  double& operator[](int m) { return p[static_cast<std::size_t>(m)]; }
};

// Row-stochastic 4x4 transition matrix. The dynamics are rank-2: rows from
// unconnected states (0, 2) feed columns {0, 1}; rows from connected states
// (1, 3) feed columns {2, 3}. Storing the two independent entries makes the
// sparsity pattern and row sums structural invariants.
struct IrsTransitionMatrix {
  double survive = 1.0;  // P(no new IRS in the newly reachable area)
  double drop = 1.0;     // P(connection lost | was connected)

  double at(int r, int c) const {
    const bool was_connected = (r == 1) || (r == 3);
    if (!was_connected) {
      if (c == 0) return survive;
      if (c == 1) return 1.0 - survive;
      return 0.0;
    }
    if (c == 2) return drop;
    if (c == 3) return 1.0 - drop;
    return 0.0;
  }
  std::array<double, 4> row(int r) const {
    return {at(r, 0), at(r, 1), at(r, 2), at(r, 3)};
  }
};

struct ChainConfig {
  double lambda_r = 0.0;  // IRS density, per m^2
  double d_serv = 0.0;    // serving radius D
};

// Areas entering the step-i transition: current and previous reachable areas
// and their overlap.
struct StepAreas {
  double s_cur = 0.0;
  double s_prev = 0.0;
  double s_cap = 0.0;
};

StepAreas step_areas(Side side, const ScenarioGeometry& g, double d_serv,
                     int i);

// Lemma-level entries from the areas; negative differences (numeric noise)
// are clamped to zero and counted in diagnostics().
IrsTransitionMatrix transition_matrix_from_areas(double lambda_r, StepAreas a);

// Transition into step f.i (areas from frames f.i-1 and f.i).
IrsTransitionMatrix transition_matrix(Side side, const RegionFrame& f,
                                      double lambda_r);

// State at step 0: the original side starts in the stationary vector of its
// step-0 matrix (closed form); the target side starts unconnected.
IrsStateVector initial_state(Side side, const RegionFrame& f0,
                             double lambda_r);

// One chain step: s * T, compensated summation per output entry.
IrsStateVector apply(const IrsStateVector& s, const IrsTransitionMatrix& t);

struct ChainTrace {
  // states[i] for i = 0..I; matrices[0] seeds the stationary initial state
  // (virtual previous step at -dx), matrices[i >= 1] map step i-1 to i.
  std::vector<IrsStateVector> states;
  std::vector<IrsTransitionMatrix> matrices;
};

ChainTrace propagate(Side side, const ScenarioGeometry& g,
                     const ChainConfig& cfg);

}  // namespace irsho
