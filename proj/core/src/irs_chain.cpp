#include "irsho/irs_chain.hpp"

#include <cmath>
#include <stdexcept>

#include "irsho/diag.hpp"

namespace irsho {

namespace {

// Clamp tiny negative area differences produced by quadrature noise; count
// anything beyond rounding scale.
double clamp_area(double v) {
  if (v < 0.0) {
    if (v < -1e-9) diagnostics().negative_area_clamps++;
    return 0.0;
  }
  return v;
}

}  // namespace

StepAreas step_areas(Side side, const ScenarioGeometry& g, double d_serv,
                     int i) {
  StepAreas a;
  a.s_cur = disc_halfplane_area(d_serv, g.side_offset(side, g.user(g.x(i))));
  a.s_prev =
      disc_halfplane_area(d_serv, g.side_offset(side, g.user(g.x(i) - g.dx)));
  a.s_cap = OverlapProfile(g, side, d_serv, i).area(d_serv);
  return a;
}

IrsTransitionMatrix transition_matrix_from_areas(double lambda_r,
                                                 StepAreas a) {
  const double s_cur = clamp_area(a.s_cur);
  const double s_prev = clamp_area(a.s_prev);
  const double s_cap = clamp_area(a.s_cap);
  const double fresh = clamp_area(s_cur - s_cap);   // newly reachable area
  const double gone = clamp_area(s_prev - s_cap);   // area that fell behind

  IrsTransitionMatrix t;
  t.survive = std::exp(-lambda_r * fresh);
  if (lambda_r * s_prev <= 0.0) {
    // Nothing could have been connected: the connected rows are vacuous and
    // close onto the departure-certain convention.
    t.drop = 1.0;
    return t;
  }
  // P(all previously reachable IRSs left and none arrived | >=1 was there)
  //   = e^{-L S_cap} (1 - e^{-L gone}) / (1 - e^{-L s_prev}) * e^{-L fresh}.
  t.drop = std::exp(-lambda_r * s_cap) *
           one_minus_exp_neg(lambda_r * gone) /
           one_minus_exp_neg(lambda_r * s_prev) * t.survive;
  return t;
}

IrsTransitionMatrix transition_matrix(Side side, const RegionFrame& f,
                                      double lambda_r) {
  if (lambda_r < 0.0) throw std::invalid_argument("lambda_r must be >= 0");
  return transition_matrix_from_areas(
      lambda_r, step_areas(side, *f.geom, f.d_serv, f.i));
}

IrsStateVector initial_state(Side side, const RegionFrame& f0,
                             double lambda_r) {
  IrsStateVector s;  // point mass on "none"
  if (side == Side::target || lambda_r <= 0.0) return s;
  const IrsTransitionMatrix t = transition_matrix(side, f0, lambda_r);
  const double enter = 1.0 - t.survive;  // none -> acquired
  const double denom = enter + t.drop;
  if (denom <= 0.0) return s;  // frozen chain: stay unconnected
  const double unconnected = t.drop / denom;
  const double connected = enter / denom;
  s[0] = t.survive * unconnected;
  s[1] = enter * unconnected;
  s[2] = t.drop * connected;
  s[3] = (1.0 - t.drop) * connected;
  return s;
}

IrsStateVector apply(const IrsStateVector& s, const IrsTransitionMatrix& t) {
  IrsStateVector out;
  for (int c = 0; c < 4; ++c) {
    KahanSum acc;
    for (int r = 0; r < 4; ++r) acc.add(s[r] * t.at(r, c));
    out[c] = acc.value();
  }
  return out;
}

ChainTrace propagate(Side side, const ScenarioGeometry& g,
                     const ChainConfig& cfg) {
  if (cfg.lambda_r < 0.0) throw std::invalid_argument("lambda_r must be >= 0");
  if (cfg.d_serv <= 0.0) throw std::invalid_argument("d_serv must be > 0");
  ChainTrace tr;
  const int last = g.n_steps;
  tr.states.resize(static_cast<std::size_t>(last) + 1);
  tr.matrices.resize(static_cast<std::size_t>(last) + 1);
  tr.matrices[0] = transition_matrix_from_areas(
      cfg.lambda_r, step_areas(side, g, cfg.d_serv, 0));
  tr.states[0] =
      initial_state(side, make_region_frame(g, cfg.d_serv, 0), cfg.lambda_r);
  for (int i = 1; i <= last; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    tr.matrices[idx] = transition_matrix_from_areas(
        cfg.lambda_r, step_areas(side, g, cfg.d_serv, i));
    tr.states[idx] = apply(tr.states[idx - 1], tr.matrices[idx]);
  }
  return tr;
}

}  // namespace irsho
