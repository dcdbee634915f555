#pragma once

#include <functional>
#include <vector>

#include "irsho/irs_chain.hpp"
#include "irsho/regions.hpp"
#include "irsho/scenario.hpp"

// Conditional laws of the user-to-IRS distance d and trajectory-to-IRS angle
// phi' given the step's connection state:
//   acquired — the new serving IRS is the nearest point of the IRS process in
//              the just-gained territory; its radial law follows the void
//              probability of the truncated reachable area.
//   held     — the serving IRS is the nearest in-cell IRS within D.
//   none / dropped — no serving IRS exists; the reference scatterer is the
//              nearest IRS beyond D (full-plane nearest-point tail law).
// Angle laws are uniform over the membership arcs at radius d.
namespace irsho {

// Connection-state indices shared with IrsStateVector.
inline constexpr int state_none = 0;
inline constexpr int state_acquired = 1;
inline constexpr int state_dropped = 2;
inline constexpr int state_held = 3;

struct DistConfig {
  double lambda_r = 0.0;  // IRS density, per m^2
  double d_serv = 0.0;    // serving radius D
};

class ConditionalPdfSpec {
 public:
  ConditionalPdfSpec(const ScenarioGeometry& g, DistConfig cfg, Side side,
                     int state, int step);

  bool reachable() const { return reachable_; }
  Side side() const { return side_; }
  int state() const { return state_; }
  int step() const { return step_; }

  // Distance support [d_lo, d_hi] and the interior radii where the arc
  // structure (and hence the density's smoothness) changes.
  double d_lo() const { return d_lo_; }
  double d_hi() const { return d_hi_; }
  std::vector<double> d_breakpoints() const;

  double pdf_distance(double d) const;   // density per meter
  ArcSet angle_arcs(double d) const;     // support of the angle law at d
  double pdf_angle(double d, double phi_prime) const;  // density per radian

 private:
  void require_reachable() const;
  double fresh_ring(double d) const;  // d * |in-cell arc ∩ just-gained arc|
  double fresh_ring_interp(double d) const;
  double fresh_area(double d) const;

  const ScenarioGeometry* g_ = nullptr;
  DistConfig cfg_;
  Side side_ = Side::original;
  int state_ = state_none;
  int step_ = 0;
  double h_cur_ = 0.0;
  double psi0_ = 0.0;
  // Acquired state: radial table of the just-gained in-cell ring integrand
  // over (D - dx, D]. The pdf uses the table's interpolant and its exact
  // running integral, so the law is normalized by construction even when the
  // gained territory is a thin sliver.
  double fresh_lo_ = 0.0;
  double fresh_step_ = 0.0;
  std::vector<double> fresh_g_;
  std::vector<double> fresh_cum_;
  double denom_ = 1.0;  // normalizing void-probability factor
  bool reachable_ = false;
  double d_lo_ = 0.0;
  double d_hi_ = 0.0;
};

// Spec-operation aliases.
double pdf_distance(const ConditionalPdfSpec& spec, double d);
double pdf_angle(const ConditionalPdfSpec& spec, double d, double phi_prime);

// E_{d,phi'}[ 1{predicate} ] by tensor quadrature: composite midpoint on the
// distance axis per smooth interval, exact arc decomposition with midpoint
// sampling on the angle axis, one refinement doubling when two successive
// estimates differ by more than 5e-4 absolute. Self-normalized, so a constant
// predicate evaluates to exactly 0 or 1.
double expect_indicator(const ConditionalPdfSpec& spec,
                        const std::function<bool(double, double)>& predicate);

// Quadrature plan shared by the engine's batched threshold integrals: nodes,
// per-node probability mass (pdf * width), and the angle-support arcs.
struct QuadPlan {
  std::vector<double> d_nodes;
  std::vector<double> d_mass;
  std::vector<ArcSet> arcs;
  double mass_total = 0.0;
};

QuadPlan build_quad_plan(const ConditionalPdfSpec& spec,
                         int pts_per_interval = 256);

}  // namespace irsho
