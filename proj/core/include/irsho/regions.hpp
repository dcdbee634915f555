#pragma once

#include <vector>

#include "irsho/mathx.hpp"
#include "irsho/scenario.hpp"

// Areas of the surface-reachability regions used by the connection chain and
// the conditional distance/angle laws. At step i the serving candidates live
// in the radius-D disc around the user intersected with the serving cell's
// half-plane; transition and distance laws additionally intersect with the
// previous step's disc (radius D around the user at x_{i-1}). All quantities
// reduce to disc/half-plane/disc intersections: closed forms where the
// half-plane is inactive, exact boundary-arc radial integration where it cuts
// through.
namespace irsho {

struct RegionFrame {
  const ScenarioGeometry* geom = nullptr;
  double d_serv = 0.0;  // serving radius D
  int i = 0;            // step index; the previous disc sits at x(i) - dx
};

inline RegionFrame make_region_frame(const ScenarioGeometry& g, double d_serv,
                                     int i) {
  return RegionFrame{&g, d_serv, i};
}

// ---- primitive areas -------------------------------------------------------

// Area of a radius-R disc whose center sits at signed distance `offset` from
// a half-plane boundary (positive inside): pi R^2 minus a circular segment,
// saturating to the full disc / zero beyond |offset| >= R.
double disc_halfplane_area(double radius, double offset);

// d/d(radius) of disc_halfplane_area: the in-half-plane boundary arc length,
// 2 R acos(-offset/R); total in both arguments.
double disc_halfplane_deriv(double radius, double offset);

// Two-circle intersection area; total function of nonnegative inputs.
double lens_area(double r1, double r2, double sep);

// d/dd lens_area(d, r_fixed, sep): arc of the moving circle inside the fixed
// one, 2 d acos((d^2 + sep^2 - r_fixed^2)/(2 d sep)).
double lens_deriv_moving(double d, double r_fixed, double sep);

// ---- frame helpers ---------------------------------------------------------

// Signed offset of the user at step i to the cell boundary, positive inside
// side s's half-plane.
double side_offset_at(const ScenarioGeometry& g, Side s, int i);

// Polar angle (in the trajectory frame) of side s's inward boundary normal.
double halfplane_normal_angle(const ScenarioGeometry& g, Side s);

// Arc of the radius-rho circle around the step-i user inside side s's
// half-plane. Angles coincide with the trajectory-to-surface angle phi'.
Arc halfplane_arc(const ScenarioGeometry& g, Side s, int i, double rho);

// Arc of the radius-rho circle around the current user inside the previous
// step's disc (radius d_serv, center dx behind along the trajectory).
Arc prev_disc_arc(double d_serv, double dx, double rho);

// Complementary arc: the part of the ring that left the previous disc.
Arc new_territory_arc(double d_serv, double dx, double rho);

// ---- region areas (spec operations) ---------------------------------------

// |A_i ∩ B^s|: reachable area at step i.
double area_reachable(Side s, const RegionFrame& f);

// |A_i ∩ A_{i-1} ∩ B^s|: reachable area shared with the previous step.
double area_reachable_overlap(Side s, const RegionFrame& f);

// Same two quantities with the current disc truncated to radius d <= D.
double area_reachable_within(Side s, const RegionFrame& f, double d);
double area_overlap_within(Side s, const RegionFrame& f, double d);

// Radial derivatives of the two "within" areas at radius d.
double deriv_area_within(Side s, const RegionFrame& f, double d);
double deriv_overlap_within(Side s, const RegionFrame& f, double d);

// Reference slow path for the overlap: polar midpoint grid over the raw
// membership indicator, with one refinement doubling when two successive
// estimates disagree by more than 1e-4 relative. Used by tests to cross-check
// the boundary-arc integration.
double area_overlap_within_grid(Side s, const RegionFrame& f, double d,
                                int n_radial = 512, int n_angular = 1024);

// Cumulative radial profile of the overlap area for one (side, step): builds
// the boundary-arc table once (only when the half-plane actually cuts the
// lens) and then answers area/derivative queries at any d in (0, D].
class OverlapProfile {
 public:
  OverlapProfile(const ScenarioGeometry& g, Side s, double d_serv, int i,
                 int n_radial = 2048);

  double area(double d) const;
  double deriv(double d) const;
  bool tabulated() const { return !cum_.empty(); }

 private:
  double joint_angle(double rho) const;

  double d_serv_ = 0.0;
  double dx_ = 0.0;
  double h_cur_ = 0.0;   // current-user offset to the boundary
  double h_prev_ = 0.0;  // previous-user offset
  double psi0_ = 0.0;    // inward normal angle
  bool lens_all_ = false;   // half-plane inactive: overlap == lens(d, D, dx)
  bool empty_all_ = false;  // overlap identically zero
  double step_ = 0.0;
  std::vector<double> ring_;  // rho * joint_angle(rho) at grid nodes
  std::vector<double> cum_;   // trapezoid-cumulative area at grid nodes
};

}  // namespace irsho
