#include "irsho/regions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsho {

namespace {

// Circular-segment area cut off a radius-R disc by a chord at signed center
// distance h (the part on the far side of the chord).
double segment_area(double radius, double offset) {
  const double r2 = radius * radius;
  return r2 * acos_clamped(offset / radius) -
         offset * std::sqrt(std::max(0.0, r2 - offset * offset));
}

}  // namespace

double disc_halfplane_area(double radius, double offset) {
  if (radius <= 0.0) return 0.0;
  if (offset >= radius) return pi * radius * radius;
  if (offset <= -radius) return 0.0;
  return pi * radius * radius - segment_area(radius, offset);
}

double disc_halfplane_deriv(double radius, double offset) {
  if (radius <= 0.0) return 0.0;
  return 2.0 * radius * acos_clamped(-offset / radius);
}

double lens_area(double r1, double r2, double sep) {
  if (r1 <= 0.0 || r2 <= 0.0) return 0.0;
  if (sep >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (sep <= std::abs(r1 - r2)) return pi * rmin * rmin;
  const double d1 = (sep * sep + r1 * r1 - r2 * r2) / (2.0 * sep);
  const double d2 = sep - d1;
  return segment_area(r1, d1) + segment_area(r2, d2);
}

double lens_deriv_moving(double d, double r_fixed, double sep) {
  if (d <= 0.0 || r_fixed <= 0.0) return 0.0;
  if (sep <= 0.0) return d < r_fixed ? two_pi * d : 0.0;
  const double arg = (d * d + sep * sep - r_fixed * r_fixed) / (2.0 * d * sep);
  return 2.0 * d * acos_clamped(arg);
}

double side_offset_at(const ScenarioGeometry& g, Side s, int i) {
  return g.side_offset(s, g.user(g.x(i)));
}

double halfplane_normal_angle(const ScenarioGeometry& g, Side s) {
  const double sgn = (s == Side::original) ? g.side_sign_o : -g.side_sign_o;
  return std::atan2(sgn * g.cos_theta, sgn * -g.sin_theta);
}

Arc halfplane_arc(const ScenarioGeometry& g, Side s, int i, double rho) {
  if (rho <= 0.0) return Arc{0.0, 0.0};
  const double h = side_offset_at(g, s, i);
  return make_arc(halfplane_normal_angle(g, s), acos_clamped(-h / rho));
}

Arc prev_disc_arc(double d_serv, double dx, double rho) {
  if (rho <= 0.0 || dx <= 0.0) {
    // Degenerate center separation / ring: membership is all-or-nothing.
    const double sep = (rho <= 0.0) ? dx : rho;
    return make_arc(pi, sep <= d_serv ? pi : 0.0);
  }
  const double t = (d_serv * d_serv - dx * dx - rho * rho) / (2.0 * dx * rho);
  return make_arc(pi, pi - acos_clamped(t));
}

Arc new_territory_arc(double d_serv, double dx, double rho) {
  if (rho <= 0.0 || dx <= 0.0) {
    const double sep = (rho <= 0.0) ? dx : rho;
    return make_arc(0.0, sep > d_serv ? pi : 0.0);
  }
  const double t = (d_serv * d_serv - dx * dx - rho * rho) / (2.0 * dx * rho);
  return make_arc(0.0, acos_clamped(t));
}

double area_reachable(Side s, const RegionFrame& f) {
  return area_reachable_within(s, f, f.d_serv);
}

double area_reachable_overlap(Side s, const RegionFrame& f) {
  return area_overlap_within(s, f, f.d_serv);
}

double area_reachable_within(Side s, const RegionFrame& f, double d) {
  return disc_halfplane_area(std::min(d, f.d_serv),
                             side_offset_at(*f.geom, s, f.i));
}

double deriv_area_within(Side s, const RegionFrame& f, double d) {
  return disc_halfplane_deriv(d, side_offset_at(*f.geom, s, f.i));
}

double area_overlap_within(Side s, const RegionFrame& f, double d) {
  return OverlapProfile(*f.geom, s, f.d_serv, f.i).area(d);
}

double deriv_overlap_within(Side s, const RegionFrame& f, double d) {
  return OverlapProfile(*f.geom, s, f.d_serv, f.i).deriv(d);
}

OverlapProfile::OverlapProfile(const ScenarioGeometry& g, Side s,
                               double d_serv, int i, int n_radial)
    : d_serv_(d_serv), dx_(g.dx) {
  if (d_serv <= 0.0) throw std::invalid_argument("serving radius must be > 0");
  if (n_radial < 2) throw std::invalid_argument("profile needs >= 2 nodes");
  h_cur_ = g.side_offset(s, g.user(g.x(i)));
  h_prev_ = g.side_offset(s, g.user(g.x(i) - g.dx));
  psi0_ = halfplane_normal_angle(g, s);

  // The half-plane swallows one of the two discs: the overlap is the plain
  // two-disc lens at every radius.
  lens_all_ = (h_prev_ >= d_serv_) || (h_cur_ >= d_serv_);
  // One of the discs misses the half-plane entirely, or the discs are
  // disjoint: no overlap at any radius.
  empty_all_ = (h_prev_ <= -d_serv_) || (h_cur_ <= -d_serv_) ||
               (dx_ >= 2.0 * d_serv_);
  if (lens_all_ || empty_all_) return;

  // Mixed regime: the boundary cuts the lens. Tabulate the ring integrand
  // g(rho) = rho * |joint arc at radius rho| and its running integral.
  step_ = d_serv_ / n_radial;
  ring_.resize(static_cast<size_t>(n_radial) + 1);
  cum_.resize(static_cast<size_t>(n_radial) + 1);
  ring_[0] = 0.0;
  cum_[0] = 0.0;
  for (int k = 1; k <= n_radial; ++k) {
    ring_[k] = step_ * k * joint_angle(step_ * k);
    cum_[k] = cum_[k - 1] + 0.5 * (ring_[k - 1] + ring_[k]) * step_;
  }
}

double OverlapProfile::joint_angle(double rho) const {
  if (rho <= 0.0) return 0.0;
  const Arc half = make_arc(psi0_, acos_clamped(-h_cur_ / rho));
  const Arc prev = prev_disc_arc(d_serv_, dx_, rho);
  return arc_intersect(half, prev).total();
}

double OverlapProfile::area(double d) const {
  if (d <= 0.0 || empty_all_) return 0.0;
  d = std::min(d, d_serv_);
  if (lens_all_ || d <= h_cur_) return lens_area(d, d_serv_, dx_);
  if (d <= -h_cur_) return 0.0;
  const double pos = d / step_;
  const auto k = std::min(static_cast<size_t>(pos), cum_.size() - 2);
  const double rho_k = step_ * static_cast<double>(k);
  const double frac = (d - rho_k) / step_;
  const double ring_d = ring_[k] + frac * (ring_[k + 1] - ring_[k]);
  return cum_[k] + 0.5 * (ring_[k] + ring_d) * (d - rho_k);
}

double OverlapProfile::deriv(double d) const {
  if (d <= 0.0 || d > d_serv_ || empty_all_) return 0.0;
  if (lens_all_ || d <= h_cur_) return lens_deriv_moving(d, d_serv_, dx_);
  if (d <= -h_cur_) return 0.0;
  return d * joint_angle(d);
}

namespace {

double overlap_grid_once(const ScenarioGeometry& g, Side s, double d_serv,
                         int i, double d, int n_radial, int n_angular) {
  const Vec2 u{g.x(i), 0.0};
  const Vec2 u_prev{g.x(i) - g.dx, 0.0};
  const double dr = d / n_radial;
  const double dphi = two_pi / n_angular;
  const double d2 = d_serv * d_serv;
  double acc = 0.0;
  for (int j = 0; j < n_radial; ++j) {
    const double rho = (j + 0.5) * dr;
    double count = 0.0;
    for (int k = 0; k < n_angular; ++k) {
      const double phi = (k + 0.5) * dphi;
      const Vec2 p{u.x + rho * std::cos(phi), u.y + rho * std::sin(phi)};
      if (g.side_offset(s, p) < 0.0) continue;
      if (norm2(p - u_prev) > d2) continue;
      count += 1.0;
    }
    acc += rho * count;
  }
  return acc * dr * dphi;
}

}  // namespace

double area_overlap_within_grid(Side s, const RegionFrame& f, double d,
                                int n_radial, int n_angular) {
  if (d <= 0.0) return 0.0;
  d = std::min(d, f.d_serv);
  const double e1 =
      overlap_grid_once(*f.geom, s, f.d_serv, f.i, d, n_radial, n_angular);
  const double e2 = overlap_grid_once(*f.geom, s, f.d_serv, f.i, d,
                                      2 * n_radial, 2 * n_angular);
  const double scale = std::max(std::abs(e2), 1e-12);
  if (std::abs(e2 - e1) > 1e-4 * scale) {
    return overlap_grid_once(*f.geom, s, f.d_serv, f.i, d, 4 * n_radial,
                             4 * n_angular);
  }
  return e2;
}

}  // namespace irsho
