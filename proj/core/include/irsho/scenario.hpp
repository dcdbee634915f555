#pragma once

#include <optional>
#include <utility>

#include "irsho/mathx.hpp"

// Two-base-station crossing geometry. A user walks a straight trajectory
// between the feet of the perpendiculars dropped from the serving ("original")
// base station and the strongest neighbor ("target"). The trajectory is the
// +x axis: the original BS sits at (0, r_o), the target at (L, r_t), and the
// cell boundary is the perpendicular bisector of the BS pair, which crosses
// the trajectory near x_mid at angle theta. Discrete time: the user advances
// dx = v * t_d per measurement step.
namespace irsho {

enum class Side { original, target };

struct StepFrame {
  int i = 0;
  double x = 0.0;       // trajectory abscissa of step i
  double x_prev = 0.0;  // abscissa of step i-1 (virtual -dx for i = 0)
  double x_o = 0.0;     // distance to the original BS
  double x_t = 0.0;     // distance to the target BS
  double bearing_o = 0.0;  // polar angle of the original BS seen from the user
  double bearing_t = 0.0;  // polar angle of the target BS seen from the user
  double x_mid = 0.0;
  double theta = 0.0;

  // BS-user-IRS opening angles for an IRS at trajectory angle phi_prime. Only
  // their cosines are ever consumed, so the sign convention is immaterial.
  double phi_o(double phi_prime) const { return bearing_o - phi_prime; }
  double phi_t(double phi_prime) const { return phi_prime - bearing_t; }
};

struct ScenarioGeometry {
  double lambda_b = 0.0;  // BS density, per m^2
  double v = 0.0;         // speed, m/s
  double t_d = 0.0;       // measurement period, s
  double span = 0.0;      // trajectory length L
  double r_o = 0.0;       // original-BS perpendicular offset (signed)
  double r_t = 0.0;       // target-BS perpendicular offset (signed)
  double dx = 0.0;        // per-step displacement
  int n_steps = 0;        // last step index I; trajectory samples i = 0..I
  double x_mid = 0.0;     // boundary anchor on the trajectory
  double theta = 0.0;     // trajectory-to-boundary angle, sin(theta) > 0
  double sin_theta = 1.0;
  double cos_theta = 0.0;
  double side_sign_o = 1.0;  // orientation of the original side's half-plane
  Vec2 bs_o{}, bs_t{};

  double x(int i) const { return dx * i; }
  Vec2 user(double xi) const { return {xi, 0.0}; }
  Vec2 bs(Side s) const { return s == Side::original ? bs_o : bs_t; }

  // Signed distance of p to the cell boundary, positive inside side s's cell.
  double side_offset(Side s, Vec2 p) const {
    const double sigma =
        side_sign_o * (cos_theta * p.y - sin_theta * (p.x - x_mid));
    return s == Side::original ? sigma : -sigma;
  }

  StepFrame frame(int i) const;
};

struct ScenarioConfig {
  double lambda_b = 0.0;
  double v = 0.0;
  double t_d = 0.0;
  std::optional<double> r_o;   // default +offset from the BS density
  std::optional<double> r_t;   // default -offset
  std::optional<double> span;  // default mean boundary-crossing length
};

// Mean perpendicular offset of the nearest base station from a random
// trajectory: E[r |sin phi|] over the nearest point of a planar PPP.
// Computed by quadrature; equals 1/(pi*sqrt(lambda_b)) in closed form.
double default_offset(double lambda_b);

// Default offsets as the (r_o, r_t) pair: the BSs sit on opposite sides of
// the trajectory at the mean perpendicular offset, so r_t = -r_o.
inline std::pair<double, double> default_offsets(double lambda_b) {
  const double r = default_offset(lambda_b);
  return {r, -r};
}

// Density of the serving-cell traversal length for a straight trajectory
// through a PPP cellular layout, from its angular double-integral form. The
// two angles parameterize the triangle formed by the chord endpoints and the
// shared nearest base station, so the geometric support is upsilon + tau < pi;
// on it the density is nonnegative, integrates to one (to quadrature error),
// and its mean equals the exact induced mean chord pi/(4 sqrt(lambda_b)).
// Scale covariance: f(l; lambda) = sqrt(lambda) * f(l*sqrt(lambda); 1).
double crossing_length_pdf(double l, double lambda_b);

// Numeric mass of crossing_length_pdf over l > 0 (a diagnostic; ~1 up to
// quadrature error, and invariant under the scale collapse above).
double crossing_length_mass(double lambda_b);

// Mean crossing length: first moment of crossing_length_pdf divided by its
// numeric mass. Both moments are computed once at unit density in closed form
// along l (the angular integral is the only numerical step) and rescaled.
double expected_crossing_length(double lambda_b);

ScenarioGeometry make_geometry(const ScenarioConfig& cfg);

// Convenience overload with every frame quantity given explicitly.
inline ScenarioGeometry build_geometry(double r_o, double r_t, double span,
                                       double v, double t_d) {
  ScenarioConfig cfg;
  cfg.lambda_b = 1.0;  // unused when all statistical inputs are pinned
  cfg.v = v;
  cfg.t_d = t_d;
  cfg.r_o = r_o;
  cfg.r_t = r_t;
  cfg.span = span;
  return make_geometry(cfg);
}

}  // namespace irsho
