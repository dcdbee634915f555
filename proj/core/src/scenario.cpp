#include "irsho/scenario.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "irsho/quadrature.hpp"

namespace irsho {

StepFrame ScenarioGeometry::frame(int i) const {
  StepFrame f;
  f.i = i;
  f.x = x(i);
  f.x_prev = f.x - dx;
  f.x_o = norm(Vec2{f.x, 0.0} - bs_o);
  f.x_t = norm(Vec2{f.x, 0.0} - bs_t);
  // Two-argument arctangents so the frame is well-defined at x = 0 and x = L.
  f.bearing_o = std::atan2(bs_o.y, bs_o.x - f.x);
  f.bearing_t = std::atan2(bs_t.y, bs_t.x - f.x);
  f.x_mid = x_mid;
  f.theta = theta;
  return f;
}

double default_offset(double lambda_b) {
  if (!(lambda_b > 0.0)) throw std::invalid_argument("BS density must be positive");
  // E[r |sin phi|] for the nearest PPP point: the angular factor integrates to
  // 4 exactly; the radial factor is integrated numerically.
  const double r_hi = 5.0 / std::sqrt(lambda_b);
  const double radial = adaptive_simpson(
      [lambda_b](double r) {
        return r * r * lambda_b * std::exp(-lambda_b * pi * r * r);
      },
      0.0, r_hi, 1e-10);
  return 4.0 * radial;
}

namespace {

// Per-angle coefficients of the crossing-length integrand, which factors as
//   A * l^2 * (B l^2 - C) * exp(-W l^2)
// over the triangle upsilon + tau < pi. The two angles sit at the chord
// endpoints of the triangle they span with the shared nearest base station
// (law-of-sines ratios rho), which is what restricts the support: beyond the
// triangle the ratios lose their geometric meaning and the expression is not
// part of the density.
struct CrossingNode {
  double a, b, c, w;
};

bool crossing_node(double ups, double tau, double lam, CrossingNode* n) {
  const double svt = std::sin(ups + tau);
  if (std::abs(svt) < 1e-14) return false;
  const double rho_u = std::sin(ups) / svt;
  const double rho_t = std::sin(tau) / svt;
  const double b0 = ((pi - tau) * std::cos(tau) + std::sin(tau)) / pi;
  const double c0 = ((pi - tau) + std::sin(tau) * std::cos(tau)) / pi;
  const double v2 = (1.0 + rho_t * rho_t - 2.0 * rho_t * std::cos(ups)) *
                        (1.0 - tau / pi + std::sin(2.0 * tau) / two_pi) +
                    rho_t * rho_t * (1.0 - ups / pi + std::sin(2.0 * ups) / two_pi);
  n->a = pi * pi * std::pow(lam, 1.5) * rho_u * rho_t / svt;
  n->b = two_pi * lam * b0 * b0 * rho_u * rho_u;
  n->c = c0;
  n->w = pi * lam * v2;
  return true;
}

constexpr double kAngleClip = 1e-9;

// Angular quadrature in rotated coordinates u = upsilon + tau, w = upsilon -
// tau over the triangle u in (0, pi), |w| < u. Near the hypotenuse u -> pi the
// law-of-sines ratios diverge but the exponential (W ~ 1/sin^2) kills the
// integrand, so the outer u-axis absorbs all the refinement while the inner
// w-integrand stays smooth.
template <class NodeFn>
double crossing_angular(double rtol, const NodeFn& node_value) {
  constexpr double clip2 = 2.0 * kAngleClip;
  auto inner = [&node_value](double u) {
    const double w_lo = clip2 - u;
    const double w_hi = u - clip2;
    if (!(w_hi > w_lo)) return 0.0;
    auto f = [&node_value, u](double w) {
      return 0.5 * node_value(0.5 * (u + w), 0.5 * (u - w));
    };
    return adaptive_simpson(f, w_lo, w_hi, 1e-7, 0.0, 18);
  };
  return adaptive_simpson(inner, clip2, pi - kAngleClip, rtol, 0.0, 20);
}

double crossing_pdf_impl(double l, double lam) {
  if (!(l > 0.0)) return 0.0;
  return crossing_angular(1e-6, [l, lam](double ups, double tau) {
    CrossingNode n;
    if (!crossing_node(ups, tau, lam, &n)) return 0.0;
    const double e = std::exp(-n.w * l * l);
    if (e == 0.0) return 0.0;
    return n.a * l * l * (n.b * l * l - n.c) * e;
  });
}

struct CrossingMoments {
  double mass = 0.0;
  double first = 0.0;  // integral of l * pdf
};

// On the triangle W is bounded away from zero, so the l-integrals can be taken
// in closed form per angle node (Gaussian moments), leaving one 2-D angular
// quadrature for each moment:
//   int_0^inf l^2 (B l^2 - C) e^{-W l^2} dl = 3 sqrt(pi) B / (8 W^{5/2})
//                                             - sqrt(pi) C / (4 W^{3/2})
//   int_0^inf l^3 (B l^2 - C) e^{-W l^2} dl = B / W^3 - C / (2 W^2)
CrossingMoments crossing_moments(double lam) {
  CrossingMoments m;
  m.mass = crossing_angular(1e-8, [lam](double ups, double tau) {
    CrossingNode n;
    if (!crossing_node(ups, tau, lam, &n)) return 0.0;
    const double sw = std::sqrt(n.w);
    return n.a * (3.0 * std::sqrt(pi) * n.b / (8.0 * n.w * n.w * sw) -
                  std::sqrt(pi) * n.c / (4.0 * n.w * sw));
  });
  m.first = crossing_angular(1e-8, [lam](double ups, double tau) {
    CrossingNode n;
    if (!crossing_node(ups, tau, lam, &n)) return 0.0;
    return n.a * (n.b / (n.w * n.w * n.w) - n.c / (2.0 * n.w * n.w));
  });
  return m;
}

// The density is scale covariant — f(l; lambda) = sqrt(lambda) f(l sqrt(lambda); 1)
// exactly, by substitution in the double integral — so moments are computed
// once at unit density and rescaled.
std::mutex g_moments_mutex;

CrossingMoments unit_moments_cached() {
  std::lock_guard<std::mutex> lock(g_moments_mutex);
  static const CrossingMoments m = crossing_moments(1.0);
  return m;
}

}  // namespace

double crossing_length_pdf(double l, double lambda_b) {
  if (!(lambda_b > 0.0)) throw std::invalid_argument("BS density must be positive");
  return crossing_pdf_impl(l, lambda_b);
}

double crossing_length_mass(double lambda_b) {
  if (!(lambda_b > 0.0)) throw std::invalid_argument("BS density must be positive");
  return unit_moments_cached().mass;  // invariant under the l*sqrt(lambda) collapse
}

double expected_crossing_length(double lambda_b) {
  if (!(lambda_b > 0.0)) throw std::invalid_argument("BS density must be positive");
  const CrossingMoments m = unit_moments_cached();
  if (!(m.mass > 0.0)) throw std::runtime_error("crossing-length density mass is not positive");
  return (m.first / m.mass) / std::sqrt(lambda_b);
}

ScenarioGeometry make_geometry(const ScenarioConfig& cfg) {
  if (!(cfg.lambda_b > 0.0)) throw std::invalid_argument("BS density must be positive");
  if (!(cfg.v > 0.0)) throw std::invalid_argument("speed must be positive");
  if (!(cfg.t_d > 0.0)) throw std::invalid_argument("measurement period must be positive");

  ScenarioGeometry g;
  g.lambda_b = cfg.lambda_b;
  g.v = cfg.v;
  g.t_d = cfg.t_d;
  const double off = (cfg.r_o && cfg.r_t) ? 0.0 : default_offset(cfg.lambda_b);
  g.r_o = cfg.r_o.value_or(off);
  g.r_t = cfg.r_t.value_or(-off);
  g.span = cfg.span.value_or(expected_crossing_length(cfg.lambda_b));
  if (!(g.span > 0.0)) throw std::invalid_argument("trajectory span must be positive");

  g.dx = g.v * g.t_d;
  g.n_steps = static_cast<int>(std::ceil(g.span / g.dx));
  g.x_mid = (g.r_o * g.r_o - g.r_t * g.r_t + g.span * g.span) / (2.0 * g.span);
  g.theta = std::atan2(g.span, g.r_o - g.r_t);  // bisector direction angle
  g.sin_theta = std::sin(g.theta);
  g.cos_theta = std::cos(g.theta);
  g.bs_o = {0.0, g.r_o};
  g.bs_t = {g.span, g.r_t};

  // Orient the boundary so side_offset(original, .) is positive at the
  // original BS. Degenerate placements (BS on the boundary) are rejected.
  const double sigma_o =
      g.cos_theta * g.bs_o.y - g.sin_theta * (g.bs_o.x - g.x_mid);
  if (sigma_o == 0.0) throw std::invalid_argument("original BS lies on the cell boundary");
  g.side_sign_o = sigma_o > 0.0 ? 1.0 : -1.0;
  return g;
}

}  // namespace irsho
