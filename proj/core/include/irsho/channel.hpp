#pragma once

#include <cmath>

#include "irsho/mathx.hpp"

// Cascaded reflecting-surface channel model. A base station reaches the user
// directly (power-law path loss) and through a passive N-element reflecting
// surface. When the surface serves the user (user-surface distance d within
// the serving distance D) it beamforms, adding an N^2-order cascaded term and
// a cross term; otherwise it only scatters, adding an N-order cascaded term.
// Neighbor-cell measurements never enjoy beamforming.
namespace irsho {

struct ChannelParams {
  double p_t = 1.0;      // transmit power, W
  double f_c = 0.0;      // carrier frequency, Hz
  double alpha = 4.0;    // path-loss exponent, > 2
  int n_elements = 0;    // reflecting elements N
  double d_serv = 0.0;   // serving distance D, m
  double beta = 0.0;     // reference gain constant (4 pi f_c / c)^2
  double g_bf = 0.0;     // beamforming array gain (pi^2/16) N^2 + (1-pi^2/16) N
  // Derived constants for the hot path.
  bool alpha_is_4 = true;
  double beta_sqrt = 0.0;   // beta^{1/2}
  double cross_coef = 0.0;  // N * pi^{3/2} / 4, coefficient of sqrt(gb*gr*gb')
};

inline constexpr double speed_of_light = 3.0e8;

// Array gain of N-element coherent reflection over random scattering.
inline double beamforming_array_gain(int n) {
  constexpr double q = pi * pi / 16.0;
  return q * double(n) * double(n) + (1.0 - q) * double(n);
}

ChannelParams make_channel(double p_t, double f_c, double alpha, int n_elements,
                           double d_serv);

// ---- hot path: gains from squared distances, no validation ----------------

// Power-law gain beta * dist^-alpha from the squared distance.
inline double pathloss_sq(double dist2, const ChannelParams& p) {
  if (p.alpha_is_4) return p.beta / (dist2 * dist2);
  return p.beta * std::pow(dist2, -0.5 * p.alpha);
}

// Beamforming-path gain: gb(x) + G_bf*gr(d)*gb(x') + N(pi/4)sqrt(pi gb gr gb').
inline double gamma_bf_sq(double x2, double d2, double xp2,
                          const ChannelParams& p) {
  const double gb = pathloss_sq(x2, p);
  if (p.n_elements == 0) return gb;
  const double gr = pathloss_sq(d2, p);
  const double gbp = pathloss_sq(xp2, p);
  const double root = p.alpha_is_4
                          ? p.beta * p.beta_sqrt / (x2 * d2 * xp2)
                          : std::sqrt(gb * gr * gbp);
  return gb + p.g_bf * gr * gbp + p.cross_coef * root;
}

// Scattering-path gain: gb(x) + N*gb(x')*gr(d).
inline double gamma_sc_sq(double x2, double d2, double xp2,
                          const ChannelParams& p) {
  const double gb = pathloss_sq(x2, p);
  if (p.n_elements == 0) return gb;
  return gb + double(p.n_elements) * pathloss_sq(xp2, p) * pathloss_sq(d2, p);
}

// Squared BS-surface distance by the law of cosines (cosine clamped against
// float noise at tangent geometries).
inline double xprime_sq(double x, double d, double phi) {
  double c = std::cos(phi);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return x * x + d * d - 2.0 * x * d * c;
}

// ---- validated API ---------------------------------------------------------

// Direct-path gain beta * dist^-alpha.
double pathloss_direct(double dist, const ChannelParams& p);

double gamma_bf(double x, double d, double phi, const ChannelParams& p);
double gamma_sc(double x, double d, double phi, const ChannelParams& p);

// Received power from the serving BS: beamforming iff d <= D (boundary on the
// beamforming side), scattering otherwise.
double received_power_serving(double x, double d, double phi,
                              const ChannelParams& p);

// Received power from the neighbor BS: always scattering.
double received_power_neighbor(double x, double d, double phi,
                               const ChannelParams& p);

// Serving distance for a relative-gain threshold: D = (G_bf beta/gamma)^{1/alpha},
// the distance where beamforming raises the received power by the factor
// 1 + gamma_irs over scattering (far-field approximation).
double serving_distance_from_threshold(double gamma_irs,
                                       const ChannelParams& p);

// Inverse of the above: gamma_irs = G_bf beta / D^alpha.
double threshold_from_serving_distance(double d_serv, const ChannelParams& p);

}  // namespace irsho
