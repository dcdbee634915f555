#include "irsho/channel.hpp"

#include <stdexcept>

namespace irsho {

ChannelParams make_channel(double p_t, double f_c, double alpha, int n_elements,
                           double d_serv) {
  if (!(p_t > 0.0)) throw std::invalid_argument("transmit power must be positive");
  if (!(f_c > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
  if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent must exceed 2");
  if (n_elements < 0) throw std::invalid_argument("element count must be nonnegative");
  if (d_serv < 0.0) throw std::invalid_argument("serving distance must be nonnegative");
  ChannelParams p;
  p.p_t = p_t;
  p.f_c = f_c;
  p.alpha = alpha;
  p.n_elements = n_elements;
  p.d_serv = d_serv;
  const double k = 4.0 * pi * f_c / speed_of_light;
  p.beta = k * k;
  p.g_bf = beamforming_array_gain(n_elements);
  p.alpha_is_4 = alpha == 4.0;
  p.beta_sqrt = std::sqrt(p.beta);
  p.cross_coef = double(n_elements) * pi * std::sqrt(pi) / 4.0;
  return p;
}

namespace {

void check_args(double x, double d) {
  if (!(x > 0.0)) throw std::domain_error("user-BS distance must be positive");
  if (!(d > 0.0)) throw std::domain_error("user-surface distance must be positive");
}

double xprime_sq_checked(double x, double d, double phi) {
  const double xp2 = xprime_sq(x, d, phi);
  if (!(xp2 > 0.0))
    throw std::domain_error("degenerate collinear geometry: BS-surface distance is zero");
  return xp2;
}

}  // namespace

double pathloss_direct(double dist, const ChannelParams& p) {
  if (!(dist > 0.0)) throw std::domain_error("distance must be positive");
  return pathloss_sq(dist * dist, p);
}

double gamma_bf(double x, double d, double phi, const ChannelParams& p) {
  check_args(x, d);
  return gamma_bf_sq(x * x, d * d, xprime_sq_checked(x, d, phi), p);
}

double gamma_sc(double x, double d, double phi, const ChannelParams& p) {
  check_args(x, d);
  return gamma_sc_sq(x * x, d * d, xprime_sq_checked(x, d, phi), p);
}

double received_power_serving(double x, double d, double phi,
                              const ChannelParams& p) {
  return p.p_t * (d <= p.d_serv ? gamma_bf(x, d, phi, p) : gamma_sc(x, d, phi, p));
}

double received_power_neighbor(double x, double d, double phi,
                               const ChannelParams& p) {
  return p.p_t * gamma_sc(x, d, phi, p);
}

double serving_distance_from_threshold(double gamma_irs, const ChannelParams& p) {
  if (!(gamma_irs > 0.0)) throw std::invalid_argument("gain threshold must be positive");
  if (p.n_elements == 0) return 0.0;  // scattering never beats itself
  return std::pow(p.g_bf * p.beta / gamma_irs, 1.0 / p.alpha);
}

double threshold_from_serving_distance(double d_serv, const ChannelParams& p) {
  if (!(d_serv > 0.0)) throw std::invalid_argument("serving distance must be positive");
  return p.g_bf * p.beta * std::pow(d_serv, -p.alpha);
}

}  // namespace irsho
