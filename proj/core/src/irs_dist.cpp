#include "irsho/irs_dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsho {

namespace {

// Tail-law quantile: the d beyond which the nearest-IRS-beyond-D law keeps
// less than `eps` of its mass.
double tail_quantile(double lambda_r, double d_serv, double eps) {
  return std::sqrt(d_serv * d_serv - std::log(eps) / (lambda_r * pi));
}

}  // namespace

ConditionalPdfSpec::ConditionalPdfSpec(const ScenarioGeometry& g,
                                       DistConfig cfg, Side side, int state,
                                       int step)
    : g_(&g), cfg_(cfg), side_(side), state_(state), step_(step) {
  if (state < state_none || state > state_held)
    throw std::invalid_argument("connection state out of range");
  if (cfg.lambda_r < 0.0) throw std::invalid_argument("lambda_r must be >= 0");
  if (cfg.d_serv <= 0.0) throw std::invalid_argument("d_serv must be > 0");
  h_cur_ = g.side_offset(side, g.user(g.x(step)));
  psi0_ = halfplane_normal_angle(g, side);
  if (cfg.lambda_r <= 0.0) return;  // no IRS process: nothing is reachable

  const double d = cfg.d_serv;
  switch (state) {
    case state_none:
    case state_dropped: {
      reachable_ = true;
      d_lo_ = d;
      d_hi_ = tail_quantile(cfg.lambda_r, d, 1e-6);
      break;
    }
    case state_acquired: {
      d_lo_ = std::max(0.0, d - g.dx);
      d_hi_ = d;
      // Tabulate the just-gained in-cell ring length over (D - dx, D]. The
      // density and its normalizer both come from this table, so the law is
      // normalized by construction even when the gained territory is a thin
      // sliver whose area would be lost to cancellation in a closed-form
      // area difference.
      const int n = 2048;
      fresh_lo_ = d_lo_;
      fresh_step_ = (d_hi_ - d_lo_) / n;
      fresh_g_.resize(n + 1);
      fresh_cum_.resize(n + 1);
      KahanSum cum;
      for (int k = 0; k <= n; ++k) {
        fresh_g_[static_cast<std::size_t>(k)] =
            fresh_ring(fresh_lo_ + k * fresh_step_);
        if (k > 0)
          cum.add(0.5 *
                  (fresh_g_[static_cast<std::size_t>(k) - 1] +
                   fresh_g_[static_cast<std::size_t>(k)]) *
                  fresh_step_);
        fresh_cum_[static_cast<std::size_t>(k)] = cum.value();
      }
      denom_ = one_minus_exp_neg(cfg.lambda_r * fresh_cum_.back());
      reachable_ = denom_ > 0.0;
      break;
    }
    case state_held: {
      const double s_cur = disc_halfplane_area(d, h_cur_);
      denom_ = one_minus_exp_neg(cfg.lambda_r * s_cur);
      reachable_ = denom_ > 0.0;
      d_lo_ = 0.0;
      d_hi_ = d;
      break;
    }
    default:
      break;
  }
}

double ConditionalPdfSpec::fresh_ring(double rho) const {
  if (rho <= 0.0) return 0.0;
  const Arc half = make_arc(psi0_, acos_clamped(-h_cur_ / rho));
  const Arc gained = new_territory_arc(cfg_.d_serv, g_->dx, rho);
  return rho * arc_intersect(half, gained).total();
}

double ConditionalPdfSpec::fresh_ring_interp(double d) const {
  if (d <= fresh_lo_) return 0.0;
  if (d >= d_hi_) return fresh_g_.back();
  const double u = (d - fresh_lo_) / fresh_step_;
  const auto k = static_cast<std::size_t>(u);
  const double t = u - static_cast<double>(k);
  return fresh_g_[k] + t * (fresh_g_[k + 1] - fresh_g_[k]);
}

double ConditionalPdfSpec::fresh_area(double d) const {
  if (d <= fresh_lo_) return 0.0;
  if (d >= d_hi_) return fresh_cum_.back();
  const double u = (d - fresh_lo_) / fresh_step_;
  const auto k = static_cast<std::size_t>(u);
  const double t = u - static_cast<double>(k);
  const double g0 = fresh_g_[k];
  const double g1 = fresh_g_[k + 1];
  // Exact integral of the table's linear interpolant over the partial cell,
  // so that d/dd fresh_area == fresh_ring_interp identically.
  return fresh_cum_[k] + fresh_step_ * t * (g0 + 0.5 * t * (g1 - g0));
}

void ConditionalPdfSpec::require_reachable() const {
  if (!reachable_)
    throw std::domain_error(
        "connection state is unreachable at this step (zero-probability "
        "conditioning)");
}

std::vector<double> ConditionalPdfSpec::d_breakpoints() const {
  std::vector<double> b;
  if (state_ == state_acquired || state_ == state_held) {
    // The in-cell arc saturates (full or empty circle) at radius |h|.
    const double ah = std::abs(h_cur_);
    if (ah > d_lo_ && ah < d_hi_) b.push_back(ah);
  }
  if (state_ == state_acquired && !fresh_g_.empty()) {
    // Where the gained ring length first becomes positive the density has a
    // square-root onset; splitting there keeps midpoint quadrature accurate.
    std::size_t k = 0;
    while (k < fresh_g_.size() && fresh_g_[k] <= 0.0) ++k;
    if (k > 0 && k < fresh_g_.size()) {
      const double onset =
          fresh_lo_ + static_cast<double>(k - 1) * fresh_step_;
      if (onset > d_lo_ && onset < d_hi_) b.push_back(onset);
    }
  }
  return b;
}

double ConditionalPdfSpec::pdf_distance(double d) const {
  require_reachable();
  const double lam = cfg_.lambda_r;
  switch (state_) {
    case state_none:
    case state_dropped: {
      if (d <= cfg_.d_serv) return 0.0;
      const double excess = pi * (d * d - cfg_.d_serv * cfg_.d_serv);
      return two_pi * lam * d * std::exp(-lam * excess);
    }
    case state_acquired: {
      if (d <= d_lo_ || d > d_hi_) return 0.0;
      const double ddiff = fresh_ring_interp(d);
      const double adiff = fresh_area(d);
      return lam * ddiff * std::exp(-lam * adiff) / denom_;
    }
    case state_held: {
      if (d <= 0.0 || d > cfg_.d_serv) return 0.0;
      const double deriv = disc_halfplane_deriv(d, h_cur_);
      const double area = disc_halfplane_area(d, h_cur_);
      return lam * deriv * std::exp(-lam * area) / denom_;
    }
    default:
      return 0.0;
  }
}

ArcSet ConditionalPdfSpec::angle_arcs(double d) const {
  require_reachable();
  switch (state_) {
    case state_none:
    case state_dropped:
      return arcset_of(Arc{0.0, two_pi});
    case state_held:
      return arcset_of(make_arc(psi0_, acos_clamped(-h_cur_ / d)));
    case state_acquired: {
      const Arc half = make_arc(psi0_, acos_clamped(-h_cur_ / d));
      if (half.full())
        return arcset_of(new_territory_arc(cfg_.d_serv, g_->dx, d));
      // Straddle band: the printed law spreads the angle uniformly over the
      // whole in-cell arc rather than the just-gained part; kept as printed.
      return arcset_of(half);
    }
    default:
      return ArcSet{};
  }
}

double ConditionalPdfSpec::pdf_angle(double d, double phi_prime) const {
  const ArcSet arcs = angle_arcs(d);
  const double total = arcs.total();
  if (total <= 0.0) return 0.0;
  return arcset_contains(arcs, phi_prime) ? 1.0 / total : 0.0;
}

double pdf_distance(const ConditionalPdfSpec& spec, double d) {
  return spec.pdf_distance(d);
}

double pdf_angle(const ConditionalPdfSpec& spec, double d, double phi_prime) {
  return spec.pdf_angle(d, phi_prime);
}

QuadPlan build_quad_plan(const ConditionalPdfSpec& spec,
                         int pts_per_interval) {
  QuadPlan plan;
  if (!spec.reachable()) return plan;
  std::vector<double> edges{spec.d_lo()};
  for (double b : spec.d_breakpoints()) edges.push_back(b);
  edges.push_back(spec.d_hi());
  std::sort(edges.begin(), edges.end());
  const auto n_total =
      static_cast<std::size_t>(pts_per_interval) * (edges.size() - 1);
  plan.d_nodes.reserve(n_total);
  plan.d_mass.reserve(n_total);
  plan.arcs.reserve(n_total);
  KahanSum mass;
  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double lo = edges[seg];
    const double hi = edges[seg + 1];
    if (hi <= lo) continue;
    const double h = (hi - lo) / pts_per_interval;
    for (int k = 0; k < pts_per_interval; ++k) {
      const double d = lo + (k + 0.5) * h;
      const double m = spec.pdf_distance(d) * h;
      plan.d_nodes.push_back(d);
      plan.d_mass.push_back(m);
      plan.arcs.push_back(spec.angle_arcs(d));
      mass.add(m);
    }
  }
  plan.mass_total = mass.value();
  return plan;
}

namespace {

double expect_once(const ConditionalPdfSpec& spec,
                   const std::function<bool(double, double)>& predicate,
                   int d_pts, int phi_pts) {
  const QuadPlan plan = build_quad_plan(spec, d_pts);
  if (plan.mass_total <= 0.0) return 0.0;
  KahanSum acc;
  for (std::size_t j = 0; j < plan.d_nodes.size(); ++j) {
    const double d = plan.d_nodes[j];
    const ArcSet& arcs = plan.arcs[j];
    const double total = arcs.total();
    if (total <= 0.0 || plan.d_mass[j] <= 0.0) continue;
    double hit_len = 0.0;
    for (int a = 0; a < arcs.n; ++a) {
      const Arc& arc = arcs.arc[static_cast<std::size_t>(a)];
      const double step = arc.len / phi_pts;
      int hits = 0;
      for (int k = 0; k < phi_pts; ++k) {
        const double phi = arc.start + (k + 0.5) * step;
        if (predicate(d, phi)) ++hits;
      }
      hit_len += arc.len * hits / phi_pts;
    }
    acc.add(plan.d_mass[j] * (hit_len / total));
  }
  return acc.value() / plan.mass_total;
}

}  // namespace

double expect_indicator(const ConditionalPdfSpec& spec,
                        const std::function<bool(double, double)>& predicate) {
  if (!spec.reachable())
    throw std::domain_error(
        "connection state is unreachable at this step (zero-probability "
        "conditioning)");
  const double e1 = expect_once(spec, predicate, 256, 512);
  const double e2 = expect_once(spec, predicate, 512, 1024);
  if (std::abs(e2 - e1) > 5e-4) return expect_once(spec, predicate, 1024, 2048);
  return e2;
}

}  // namespace irsho
