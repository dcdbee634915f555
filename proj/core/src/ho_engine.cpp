#include "irsho/ho_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "irsho/diag.hpp"
#include "irsho/mathx.hpp"

namespace irsho {

namespace {

// Engine quadrature resolution. The event probabilities integrate indicator
// predicates over the conditional (d, phi') laws; midpoint grids at this
// resolution keep the per-step bias well under the Monte Carlo validation
// tolerances while row screening skips everything far from a threshold.
constexpr int kRadialPerInterval = 128;
constexpr int kAngularNodes = 256;
constexpr double kWeightFloor = 1e-14;
constexpr double kXp2Floor = 1e-12;

}  // namespace

// ---- absorbing-chain updates -----------------------------------------------

HoChainState HoChainState::initial(int j) {
  if (j < 1) throw std::invalid_argument("trigger chain needs j >= 1");
  HoChainState st;
  st.j = j;
  st.s.assign(static_cast<std::size_t>(j) + 2, 0.0);
  st.s[0] = 1.0;
  return st;
}

void HoChainState::step(double p) {
  auto& v = s;
  const int J = j;
  double active = 0.0;
  for (int q = 0; q <= J - 1; ++q) active += v[static_cast<std::size_t>(q)];
  v[static_cast<std::size_t>(J) + 1] += v[static_cast<std::size_t>(J)];
  for (int q = J; q >= 1; --q)
    v[static_cast<std::size_t>(q)] = p * v[static_cast<std::size_t>(q) - 1];
  v[0] = (1.0 - p) * active;
}

HofChainState HofChainState::initial(int j) {
  if (j < 1) throw std::invalid_argument("failure chain needs j >= 1");
  HofChainState st;
  st.j = j;
  st.s.assign(static_cast<std::size_t>(j) + 3, 0.0);
  st.s[0] = 1.0;
  return st;
}

void HofChainState::step(double p_h, double p_f) {
  auto& v = s;
  const int J = j;
  const double adv = p_h - p_f;
  double reset = v[0];
  double fails = 0.0;
  for (int q = 1; q <= J - 1; ++q) {
    reset += v[static_cast<std::size_t>(q)];
    fails += v[static_cast<std::size_t>(q)];
  }
  fails *= p_f;
  v[static_cast<std::size_t>(J) + 2] += v[static_cast<std::size_t>(J) + 1];
  v[static_cast<std::size_t>(J) + 1] = fails;
  if (J >= 2) {
    v[static_cast<std::size_t>(J)] += adv * v[static_cast<std::size_t>(J) - 1];
    for (int q = J - 1; q >= 2; --q)
      v[static_cast<std::size_t>(q)] =
          adv * v[static_cast<std::size_t>(q) - 1];
    v[1] = p_h * v[0];
  } else {
    v[1] += p_h * v[0];  // F_0 advances straight into the absorbing F_j
  }
  v[0] = (1.0 - p_h) * reset;
}

PpChainState PpChainState::initial(int u) {
  if (u < 1) throw std::invalid_argument("ping-pong chain needs u >= 1");
  PpChainState st;
  st.u = u;
  st.s.assign(static_cast<std::size_t>(u) + 3, 0.0);
  st.s[0] = 1.0;
  return st;
}

void PpChainState::step(double p_c, double p_pp) {
  auto& v = s;
  const int U = u;
  double falls = 0.0;
  for (int q = 1; q <= U - 1; ++q) falls += v[static_cast<std::size_t>(q)];
  falls *= p_pp;
  v[static_cast<std::size_t>(U) + 2] += v[static_cast<std::size_t>(U) + 1];
  v[static_cast<std::size_t>(U) + 1] = falls;
  const double adv = 1.0 - p_pp;
  if (U >= 2) {
    v[static_cast<std::size_t>(U)] += adv * v[static_cast<std::size_t>(U) - 1];
    for (int q = U - 1; q >= 2; --q)
      v[static_cast<std::size_t>(q)] =
          adv * v[static_cast<std::size_t>(q) - 1];
    v[1] = p_c * v[0];
  } else {
    v[1] += p_c * v[0];  // U == 1: the window has no fall opportunity
  }
  v[0] = (1.0 - p_c) * v[0];
}

// ---- dense reference matrices ------------------------------------------------

namespace {

std::vector<std::vector<double>> zero_matrix(std::size_t n) {
  return std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0));
}

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(name) + " must be in [0,1]");
}

}  // namespace

std::vector<std::vector<double>> build_ho_matrix(double p_h, int j) {
  check_prob(p_h, "p_h");
  if (j < 1) throw std::invalid_argument("j must be >= 1");
  const std::size_t n = static_cast<std::size_t>(j) + 2;
  auto t = zero_matrix(n);
  for (int q = 0; q <= j - 1; ++q) {
    t[static_cast<std::size_t>(q)][0] = 1.0 - p_h;
    t[static_cast<std::size_t>(q)][static_cast<std::size_t>(q) + 1] = p_h;
  }
  t[static_cast<std::size_t>(j)][n - 1] = 1.0;  // H_j -> H_c
  t[n - 1][n - 1] = 1.0;                        // H_c absorbing
  return t;
}

std::vector<std::vector<double>> build_hof_matrix(double p_h, double p_f,
                                                  int j) {
  check_prob(p_h, "p_h");
  check_prob(p_f, "p_f");
  if (j < 1) throw std::invalid_argument("j must be >= 1");
  if (p_f > p_h) {
    diagnostics().failure_prob_clamps.fetch_add(1,
                                                std::memory_order_relaxed);
    p_f = p_h;
  }
  const std::size_t n = static_cast<std::size_t>(j) + 3;
  const std::size_t i_t = n - 2, i_c = n - 1;
  auto t = zero_matrix(n);
  t[0][0] = 1.0 - p_h;  // no failure on the trigger step
  t[0][1] = p_h;
  for (int q = 1; q <= j - 1; ++q) {
    t[static_cast<std::size_t>(q)][0] = 1.0 - p_h;
    t[static_cast<std::size_t>(q)][static_cast<std::size_t>(q) + 1] =
        p_h - p_f;
    t[static_cast<std::size_t>(q)][i_t] = p_f;
  }
  t[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = 1.0;
  t[i_t][i_c] = 1.0;
  t[i_c][i_c] = 1.0;
  return t;
}

std::vector<std::vector<double>> build_pp_matrix(double p_c, double p_pp,
                                                 int u) {
  check_prob(p_c, "p_c");
  check_prob(p_pp, "p_pp");
  if (u < 1) throw std::invalid_argument("u must be >= 1");
  const std::size_t n = static_cast<std::size_t>(u) + 3;
  const std::size_t i_t = n - 2, i_c = n - 1;
  auto t = zero_matrix(n);
  t[0][0] = 1.0 - p_c;
  t[0][1] = p_c;
  for (int q = 1; q <= u - 1; ++q) {
    t[static_cast<std::size_t>(q)][static_cast<std::size_t>(q) + 1] =
        1.0 - p_pp;
    t[static_cast<std::size_t>(q)][i_t] = p_pp;
  }
  t[static_cast<std::size_t>(u)][static_cast<std::size_t>(u)] = 1.0;
  t[i_t][i_c] = 1.0;
  t[i_c][i_c] = 1.0;
  return t;
}

// ---- step counts ---------------------------------------------------------------

namespace {

double snap_integer(double r) {
  const double n = std::nearbyint(r);
  if (std::abs(r - n) < 1e-9 * std::max(1.0, std::abs(r))) return n;
  return r;
}

}  // namespace

int trigger_steps(double t_trigger, double t_d) {
  if (t_d <= 0.0) throw std::invalid_argument("step period must be positive");
  const double r = snap_integer(t_trigger / t_d);
  int f = static_cast<int>(std::floor(r));
  if (f < 0) f = 0;
  return f + 1;
}

int pp_window_steps(double t_pp, double t_trigger, double t_d) {
  if (t_d <= 0.0) throw std::invalid_argument("step period must be positive");
  const double r = snap_integer((t_pp - t_trigger) / t_d);
  int c = static_cast<int>(std::ceil(r));
  if (c < 1) c = 1;
  return c;
}

// ---- per-step exceedance integration -------------------------------------------

namespace {

// Received-gain profile along a ring of fixed user-surface distance: only the
// BS-surface squared distance xp2 varies with the surface bearing, and the
// gain is base + c2 * xp2^{-alpha/2} + c1 * xp2^{-alpha/4} (beamforming keeps
// the cross term; scattering has c1 = 0). Decreasing in xp2.
struct GainProfile {
  double base = 0.0, c2 = 0.0, c1 = 0.0;
  double e2 = 2.0, e1 = 1.0;
  bool a4 = true;

  double operator()(double xp2) const {
    if (a4) {
      const double inv = 1.0 / xp2;
      return base + (c2 * inv) * inv + c1 * inv;
    }
    return base + c2 * std::pow(xp2, -e2) + c1 * std::pow(xp2, -e1);
  }
};

GainProfile make_profile(const ChannelParams& p, double gb, double d2,
                         bool beamform) {
  GainProfile g;
  g.base = gb;
  g.a4 = p.alpha_is_4;
  g.e2 = 0.5 * p.alpha;
  g.e1 = 0.25 * p.alpha;
  if (p.n_elements == 0) return g;
  const double gr = pathloss_sq(d2, p);
  if (beamform) {
    g.c2 = p.g_bf * gr * p.beta;
    g.c1 = p.cross_coef * std::sqrt(gb * gr * p.beta);
  } else {
    g.c2 = static_cast<double>(p.n_elements) * p.beta * gr;
  }
  return g;
}

struct ExceedOut {
  std::vector<double> ge;  // E[1{eta >= gamma_k}] (or strict >)
  double fail = 0.0;       // E[1{eta > fail_thr}]
};

// Law expectation of the threshold indicators for the power ratio
//   eta = Gamma_neighbor(x_num, d, phi_num) / Gamma_serving(x_den, d, phi_den)
// where the serving side is `den_side` (beamforming when the law's state is a
// connected one) and (d, phi') follow `plan`. gammas must be sorted ascending.
ExceedOut exceed_class(const QuadPlan& plan, const StepFrame& fr,
                       Side den_side, bool beamform, const ChannelParams& ch,
                       const std::vector<double>& gammas, bool strict,
                       double fail_thr) {
  const bool den_orig = den_side == Side::original;
  const double x_den = den_orig ? fr.x_o : fr.x_t;
  const double x_num = den_orig ? fr.x_t : fr.x_o;
  const double b_den = den_orig ? fr.bearing_o : fr.bearing_t;
  const double b_num = den_orig ? fr.bearing_t : fr.bearing_o;
  const double cbd = std::cos(b_den), sbd = std::sin(b_den);
  const double cbn = std::cos(b_num), sbn = std::sin(b_num);
  const double xd2 = x_den * x_den, xn2 = x_num * x_num;
  const double gbd = pathloss_sq(xd2, ch), gbn = pathloss_sq(xn2, ch);

  const std::size_t n_gamma = gammas.size();
  ExceedOut out;
  out.ge.assign(n_gamma, 0.0);
  const bool do_fail = fail_thr > 0.0;

  // Per-row scratch: mass of angle nodes whose threshold cut sits at index e
  // (thresholds [K_pass, e) passed by the node).
  std::vector<double> cut_hist(n_gamma + 1, 0.0);

  for (std::size_t r = 0; r < plan.d_nodes.size(); ++r) {
    const double m = plan.d_mass[r];
    if (m <= 0.0) continue;
    const double d = plan.d_nodes[r];
    const double d2 = d * d;
    const GainProfile g_den = make_profile(ch, gbd, d2, beamform);
    const GainProfile g_num = make_profile(ch, gbn, d2, false);

    const double den_lo2 = std::max(sq(x_den - d), kXp2Floor);
    const double num_lo2 = std::max(sq(x_num - d), kXp2Floor);
    const double eta_min = g_num(sq(x_num + d)) / g_den(den_lo2);
    const double eta_max = g_num(num_lo2) / g_den(sq(x_den + d));

    // Partition the threshold list: [0, k_pass) decided-pass, [k_zero, K)
    // decided-fail, the middle needs the angle sweep.
    std::size_t k_pass, k_zero;
    if (strict) {
      k_pass = static_cast<std::size_t>(
          std::lower_bound(gammas.begin(), gammas.end(), eta_min) -
          gammas.begin());
      k_zero = static_cast<std::size_t>(
          std::lower_bound(gammas.begin(), gammas.end(), eta_max) -
          gammas.begin());
    } else {
      k_pass = static_cast<std::size_t>(
          std::upper_bound(gammas.begin(), gammas.end(), eta_min) -
          gammas.begin());
      k_zero = static_cast<std::size_t>(
          std::upper_bound(gammas.begin(), gammas.end(), eta_max) -
          gammas.begin());
    }
    for (std::size_t k = 0; k < k_pass; ++k) out.ge[k] += m;

    bool fail_amb = false;
    if (do_fail) {
      if (eta_min > fail_thr)
        out.fail += m;
      else if (eta_max > fail_thr)
        fail_amb = true;
    }
    if (k_pass == k_zero && !fail_amb) continue;

    const ArcSet& arcs = plan.arcs[r];
    const double total = arcs.total();
    if (total <= 0.0) continue;

    for (std::size_t e = k_pass; e <= k_zero; ++e) cut_hist[e] = 0.0;
    double fail_frac = 0.0;
    for (int a = 0; a < arcs.n; ++a) {
      const Arc& arc = arcs.arc[static_cast<std::size_t>(a)];
      if (arc.len <= 0.0) continue;
      const int n_a = std::max(
          1, static_cast<int>(std::lround(kAngularNodes * arc.len / total)));
      const double h = arc.len / n_a;
      const double w_node = (arc.len / total) / n_a;
      const double phi0 = arc.start + 0.5 * h;
      double c = std::cos(phi0), sv = std::sin(phi0);
      const double chh = std::cos(h), shh = std::sin(h);
      for (int k = 0; k < n_a; ++k) {
        const double cos_n = cbn * c + sbn * sv;
        const double cos_d = cbd * c + sbd * sv;
        const double xpn2 =
            std::max(xn2 + d2 - 2.0 * x_num * d * cos_n, kXp2Floor);
        const double xpd2 =
            std::max(xd2 + d2 - 2.0 * x_den * d * cos_d, kXp2Floor);
        const double eta = g_num(xpn2) / g_den(xpd2);
        std::size_t e;
        if (strict)
          e = static_cast<std::size_t>(
              std::lower_bound(gammas.begin() +
                                   static_cast<std::ptrdiff_t>(k_pass),
                               gammas.begin() +
                                   static_cast<std::ptrdiff_t>(k_zero),
                               eta) -
              gammas.begin());
        else
          e = static_cast<std::size_t>(
              std::upper_bound(gammas.begin() +
                                   static_cast<std::ptrdiff_t>(k_pass),
                               gammas.begin() +
                                   static_cast<std::ptrdiff_t>(k_zero),
                               eta) -
              gammas.begin());
        cut_hist[e] += w_node;
        if (fail_amb && eta > fail_thr) fail_frac += w_node;
        const double cn = c * chh - sv * shh;
        sv = sv * chh + c * shh;
        c = cn;
      }
    }
    double acc = 0.0;
    for (std::size_t k = k_zero; k-- > k_pass;) {
      acc += cut_hist[k + 1];
      out.ge[k] += m * acc;
    }
    if (fail_amb) out.fail += m * fail_frac;
  }

  const double inv = plan.mass_total > 0.0 ? 1.0 / plan.mass_total : 0.0;
  for (std::size_t k = 0; k < n_gamma; ++k) out.ge[k] *= inv;
  out.fail *= inv;
  return out;
}

bool no_irs_terms(const EngineConfig& cfg) {
  return cfg.channel.n_elements == 0 || cfg.lambda_r <= 0.0;
}

// One step's mixture over the side's connection states. Writes P(eta >= g_k)
// (strict > when `strict`) into ge_out[k] and, when fail_thr > 0, the outage
// probability P(eta > fail_thr) into *fail_out.
void eval_step_side(const EngineConfig& cfg, const ChainTrace& trace,
                    Side side, int i, const std::vector<double>& gammas,
                    bool strict, double fail_thr, double* ge_out,
                    double* fail_out) {
  const std::size_t n_gamma = gammas.size();
  for (std::size_t k = 0; k < n_gamma; ++k) ge_out[k] = 0.0;
  if (fail_out) *fail_out = 0.0;
  const ScenarioGeometry& g = cfg.geometry;
  const StepFrame fr = g.frame(i);

  if (no_irs_terms(cfg)) {
    // Pure path-loss ratio; the same branch serves both N = 0 and an empty
    // surface process, so the two degenerate configs agree bitwise.
    const double gbo = pathloss_sq(fr.x_o * fr.x_o, cfg.channel);
    const double gbt = pathloss_sq(fr.x_t * fr.x_t, cfg.channel);
    const double eta = side == Side::original ? gbt / gbo : gbo / gbt;
    for (std::size_t k = 0; k < n_gamma; ++k)
      ge_out[k] = (strict ? eta > gammas[k] : eta >= gammas[k]) ? 1.0 : 0.0;
    if (fail_out) *fail_out = eta > fail_thr ? 1.0 : 0.0;
    return;
  }

  const IrsStateVector& sv = trace.states[static_cast<std::size_t>(i)];
  const DistConfig dc{cfg.lambda_r, cfg.channel.d_serv};
  struct ClassSpec {
    int state;
    double weight;
    bool beamform;
  };
  const ClassSpec classes[3] = {
      {state_none, sv[state_none] + sv[state_dropped], false},
      {state_acquired, sv[state_acquired], true},
      {state_held, sv[state_held], true},
  };
  for (const ClassSpec& cls : classes) {
    if (cls.weight <= kWeightFloor) continue;
    const ConditionalPdfSpec spec(g, dc, side, cls.state, i);
    if (!spec.reachable()) continue;  // zero-probability conditioning
    const QuadPlan plan = build_quad_plan(spec, kRadialPerInterval);
    if (plan.mass_total <= 0.0) continue;
    const ExceedOut r = exceed_class(plan, fr, side, cls.beamform,
                                     cfg.channel, gammas, strict, fail_thr);
    for (std::size_t k = 0; k < n_gamma; ++k)
      ge_out[k] += cls.weight * r.ge[k];
    if (fail_out) *fail_out += cls.weight * r.fail;
  }
}

void validate_engine_config(const EngineConfig& cfg) {
  if (cfg.geometry.n_steps < 1)
    throw std::invalid_argument("geometry has no steps");
  if (cfg.geometry.t_d <= 0.0)
    throw std::invalid_argument("step period must be positive");
  if (cfg.channel.d_serv <= 0.0)
    throw std::invalid_argument("serving radius must be positive");
  if (cfg.lambda_r < 0.0)
    throw std::invalid_argument("surface density must be >= 0");
  if (cfg.gamma_ho <= 0.0)
    throw std::invalid_argument("trigger margin must be a positive ratio");
  if (cfg.q_out <= 0.0)
    throw std::invalid_argument("outage threshold must be a positive ratio");
  if (cfg.t_trigger < 0.0)
    throw std::invalid_argument("sustain time must be >= 0");
  if (cfg.t_pp <= cfg.t_trigger)
    throw std::invalid_argument(
        "ping-pong window must end after the sustain time");
}

struct StepTables {
  std::vector<std::vector<double>> p_h;   // [gamma][step]
  std::vector<std::vector<double>> p_pp;  // [gamma][step]
  std::vector<double> p_f;                // [step], unclamped
};

StepTables compute_step_tables(const EngineConfig& cfg,
                               const std::vector<double>& gammas) {
  const int I = cfg.geometry.n_steps;
  const std::size_t n_gamma = gammas.size();
  StepTables t;
  t.p_h.assign(n_gamma, std::vector<double>(static_cast<std::size_t>(I) + 1));
  t.p_pp.assign(n_gamma, std::vector<double>(static_cast<std::size_t>(I) + 1));
  t.p_f.assign(static_cast<std::size_t>(I) + 1, 0.0);

  const bool shortcut = no_irs_terms(cfg);
  const ChainConfig cc{cfg.lambda_r, cfg.channel.d_serv};
  // The degenerate branch never reads the traces; skip the propagation.
  const ChainTrace tr_o = shortcut
                              ? ChainTrace{}
                              : propagate(Side::original, cfg.geometry, cc);
  const ChainTrace tr_t =
      shortcut ? ChainTrace{} : propagate(Side::target, cfg.geometry, cc);

  const double fail_thr = 1.0 / cfg.q_out;
  std::vector<double> ge(n_gamma);
  for (int i = 0; i <= I; ++i) {
    double fail = 0.0;
    eval_step_side(cfg, tr_o, Side::original, i, gammas, false, fail_thr,
                   ge.data(), &fail);
    for (std::size_t k = 0; k < n_gamma; ++k)
      t.p_h[k][static_cast<std::size_t>(i)] = ge[k];
    t.p_f[static_cast<std::size_t>(i)] = fail;
    eval_step_side(cfg, tr_t, Side::target, i, gammas, true, -1.0, ge.data(),
                   nullptr);
    for (std::size_t k = 0; k < n_gamma; ++k)
      t.p_pp[k][static_cast<std::size_t>(i)] = ge[k];
  }
  return t;
}

struct ChainRun {
  HoMetrics metrics;
  long clamps = 0;
};

// Propagates the three chains over the (possibly unclamped) traces and
// extracts every metric. Writes the clamped failure trace back into p_f.
ChainRun propagate_chains(const ScenarioGeometry& g, int j, int u,
                          const std::vector<double>& p_h,
                          std::vector<double>& p_f,
                          const std::vector<double>& p_pp) {
  const int I = g.n_steps;
  ChainRun run;
  HoChainState ho = HoChainState::initial(j);
  HofChainState hof = HofChainState::initial(j);
  PpChainState pp = PpChainState::initial(u);

  auto& m = run.metrics;
  m.pmf_trigger.assign(static_cast<std::size_t>(I) + 1, 0.0);
  m.pmf_exec.assign(static_cast<std::size_t>(I) + 1, 0.0);
  KahanSum trig_tot, exec_tot, trig_x, exec_x, fail_x, fall_x;

  for (int i = 0; i <= I; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    double pf = p_f[ii];
    if (pf > p_h[ii]) {
      pf = p_h[ii];
      p_f[ii] = pf;
      ++run.clamps;
    }
    ho.step(p_h[ii]);
    const double p_c = ho.exec();
    hof.step(p_h[ii], pf);
    pp.step(p_c, p_pp[ii]);

    m.pmf_trigger[ii] = ho.trigger();
    m.pmf_exec[ii] = ho.exec();
    const double x = g.x(i);
    trig_tot.add(ho.trigger());
    exec_tot.add(ho.exec());
    trig_x.add(x * ho.trigger());
    exec_x.add(x * ho.exec());
    if (i < I) {
      // Event-location sums exclude step-I inflow: it is still in transit to
      // the absorbing tally when the walk ends.
      fail_x.add(x * hof.fail_inflow());
      fall_x.add(x * pp.fall_inflow());
    }
  }

  m.trigger_total = std::max(trig_tot.value(), 0.0);
  m.exec_total = std::max(exec_tot.value(), 0.0);
  m.ex_trigger_raw = trig_x.value();
  m.ex_exec_raw = exec_x.value();
  if (m.trigger_total > 0.0)
    m.ex_trigger = m.ex_trigger_raw / m.trigger_total;
  if (m.exec_total > 0.0) m.ex_exec = m.ex_exec_raw / m.exec_total;
  // Accumulated rounding noise can leave a structurally-zero tally a few
  // ulps below zero; probabilities are reported as exact zeros in that case.
  m.p_hof = std::max(hof.failed(), 0.0);
  m.p_pp = std::max(pp.fallen(), 0.0);
  if (m.p_hof > 0.0) m.ex_hof = fail_x.value() / m.p_hof;
  if (m.p_pp > 0.0) m.ex_pp = fall_x.value() / m.p_pp;
  return run;
}

}  // namespace

// ---- spec-level single-step probabilities --------------------------------------

double step_prob_ho(int i, const EngineConfig& cfg, const ChainTrace& orig) {
  const std::vector<double> gammas{cfg.gamma_ho};
  double ge = 0.0;
  eval_step_side(cfg, orig, Side::original, i, gammas, false, -1.0, &ge,
                 nullptr);
  return ge;
}

double step_prob_hof(int i, const EngineConfig& cfg, const ChainTrace& orig) {
  const std::vector<double> gammas;
  double fail = 0.0;
  double* ge = nullptr;
  eval_step_side(cfg, orig, Side::original, i, gammas, false,
                 1.0 / cfg.q_out, ge, &fail);
  return fail;
}

double step_prob_pp(int i, const EngineConfig& cfg, const ChainTrace& target) {
  const std::vector<double> gammas{cfg.gamma_ho};
  double ge = 0.0;
  eval_step_side(cfg, target, Side::target, i, gammas, true, -1.0, &ge,
                 nullptr);
  return ge;
}

StepProbs compute_step_probs(const EngineConfig& cfg) {
  validate_engine_config(cfg);
  StepTables t = compute_step_tables(cfg, {cfg.gamma_ho});
  StepProbs p;
  p.p_h = std::move(t.p_h[0]);
  p.p_pp = std::move(t.p_pp[0]);
  p.p_f = std::move(t.p_f);
  return p;
}

AnalysisResult run_analysis(const EngineConfig& cfg) {
  validate_engine_config(cfg);
  AnalysisResult res;
  res.j = trigger_steps(cfg.t_trigger, cfg.geometry.t_d);
  res.u = pp_window_steps(cfg.t_pp, cfg.t_trigger, cfg.geometry.t_d);
  res.probs = compute_step_probs(cfg);
  ChainRun run = propagate_chains(cfg.geometry, res.j, res.u, res.probs.p_h,
                                  res.probs.p_f, res.probs.p_pp);
  res.metrics = std::move(run.metrics);
  res.failure_prob_clamps = run.clamps;
  if (run.clamps > 0)
    diagnostics().failure_prob_clamps.fetch_add(run.clamps,
                                                std::memory_order_relaxed);
  return res;
}

MiningResult mine_feasible(const EngineConfig& base,
                           const std::vector<double>& t_grid,
                           const std::vector<double>& gamma_grid_linear,
                           double target) {
  validate_engine_config(base);
  if (t_grid.empty() || gamma_grid_linear.empty())
    throw std::invalid_argument("mining grids must be non-empty");
  if (!(target > 0.0))
    throw std::invalid_argument("mining target must be positive");
  const double t_d = base.geometry.t_d;
  for (double t : t_grid) {
    if (t < 0.0 || std::abs(t / t_d - std::nearbyint(t / t_d)) > 1e-6)
      throw std::invalid_argument(
          "sustain-time grid values must be nonnegative multiples of the "
          "step period");
    if (t >= base.t_pp)
      throw std::invalid_argument(
          "sustain-time grid values must stay below the ping-pong window");
  }
  std::vector<double> gammas = gamma_grid_linear;
  std::vector<std::size_t> order(gammas.size());
  // The evaluator needs ascending thresholds; report in caller grid order.
  std::vector<double> sorted = gammas;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < gammas.size(); ++k)
    order[k] = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), gammas[k]) -
        sorted.begin());

  const StepTables tables = compute_step_tables(base, sorted);

  MiningResult res;
  res.grid.reserve(t_grid.size() * gammas.size());
  for (double t : t_grid) {
    const int j = trigger_steps(t, t_d);
    const int u = pp_window_steps(base.t_pp, t, t_d);
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      const std::size_t ks = order[k];
      std::vector<double> pf = tables.p_f;  // clamped per candidate
      ChainRun run = propagate_chains(base.geometry, j, u, tables.p_h[ks], pf,
                                      tables.p_pp[ks]);
      MiningPoint pt;
      pt.t_trigger = t;
      pt.gamma_ho = gammas[k];
      pt.p_hof = run.metrics.p_hof;
      pt.p_pp = run.metrics.p_pp;
      pt.feasible = std::max(pt.p_hof, pt.p_pp) < target;
      res.grid.push_back(pt);
      if (pt.feasible) {
        const double score = std::max(pt.p_hof, pt.p_pp);
        if (!res.best ||
            score < std::max(res.best->p_hof, res.best->p_pp))
          res.best = pt;
      }
    }
  }
  return res;
}

}  // namespace irsho
