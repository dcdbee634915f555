#include "irsho/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irsho/mathx.hpp"
#include "irsho/rng.hpp"
#include "mc_internal.hpp"

namespace irsho {
namespace {

using mc_internal::SurfaceField;
using mc_internal::append_sorted;
using mc_internal::matched_field;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- estimators ------------------------------------------------------------

struct Accum {
  double sum = 0.0, sumsq = 0.0;
  long long n = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  McEstimate estimate(std::uint64_t seed) const {
    McEstimate e;
    e.n = n;
    e.seed = seed;
    if (n > 0) e.mean = sum / static_cast<double>(n);
    if (n > 1) {
      const double nn = static_cast<double>(n);
      const double var = std::max(0.0, (sumsq - sum * sum / nn) / (nn - 1.0));
      e.ci95 = 1.96 * std::sqrt(var / nn);
    }
    return e;
  }
};

// ---- nearest-surface scan ---------------------------------------------------

struct NearestPick {
  int serv_o = -1, serv_t = -1, tail = -1;
  double d2_o = kInf, d2_t = kInf, d2_tail = kInf;
};

inline void consider(const SurfaceField& f, int k, double xu, double d2max,
                     NearestPick& out) {
  const double gx = f.px[static_cast<std::size_t>(k)] - xu;
  const double gy = f.py[static_cast<std::size_t>(k)];
  const double d2 = gx * gx + gy * gy;
  if (d2 <= d2max) {
    const signed char c = f.cell[static_cast<std::size_t>(k)];
    if (c == 1) {
      if (d2 < out.d2_o) {
        out.d2_o = d2;
        out.serv_o = k;
      }
    } else if (c == 2) {
      if (d2 < out.d2_t) {
        out.d2_t = d2;
        out.serv_t = k;
      }
    }
  } else if (d2 < out.d2_tail) {
    out.d2_tail = d2;
    out.tail = k;
  }
}

// Nearest in-cell surface within the serving radius per side, plus the
// nearest surface beyond it. Expands outward from the user's abscissa; a
// point whose x-gap exceeds both the serving radius and the best tail
// distance so far cannot improve any of the three picks.
NearestPick scan_nearest(const SurfaceField& f, double xu, double d2max) {
  NearestPick out;
  const int n = f.size_i();
  int r = static_cast<int>(
      std::lower_bound(f.px.begin(), f.px.end(), xu) - f.px.begin());
  int l = r - 1;
  while (l >= 0 || r < n) {
    const double stop2 = std::max(d2max, out.d2_tail);
    bool advanced = false;
    if (l >= 0) {
      const double gap = xu - f.px[static_cast<std::size_t>(l)];
      if (gap * gap <= stop2) {
        consider(f, l, xu, d2max, out);
        --l;
        advanced = true;
      } else {
        l = -1;
      }
    }
    if (r < n) {
      const double gap = f.px[static_cast<std::size_t>(r)] - xu;
      if (gap * gap <= stop2) {
        consider(f, r, xu, d2max, out);
        ++r;
        advanced = true;
      } else {
        r = n;
      }
    }
    if (!advanced) break;
  }
  return out;
}

// ---- per-step measurement ---------------------------------------------------

inline int classify(bool was, bool now) {
  if (was) return now ? state_held : state_dropped;
  return now ? state_acquired : state_none;
}

struct SideMeasure {
  double eta = 0.0;  // neighbor gain over serving gain
  double d = 0.0;    // measurement surface distance (0: pure path loss)
  double phi = 0.0;  // measurement surface trajectory angle
};

// Measured neighbor/serving gain ratio on side `den_side`. A connected side
// measures its serving surface with beamforming; an unconnected side measures
// the shared scatterer (nearest surface beyond the serving radius); an empty
// field degenerates to the pure path-loss ratio.
SideMeasure measure_side(const StepFrame& fr, Side den_side, int serv_idx,
                         double serv_d2, int tail_idx, double tail_d2,
                         const SurfaceField& f, double xu,
                         const ChannelParams& ch) {
  const bool den_orig = den_side == Side::original;
  const double x_den = den_orig ? fr.x_o : fr.x_t;
  const double x_num = den_orig ? fr.x_t : fr.x_o;
  SideMeasure m;
  int k;
  double d2;
  bool beamform;
  if (serv_idx >= 0) {
    k = serv_idx;
    d2 = serv_d2;
    beamform = true;
  } else if (tail_idx >= 0) {
    k = tail_idx;
    d2 = tail_d2;
    beamform = false;
  } else {
    m.eta = pathloss_sq(x_num * x_num, ch) / pathloss_sq(x_den * x_den, ch);
    return m;
  }
  const double d = std::sqrt(std::max(d2, 1e-24));
  const double phi_prime = std::atan2(f.py[static_cast<std::size_t>(k)],
                                      f.px[static_cast<std::size_t>(k)] - xu);
  const double phi_den = den_orig ? fr.phi_o(phi_prime) : fr.phi_t(phi_prime);
  const double phi_num = den_orig ? fr.phi_t(phi_prime) : fr.phi_o(phi_prime);
  const double den = beamform ? gamma_bf(x_den, d, phi_den, ch)
                              : gamma_sc(x_den, d, phi_den, ch);
  const double num = gamma_sc(x_num, d, phi_num, ch);
  m.eta = num / den;
  m.d = d;
  m.phi = phi_prime;
  return m;
}

// ---- one walk ----------------------------------------------------------------

struct StepTally {
  std::vector<double> trig_count, exec_count;
  std::vector<std::array<double, 4>> freq_o, freq_t;
  std::array<std::array<double, 4>, 4> trans{};
};

struct TrialOutcome {
  int n_trig = 0;
  int exec_step = -1;
  int fail_step = -1;
  int pp_step = -1;
  double sum_trig_x = 0.0;
};

// Walks one trial through the per-step machines:
//   trigger counter q_h: advances on ind_h, resets otherwise; executes on
//     reaching j sustained steps, then stops (one execution per walk);
//   failure counter q_f: enters flight with the trigger, fails on the first
//     in-flight outage indicator, succeeds (and becomes immune) on completing
//     the flight; runs independently of q_h after a failure;
//   window counter q_pp: opened by the execution, falls on the first strict
//     back-trigger within the u-1 steps after it.
// Failures and falls at the final step are recorded as events but excluded
// from the trial's failure/fall outcome, matching the absorbing-tally
// convention of the analytic chains.
TrialOutcome walk_trial(const EngineConfig& cfg,
                        const std::vector<StepFrame>& frames,
                        const SurfaceField& field, int j, int u,
                        StepTally* tally, TrialLog* log,
                        std::vector<TrialEvent>* events, long long trial_id) {
  const ScenarioGeometry& geo = cfg.geometry;
  const double d2max = cfg.channel.d_serv * cfg.channel.d_serv;
  const double fail_thr = 1.0 / cfg.q_out;
  const int I = geo.n_steps;

  const NearestPick pre = scan_nearest(field, -geo.dx, d2max);
  bool prev_co = pre.serv_o >= 0;
  bool prev_ct = pre.serv_t >= 0;
  int prev_so = -1;

  int qh = 0, qf = 0, qpp = 0;
  bool h_done = false, f_done = false, pp_open = false, pp_done = false;
  TrialOutcome out;

  auto emit = [&](int step, char kind, double x, const SideMeasure& sm) {
    if (events != nullptr)
      events->push_back(TrialEvent{trial_id, step, kind, x, sm.d, sm.phi});
    if (log != nullptr)
      log->events.push_back(TrialEvent{trial_id, step, kind, x, sm.d, sm.phi});
  };

  for (int i = 0; i <= I; ++i) {
    const StepFrame& fr = frames[static_cast<std::size_t>(i)];
    const double xu = fr.x;
    const NearestPick pick = scan_nearest(field, xu, d2max);
    const bool co = pick.serv_o >= 0;
    const bool ct = pick.serv_t >= 0;
    const int s_o = classify(prev_co, co);
    const int s_t = classify(prev_ct, ct);

    const SideMeasure mo =
        measure_side(fr, Side::original, pick.serv_o, pick.d2_o, pick.tail,
                     pick.d2_tail, field, xu, cfg.channel);
    const SideMeasure mt =
        measure_side(fr, Side::target, pick.serv_t, pick.d2_t, pick.tail,
                     pick.d2_tail, field, xu, cfg.channel);
    const bool ind_h = mo.eta >= cfg.gamma_ho;
    // Outage implies a trigger-worthy step: both are upper sets of the same
    // measured ratio, so the joint event is the nested one.
    const bool ind_f = ind_h && mo.eta > fail_thr;
    const bool ind_pp = mt.eta > cfg.gamma_ho;

    bool exec_now = false;
    if (!h_done) {
      if (qh == 0) {
        if (ind_h) {
          qh = 1;
          ++out.n_trig;
          out.sum_trig_x += xu;
          if (tally != nullptr)
            tally->trig_count[static_cast<std::size_t>(i)] += 1.0;
          emit(i, 'T', xu, mo);
        }
      } else {
        qh = ind_h ? qh + 1 : 0;
      }
      if (qh == j) {
        exec_now = true;
        h_done = true;
        out.exec_step = i;
        if (tally != nullptr)
          tally->exec_count[static_cast<std::size_t>(i)] += 1.0;
        emit(i, 'E', xu, mo);
      }
    }

    if (!f_done) {
      if (qf >= 1) {
        if (ind_f) {
          f_done = true;
          out.fail_step = i;
          emit(i, 'F', xu, mo);
        } else {
          qf = ind_h ? qf + 1 : 0;
          if (qf == j) f_done = true;  // flight completed: immune
        }
      } else {
        qf = ind_h ? 1 : 0;
        if (qf == j) f_done = true;  // no sustain: straight to immune
      }
    }

    if (pp_open && !pp_done) {
      if (ind_pp) {
        pp_done = true;
        out.pp_step = i;
        emit(i, 'P', xu, mt);
      } else if (++qpp == u) {
        pp_done = true;  // window survived
      }
    }
    if (exec_now) {
      pp_open = true;
      qpp = 1;
      if (u == 1) pp_done = true;  // window has no fall opportunity
    }

    if (tally != nullptr) {
      tally->freq_o[static_cast<std::size_t>(i)][static_cast<std::size_t>(
          s_o)] += 1.0;
      tally->freq_t[static_cast<std::size_t>(i)][static_cast<std::size_t>(
          s_t)] += 1.0;
      if (i >= 1)
        tally->trans[static_cast<std::size_t>(prev_so)]
                    [static_cast<std::size_t>(s_o)] += 1.0;
    }
    if (log != nullptr) {
      log->state_orig.push_back(s_o);
      log->state_target.push_back(s_t);
      log->d_orig.push_back(mo.d);
      log->phi_orig.push_back(mo.phi);
      log->eta_ho.push_back(mo.eta);
      log->eta_pp.push_back(mt.eta);
    }

    prev_co = co;
    prev_ct = ct;
    prev_so = s_o;
  }
  return out;
}

// Outcome-level event-logic checks, cheap enough to run on every trial.
int outcome_violations(const TrialOutcome& o, int u) {
  int v = 0;
  if (o.exec_step >= 0 && o.n_trig == 0) ++v;
  if (o.fail_step >= 0 && o.exec_step >= 0 && o.fail_step > o.exec_step) ++v;
  if (o.pp_step >= 0) {
    if (o.exec_step < 0)
      ++v;
    else if (o.pp_step <= o.exec_step || o.pp_step > o.exec_step + u - 1)
      ++v;
  }
  return v;
}

void check_mc_args(const EngineConfig& cfg, long long n_trials) {
  if (cfg.geometry.n_steps < 1)
    throw std::invalid_argument("geometry has no steps");
  if (cfg.channel.d_serv <= 0.0)
    throw std::invalid_argument("serving radius must be positive");
  if (cfg.lambda_r < 0.0)
    throw std::invalid_argument("surface density must be >= 0");
  if (cfg.gamma_ho <= 0.0 || cfg.q_out <= 0.0)
    throw std::invalid_argument("thresholds must be positive ratios");
  if (n_trials < 1) throw std::invalid_argument("need at least one trial");
}

}  // namespace

int trial_log_violations(const TrialLog& log, int j, int u, int n_steps) {
  int v = 0;
  const std::size_t len = static_cast<std::size_t>(n_steps) + 1;
  if (log.state_orig.size() != len || log.state_target.size() != len ||
      log.eta_ho.size() != len || log.eta_pp.size() != len)
    ++v;
  for (int s : log.state_orig)
    if (s < 0 || s > 3) ++v;
  for (int s : log.state_target)
    if (s < 0 || s > 3) ++v;

  int execs = 0, fails = 0, falls = 0;
  int exec_step = -1, prev_step = -1;
  for (const TrialEvent& e : log.events) {
    if (e.step < prev_step) ++v;  // events must be time-ordered
    prev_step = e.step;
    switch (e.kind) {
      case 'T':
        if (exec_step >= 0) ++v;  // no triggers after execution
        break;
      case 'E':
        ++execs;
        exec_step = e.step;
        break;
      case 'F':
        ++fails;
        if (exec_step >= 0 && e.step > exec_step) ++v;
        break;
      case 'P':
        ++falls;
        if (exec_step < 0 || e.step <= exec_step ||
            e.step > exec_step + u - 1)
          ++v;
        break;
      default:
        ++v;
    }
  }
  if (execs > 1 || fails > 1 || falls > 1) ++v;
  if (j < 1 || u < 1) ++v;
  return v;
}

McMatchedStats simulate_matched(const EngineConfig& cfg, long long n_trials,
                                std::uint64_t seed,
                                std::vector<TrialEvent>* event_sink,
                                long long log_trials) {
  check_mc_args(cfg, n_trials);
  const ScenarioGeometry& geo = cfg.geometry;
  const int I = geo.n_steps;
  const int j = trigger_steps(cfg.t_trigger, geo.t_d);
  const int u = pp_window_steps(cfg.t_pp, cfg.t_trigger, geo.t_d);

  std::vector<StepFrame> frames;
  frames.reserve(static_cast<std::size_t>(I) + 1);
  for (int i = 0; i <= I; ++i) frames.push_back(geo.frame(i));

  StepTally tally;
  tally.trig_count.assign(static_cast<std::size_t>(I) + 1, 0.0);
  tally.exec_count.assign(static_cast<std::size_t>(I) + 1, 0.0);
  tally.freq_o.assign(static_cast<std::size_t>(I) + 1, {});
  tally.freq_t.assign(static_cast<std::size_t>(I) + 1, {});

  McMatchedStats stats;
  stats.n_trials = n_trials;
  stats.seed = seed;

  Accum a_hof, a_pp, a_trig, a_exec, a_trig_x, a_exec_x;
  for (long long t = 0; t < n_trials; ++t) {
    Philox g(seed, static_cast<std::uint64_t>(t));
    const SurfaceField field =
        matched_field(g, geo, cfg.lambda_r, cfg.channel.d_serv);
    TrialLog* log = t == 0 ? &stats.first_trial : nullptr;
    std::vector<TrialEvent>* sink =
        (event_sink != nullptr && t < log_trials) ? event_sink : nullptr;
    const TrialOutcome o =
        walk_trial(cfg, frames, field, j, u, &tally, log, sink, t);

    a_hof.add(o.fail_step >= 0 && o.fail_step < I ? 1.0 : 0.0);
    a_pp.add(o.pp_step >= 0 && o.pp_step < I ? 1.0 : 0.0);
    a_trig.add(static_cast<double>(o.n_trig));
    a_exec.add(o.exec_step >= 0 ? 1.0 : 0.0);
    if (o.n_trig > 0)
      a_trig_x.add(o.sum_trig_x / static_cast<double>(o.n_trig));
    if (o.exec_step >= 0) a_exec_x.add(geo.x(o.exec_step));
    stats.log_violations += outcome_violations(o, u);
  }

  stats.p_hof = a_hof.estimate(seed);
  stats.p_pp = a_pp.estimate(seed);
  stats.trigger_total = a_trig.estimate(seed);
  stats.exec_total = a_exec.estimate(seed);
  stats.ex_trigger = a_trig_x.estimate(seed);
  stats.ex_exec = a_exec_x.estimate(seed);

  const double inv_n = 1.0 / static_cast<double>(n_trials);
  stats.pmf_trigger.resize(static_cast<std::size_t>(I) + 1);
  stats.pmf_exec.resize(static_cast<std::size_t>(I) + 1);
  stats.state_freq_orig.assign(static_cast<std::size_t>(I) + 1, {});
  stats.state_freq_target.assign(static_cast<std::size_t>(I) + 1, {});
  for (int i = 0; i <= I; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    stats.pmf_trigger[ii] = tally.trig_count[ii] * inv_n;
    stats.pmf_exec[ii] = tally.exec_count[ii] * inv_n;
    for (int s = 0; s < 4; ++s) {
      stats.state_freq_orig[ii][static_cast<std::size_t>(s)] =
          tally.freq_o[ii][static_cast<std::size_t>(s)] * inv_n;
      stats.state_freq_target[ii][static_cast<std::size_t>(s)] =
          tally.freq_t[ii][static_cast<std::size_t>(s)] * inv_n;
    }
  }
  for (int r = 0; r < 4; ++r) {
    const std::size_t rr = static_cast<std::size_t>(r);
    double row = 0.0;
    for (int c = 0; c < 4; ++c) row += tally.trans[rr][static_cast<std::size_t>(c)];
    stats.trans_rows[rr] = static_cast<long long>(row + 0.5);
    if (row > 0.0)
      for (int c = 0; c < 4; ++c)
        stats.trans_freq_orig[rr][static_cast<std::size_t>(c)] =
            tally.trans[rr][static_cast<std::size_t>(c)] / row;
  }
  stats.log_violations +=
      trial_log_violations(stats.first_trial, j, u, I);
  return stats;
}

// ---- full topology -----------------------------------------------------------

namespace {

// Ownership changes of the nearest-BS partition along the horizontal line
// y = yline. Squared distances share the quadratic term, so pairwise
// comparisons are linear in the abscissa and each pair crosses at most once.
struct LineCrossing {
  double s = kInf;   // abscissa of the first ownership change after s_from
  int next_owner = -1;
};

LineCrossing next_ownership_change(const std::vector<Vec2>& bss, double yline,
                                   int owner, double s_from) {
  const double bx = bss[static_cast<std::size_t>(owner)].x;
  const double ry = bss[static_cast<std::size_t>(owner)].y - yline;
  const double c_own = bx * bx + ry * ry;
  LineCrossing out;
  for (int k = 0; k < static_cast<int>(bss.size()); ++k) {
    if (k == owner) continue;
    const double kx = bss[static_cast<std::size_t>(k)].x;
    const double ky = bss[static_cast<std::size_t>(k)].y - yline;
    if (kx <= bx) continue;  // can only beat the owner at smaller abscissae
    const double s = (kx * kx + ky * ky - c_own) / (2.0 * (kx - bx));
    if (s > s_from && s < out.s) {
      out.s = s;
      out.next_owner = k;
    }
  }
  return out;
}

int nearest_bs(const std::vector<Vec2>& bss, Vec2 p) {
  int best = -1;
  double best2 = kInf;
  for (int k = 0; k < static_cast<int>(bss.size()); ++k) {
    const Vec2 d = bss[static_cast<std::size_t>(k)] - p;
    const double d2 = dot(d, d);
    if (d2 < best2) {
      best2 = d2;
      best = k;
    }
  }
  return best;
}

}  // namespace

McTopologyStats simulate_full_topology(const EngineConfig& cfg,
                                       double region_side, long long n_trials,
                                       std::uint64_t seed) {
  check_mc_args(cfg, n_trials);
  if (!(region_side > 0.0))
    throw std::invalid_argument("region side must be positive");
  if (!(cfg.geometry.lambda_b > 0.0))
    throw std::invalid_argument("BS density must be positive");
  const double S = region_side;
  const double yline = 0.5 * S;
  const int j = trigger_steps(cfg.t_trigger, cfg.geometry.t_d);
  const int u = pp_window_steps(cfg.t_pp, cfg.t_trigger, cfg.geometry.t_d);
  const double dx = cfg.geometry.v * cfg.geometry.t_d;

  McTopologyStats stats;
  stats.n_trials = n_trials;
  stats.seed = seed;
  Accum a_hof, a_pp, a_span;

  for (long long t = 0; t < n_trials; ++t) {
    Philox g(seed, static_cast<std::uint64_t>(t));
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100000)
        throw std::runtime_error(
            "no valid crossing found in 1e5 topology draws");
      std::vector<Vec2> bss =
          ppp_rect(g, cfg.geometry.lambda_b, 0.0, S, 0.0, S);
      if (bss.size() < 2) {
        ++stats.resampled;
        continue;
      }
      // The user enters at the region's left edge mid-height and walks +x.
      const int orig = nearest_bs(bss, Vec2{0.0, yline});
      const LineCrossing c1 = next_ownership_change(bss, yline, orig, 0.0);
      if (c1.next_owner < 0 || c1.s >= S) {
        ++stats.resampled;
        continue;
      }
      const int target = c1.next_owner;
      const double foot_o = bss[static_cast<std::size_t>(orig)].x;
      const double foot_t = bss[static_cast<std::size_t>(target)].x;
      // One clean crossing: the walk runs between the perpendicular feet,
      // which must bracket the boundary, lie inside the region, and the
      // target must keep ownership until its foot.
      if (!(foot_o >= 0.0 && foot_o < c1.s && foot_t > c1.s && foot_t <= S)) {
        ++stats.resampled;
        continue;
      }
      const LineCrossing c2 = next_ownership_change(bss, yline, target, c1.s);
      if (c2.s < foot_t) {
        ++stats.resampled;
        continue;
      }
      const double span = foot_t - foot_o;
      if (span < 2.0 * dx) {
        ++stats.resampled;
        continue;
      }

      EngineConfig local = cfg;
      local.geometry = build_geometry(
          bss[static_cast<std::size_t>(orig)].y - yline,
          bss[static_cast<std::size_t>(target)].y - yline, span,
          cfg.geometry.v, cfg.geometry.t_d);
      const int I = local.geometry.n_steps;
      std::vector<StepFrame> frames;
      frames.reserve(static_cast<std::size_t>(I) + 1);
      for (int i = 0; i <= I; ++i) frames.push_back(local.geometry.frame(i));

      // Surfaces over the region with true nearest-BS ownership, in local
      // walk coordinates (origin at the original BS's foot).
      SurfaceField field;
      if (cfg.lambda_r > 0.0) {
        std::vector<Vec2> pts = ppp_rect(g, cfg.lambda_r, 0.0, S, 0.0, S);
        for (Vec2& p : pts) p = {p.x - foot_o, p.y - yline};
        append_sorted(field, pts);
        field.cell.reserve(field.px.size());
        for (std::size_t k = 0; k < field.px.size(); ++k) {
          const Vec2 world{field.px[k] + foot_o, field.py[k] + yline};
          const int own = nearest_bs(bss, world);
          field.cell.push_back(own == orig ? 1 : (own == target ? 2 : 0));
        }
      }

      const TrialOutcome o =
          walk_trial(local, frames, field, j, u, nullptr, nullptr, nullptr, t);
      a_hof.add(o.fail_step >= 0 && o.fail_step < I ? 1.0 : 0.0);
      a_pp.add(o.pp_step >= 0 && o.pp_step < I ? 1.0 : 0.0);
      a_span.add(span);
      break;
    }
  }
  stats.p_hof = a_hof.estimate(seed);
  stats.p_pp = a_pp.estimate(seed);
  stats.span = a_span.estimate(seed);
  return stats;
}

// ---- transition-law sampling ---------------------------------------------------

TransitionEstimate estimate_transition_probs(const ScenarioGeometry& g,
                                             Side side, const ChainConfig& cc,
                                             int i, long long n_samples,
                                             std::uint64_t seed) {
  if (i < 1 || i > g.n_steps)
    throw std::invalid_argument("step index out of range");
  if (n_samples < 1000)
    throw std::invalid_argument(
        "transition estimation needs at least 1000 samples");
  if (cc.d_serv <= 0.0)
    throw std::invalid_argument("serving radius must be positive");
  const double xa = g.x(i) - 2.0 * g.dx;
  const double xb = g.x(i) - g.dx;
  const double xc = g.x(i);
  const double D = cc.d_serv;
  const double d2max = D * D;

  std::array<std::array<long long, 4>, 4> count{};
  for (long long t = 0; t < n_samples; ++t) {
    Philox gen(seed, static_cast<std::uint64_t>(t));
    bool ca = false, cb = false, ccn = false;
    if (cc.lambda_r > 0.0) {
      const std::vector<Vec2> pts = ppp_rect(gen, cc.lambda_r, xa - D - 1.0,
                                             xc + D + 1.0, -D - 1.0, D + 1.0);
      for (const Vec2& p : pts) {
        if (!(g.side_offset(side, p) > 0.0)) continue;
        const double dy2 = p.y * p.y;
        if (!ca && sq(p.x - xa) + dy2 <= d2max) ca = true;
        if (!cb && sq(p.x - xb) + dy2 <= d2max) cb = true;
        if (!ccn && sq(p.x - xc) + dy2 <= d2max) ccn = true;
        if (ca && cb && ccn) break;
      }
    }
    const int s_prev = classify(ca, cb);
    const int s_now = classify(cb, ccn);
    ++count[static_cast<std::size_t>(s_prev)][static_cast<std::size_t>(s_now)];
  }

  TransitionEstimate est;
  est.n = n_samples;
  for (int r = 0; r < 4; ++r) {
    const std::size_t rr = static_cast<std::size_t>(r);
    long long row = 0;
    for (int c = 0; c < 4; ++c) row += count[rr][static_cast<std::size_t>(c)];
    est.row_count[rr] = row;
    if (row > 0)
      for (int c = 0; c < 4; ++c)
        est.freq[rr][static_cast<std::size_t>(c)] =
            static_cast<double>(count[rr][static_cast<std::size_t>(c)]) /
            static_cast<double>(row);
  }
  return est;
}

}  // namespace irsho
