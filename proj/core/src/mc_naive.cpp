#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "irsho/mc.hpp"
#include "irsho/mathx.hpp"
#include "irsho/rng.hpp"
#include "mc_internal.hpp"

// Reference walker, coded independently of the production one on purpose:
// cell membership by direct BS-distance comparison instead of the boundary
// offset, opening angles via acos of normalized dot products instead of
// bearing differences, full scans instead of windowed ones, and event
// extraction from precomputed per-step indicator vectors instead of in-step
// counters. Only the per-trial point sampling is shared, so the two walkers
// are comparable trial for trial.
namespace irsho {
namespace {

struct NaiveStep {
  bool conn_o = false, conn_t = false;
  bool ind_h = false, ind_f = false, ind_pp = false;
  double d_o = 0.0, phi_o = 0.0;  // measurement surface, orig comparison
  double d_t = 0.0, phi_t = 0.0;  // measurement surface, target comparison
};

double opening_angle(Vec2 user, Vec2 bs, Vec2 p, double x, double d) {
  const Vec2 a = bs - user;
  const Vec2 b = p - user;
  double c = dot(a, b) / (x * d);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

McMatchedStats simulate_matched_naive(const EngineConfig& cfg,
                                      long long n_trials, std::uint64_t seed,
                                      std::vector<TrialEvent>* event_sink,
                                      long long log_trials) {
  if (n_trials < 1) throw std::invalid_argument("need at least one trial");
  const ScenarioGeometry& geo = cfg.geometry;
  const ChannelParams& ch = cfg.channel;
  const int I = geo.n_steps;
  const int j = trigger_steps(cfg.t_trigger, geo.t_d);
  const int u = pp_window_steps(cfg.t_pp, cfg.t_trigger, geo.t_d);
  const Vec2 bs_o = geo.bs(Side::original);
  const Vec2 bs_t = geo.bs(Side::target);
  const double d2max = ch.d_serv * ch.d_serv;
  const double fail_thr = 1.0 / cfg.q_out;

  McMatchedStats stats;
  stats.n_trials = n_trials;
  stats.seed = seed;
  stats.pmf_trigger.assign(static_cast<std::size_t>(I) + 1, 0.0);
  stats.pmf_exec.assign(static_cast<std::size_t>(I) + 1, 0.0);
  stats.state_freq_orig.assign(static_cast<std::size_t>(I) + 1, {});
  stats.state_freq_target.assign(static_cast<std::size_t>(I) + 1, {});
  std::array<std::array<double, 4>, 4> trans{};

  double s_hof = 0.0, s2_hof = 0.0, s_pp = 0.0, s2_pp = 0.0;
  double s_trig = 0.0, s2_trig = 0.0, s_exec = 0.0, s2_exec = 0.0;
  double s_tx = 0.0, s2_tx = 0.0, s_ex = 0.0, s2_ex = 0.0;
  long long n_tx = 0, n_ex = 0;

  std::vector<NaiveStep> steps(static_cast<std::size_t>(I) + 1);
  for (long long t = 0; t < n_trials; ++t) {
    Philox g(seed, static_cast<std::uint64_t>(t));
    const mc_internal::SurfaceField field =
        mc_internal::matched_field(g, geo, cfg.lambda_r, ch.d_serv);
    const std::size_t np = field.px.size();

    // Phase 1: connection and indicator measurements for every step,
    // including the virtual step at -dx that seeds the initial state.
    bool prev_o = false, prev_t = false;
    std::vector<int> state_o(static_cast<std::size_t>(I) + 1);
    std::vector<int> state_t(static_cast<std::size_t>(I) + 1);
    for (int i = -1; i <= I; ++i) {
      const double xu = geo.dx * i;
      const Vec2 user{xu, 0.0};
      int io = -1, it = -1, itail = -1;
      double bo = 0.0, bt = 0.0, btail = 0.0;
      for (std::size_t k = 0; k < np; ++k) {
        const Vec2 p{field.px[k], field.py[k]};
        const Vec2 rel = p - user;
        const double d2 = dot(rel, rel);
        if (d2 <= d2max) {
          const Vec2 to_o = p - bs_o;
          const Vec2 to_t = p - bs_t;
          if (dot(to_o, to_o) < dot(to_t, to_t)) {
            if (io < 0 || d2 < bo) {
              io = static_cast<int>(k);
              bo = d2;
            }
          } else if (it < 0 || d2 < bt) {
            it = static_cast<int>(k);
            bt = d2;
          }
        } else if (itail < 0 || d2 < btail) {
          itail = static_cast<int>(k);
          btail = d2;
        }
      }
      const bool co = io >= 0, ct = it >= 0;
      if (i >= 0) {
        NaiveStep& st = steps[static_cast<std::size_t>(i)];
        st = NaiveStep{};
        st.conn_o = co;
        st.conn_t = ct;
        const double x_o = std::sqrt(dot(bs_o - user, bs_o - user));
        const double x_t = std::sqrt(dot(bs_t - user, bs_t - user));
        // Original comparison: neighbor (target BS) gain over serving gain.
        {
          const int k = co ? io : itail;
          if (k < 0) {
            st.ind_h = pathloss_direct(x_t, ch) / pathloss_direct(x_o, ch) >=
                       cfg.gamma_ho;
            const double eta =
                pathloss_direct(x_t, ch) / pathloss_direct(x_o, ch);
            st.ind_f = st.ind_h && eta > fail_thr;
          } else {
            const Vec2 p{field.px[static_cast<std::size_t>(k)],
                         field.py[static_cast<std::size_t>(k)]};
            const double d = std::sqrt(dot(p - user, p - user));
            const double po = opening_angle(user, bs_o, p, x_o, d);
            const double pt = opening_angle(user, bs_t, p, x_t, d);
            const double den = co ? gamma_bf(x_o, d, po, ch)
                                  : gamma_sc(x_o, d, po, ch);
            const double eta = gamma_sc(x_t, d, pt, ch) / den;
            st.ind_h = eta >= cfg.gamma_ho;
            st.ind_f = st.ind_h && eta > fail_thr;
            st.d_o = d;
            st.phi_o = std::atan2(p.y, p.x - xu);
          }
        }
        // Target comparison: original BS gain over target-side serving gain.
        {
          const int k = ct ? it : itail;
          if (k < 0) {
            st.ind_pp = pathloss_direct(x_o, ch) / pathloss_direct(x_t, ch) >
                        cfg.gamma_ho;
          } else {
            const Vec2 p{field.px[static_cast<std::size_t>(k)],
                         field.py[static_cast<std::size_t>(k)]};
            const double d = std::sqrt(dot(p - user, p - user));
            const double po = opening_angle(user, bs_o, p, x_o, d);
            const double pt = opening_angle(user, bs_t, p, x_t, d);
            const double den = ct ? gamma_bf(x_t, d, pt, ch)
                                  : gamma_sc(x_t, d, pt, ch);
            st.ind_pp = gamma_sc(x_o, d, po, ch) / den > cfg.gamma_ho;
            st.d_t = d;
            st.phi_t = std::atan2(p.y, p.x - xu);
          }
        }
        const int so = prev_o ? (co ? 3 : 2) : (co ? 1 : 0);
        const int stt = prev_t ? (ct ? 3 : 2) : (ct ? 1 : 0);
        state_o[static_cast<std::size_t>(i)] = so;
        state_t[static_cast<std::size_t>(i)] = stt;
        stats.state_freq_orig[static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(so)] += 1.0;
        stats.state_freq_target[static_cast<std::size_t>(i)]
                               [static_cast<std::size_t>(stt)] += 1.0;
        if (i >= 1)
          trans[static_cast<std::size_t>(
              state_o[static_cast<std::size_t>(i - 1)])]
               [static_cast<std::size_t>(so)] += 1.0;
      }
      prev_o = co;
      prev_t = ct;
    }

    // Phase 2: events from the indicator vectors.
    // Execution: first step where a consecutive trigger-indicator run
    // reaches length j. Triggers: run starts, up to and including that step.
    int exec_step = -1;
    {
      int run = 0;
      for (int i = 0; i <= I; ++i) {
        run = steps[static_cast<std::size_t>(i)].ind_h ? run + 1 : 0;
        if (run == j) {
          exec_step = i;
          break;
        }
      }
    }
    int n_trig = 0;
    double sum_tx = 0.0;
    const int trig_end = exec_step >= 0 ? exec_step : I;
    const bool want_events = event_sink != nullptr && t < log_trials;
    for (int i = 0; i <= trig_end; ++i) {
      const NaiveStep& st = steps[static_cast<std::size_t>(i)];
      if (st.ind_h && (i == 0 || !steps[static_cast<std::size_t>(i - 1)].ind_h)) {
        ++n_trig;
        sum_tx += geo.dx * i;
        stats.pmf_trigger[static_cast<std::size_t>(i)] += 1.0;
        if (want_events)
          event_sink->push_back(
              TrialEvent{t, i, 'T', geo.dx * i, st.d_o, st.phi_o});
      }
    }
    if (exec_step >= 0) {
      const NaiveStep& st = steps[static_cast<std::size_t>(exec_step)];
      stats.pmf_exec[static_cast<std::size_t>(exec_step)] += 1.0;
      if (want_events)
        event_sink->push_back(TrialEvent{t, exec_step, 'E',
                                         geo.dx * exec_step, st.d_o,
                                         st.phi_o});
    }
    // Failure: first outage indicator seen while a run is in flight (length
    // 1..j-1 through the previous step) before any run has completed.
    int fail_step = -1;
    {
      int run = 0;
      bool immune = false;
      for (int i = 0; i <= I && fail_step < 0; ++i) {
        const NaiveStep& st = steps[static_cast<std::size_t>(i)];
        if (!immune && run >= 1 && run <= j - 1 && st.ind_f) {
          fail_step = i;
          break;
        }
        run = st.ind_h ? run + 1 : 0;
        if (run >= j) immune = true;
      }
    }
    if (fail_step >= 0 && want_events) {
      const NaiveStep& st = steps[static_cast<std::size_t>(fail_step)];
      event_sink->push_back(TrialEvent{t, fail_step, 'F', geo.dx * fail_step,
                                       st.d_o, st.phi_o});
    }
    // Ping-pong: first strict back-trigger within the u-1 steps after the
    // execution.
    int pp_step = -1;
    if (exec_step >= 0) {
      const int last = std::min(exec_step + u - 1, I);
      for (int i = exec_step + 1; i <= last; ++i) {
        if (steps[static_cast<std::size_t>(i)].ind_pp) {
          pp_step = i;
          break;
        }
      }
    }
    if (pp_step >= 0 && want_events) {
      const NaiveStep& st = steps[static_cast<std::size_t>(pp_step)];
      event_sink->push_back(
          TrialEvent{t, pp_step, 'P', geo.dx * pp_step, st.d_t, st.phi_t});
    }

    const double hof = fail_step >= 0 && fail_step < I ? 1.0 : 0.0;
    const double ppv = pp_step >= 0 && pp_step < I ? 1.0 : 0.0;
    s_hof += hof;
    s2_hof += hof * hof;
    s_pp += ppv;
    s2_pp += ppv * ppv;
    s_trig += n_trig;
    s2_trig += static_cast<double>(n_trig) * n_trig;
    const double ex = exec_step >= 0 ? 1.0 : 0.0;
    s_exec += ex;
    s2_exec += ex * ex;
    if (n_trig > 0) {
      const double mx = sum_tx / n_trig;
      s_tx += mx;
      s2_tx += mx * mx;
      ++n_tx;
    }
    if (exec_step >= 0) {
      const double xe = geo.dx * exec_step;
      s_ex += xe;
      s2_ex += xe * xe;
      ++n_ex;
    }
  }

  const auto finish = [seed](double s, double s2, long long n) {
    McEstimate e;
    e.n = n;
    e.seed = seed;
    if (n > 0) e.mean = s / static_cast<double>(n);
    if (n > 1) {
      const double nn = static_cast<double>(n);
      const double var = std::max(0.0, (s2 - s * s / nn) / (nn - 1.0));
      e.ci95 = 1.96 * std::sqrt(var / nn);
    }
    return e;
  };
  stats.p_hof = finish(s_hof, s2_hof, n_trials);
  stats.p_pp = finish(s_pp, s2_pp, n_trials);
  stats.trigger_total = finish(s_trig, s2_trig, n_trials);
  stats.exec_total = finish(s_exec, s2_exec, n_trials);
  stats.ex_trigger = finish(s_tx, s2_tx, n_tx);
  stats.ex_exec = finish(s_ex, s2_ex, n_ex);

  const double inv_n = 1.0 / static_cast<double>(n_trials);
  for (int i = 0; i <= I; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    stats.pmf_trigger[ii] *= inv_n;
    stats.pmf_exec[ii] *= inv_n;
    for (int s = 0; s < 4; ++s) {
      stats.state_freq_orig[ii][static_cast<std::size_t>(s)] *= inv_n;
      stats.state_freq_target[ii][static_cast<std::size_t>(s)] *= inv_n;
    }
  }
  for (int r = 0; r < 4; ++r) {
    double row = 0.0;
    for (int c = 0; c < 4; ++c) row += trans[static_cast<std::size_t>(r)]
                                            [static_cast<std::size_t>(c)];
    stats.trans_rows[static_cast<std::size_t>(r)] =
        static_cast<long long>(row + 0.5);
    if (row > 0.0)
      for (int c = 0; c < 4; ++c)
        stats.trans_freq_orig[static_cast<std::size_t>(r)]
                             [static_cast<std::size_t>(c)] =
            trans[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] /
            row;
  }
  return stats;
}

}  // namespace irsho
