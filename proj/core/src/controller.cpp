#include "mcfs/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mcfs/exact_models.hpp"

namespace mcfs {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Continue: return "continue";
    case RunStatus::TerminatedByClassification:
      return "terminated-by-classification";
    case RunStatus::ConvergedToMinimal: return "converged-to-minimal";
    case RunStatus::UnresolvedSingularity: return "unresolved-singularity";
    case RunStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

RunStatus termination_check(int live_components, double low_curvature_duration,
                            double K, double max_A2_over_K, double tol) {
  if (live_components == 0) return RunStatus::TerminatedByClassification;
  if (low_curvature_duration >= 5.0 / K && max_A2_over_K <= tol)
    return RunStatus::ConvergedToMinimal;
  return RunStatus::Continue;
}

namespace {

struct Component {
  FlowState st;
  int id = 0;
  double last_max_H2 = 0;
  double last_max_A2 = 0;
};

ProfileCurve build_initial_profile(const RunConfig& cfg) {
  const auto& gen = cfg.generator;
  const double K = cfg.params.K;
  if (gen.kind == "geodesic_sphere")
    return make_geodesic_sphere_profile(gen.d, cfg.grid_N, K);
  if (gen.kind == "tube") return make_tube_profile(gen.u, cfg.grid_N, K);
  if (gen.kind == "dumbbell")
    return make_dumbbell_profile(gen.neck_theta, gen.bulb_theta, cfg.grid_N, K,
                                 gen.neck_len, gen.trans_len);
  if (gen.kind == "equator")
    return make_equator_profile(cfg.grid_N, K, gen.amp, gen.mode);
  if (gen.kind == "table") {
    std::ifstream in(gen.table_path);
    if (!in) throw std::invalid_argument("cannot open profile table: " +
                                         gen.table_path);
    std::stringstream ss;
    ss << in.rdbuf();
    ProfileCurve p = profile_from_table(ss.str(), K, gen.table_closed);
    return regrid(p, p.total_length() / cfg.grid_N);
  }
  throw std::invalid_argument("unknown generator kind: " + gen.kind);
}

void check_surgery_class(const ProfileCurve& p, const FlowParams& prm) {
  std::vector<std::string> bad = p.check_invariants();
  ProfileGeometry g = profile_curvatures(p, prm.n);
  double worst_margin = -std::numeric_limits<double>::infinity();
  double maxH2 = 0;
  for (const auto& nc : g.node) {
    worst_margin = std::max(
        worst_margin,
        quadratic_margin(nc.A2, nc.H * nc.H, prm.n, prm.K, prm.alpha));
    maxH2 = std::max(maxH2, nc.H * nc.H);
  }
  if (worst_margin > 0)
    bad.push_back("initial data violates the pinching condition (margin " +
                  std::to_string(worst_margin / prm.K) + " K)");
  const double a = area(p, prm.n);
  const double a_max = prm.V * std::pow(prm.K, -0.5 * prm.n);
  if (a > a_max)
    bad.push_back("initial area exceeds V K^{-n/2}");
  if (maxH2 > prm.Theta * prm.K)
    bad.push_back("initial max H^2 exceeds Theta K");
  if (!bad.empty()) {
    std::string msg = "initial data outside the surgery class:";
    for (auto& m : bad) msg += "\n  - " + m;
    throw std::invalid_argument(msg);
  }
}

RunReport run_product_sphere(const RunConfig& cfg, const DerivedConstants& dc) {
  const FlowParams& prm = cfg.params;
  const int n = prm.n;
  const double K = prm.K;

  ProductSphereState start;
  start.n = n;
  start.k = cfg.ps_k;
  start.u = cfg.ps_u0;
  OdeStepControl ctrl;
  ctrl.sample_dt = cfg.sample_dt;
  ProductSphereTrajectory traj =
      flow_product_sphere(start, cfg.t_max, K, ctrl);

  RunReport rep;
  rep.config = cfg;
  rep.ledger.initial_components = 1;
  EstimateMonitor monitor(prm, dc);
  const double wk = unit_sphere_area(cfg.ps_k);
  const double wnk = unit_sphere_area(n - cfg.ps_k);

  for (const auto& st : traj.states) {
    PrincipalCurvatures pc = product_sphere_curvatures(st, K);
    const double H = mean_curvature(pc);
    const double A2 = second_form_norm_sq(pc);
    MonitorSample ms;
    ms.tK = st.t * K;
    ms.maxH2_over_K = H * H / K;
    ms.max_A2_over_K = A2 / K;
    ms.min_margin_strict = strict_margin(A2, H * H, n, K) / K;
    ms.max_alpha_margin = quadratic_margin(A2, H * H, n, K, prm.alpha) / K;
    ms.max_cyl_deficit_ratio =
        cylindrical_deficit(A2, H * H, n) / (H * H + K);
    ms.cyl_sup_internal = (cylindrical_deficit(A2, H * H, n) -
                           prm.eta * H * H) *
                          std::exp(2 * dc.delta * K * st.t) / K;
    ms.fplus_max = f_plus(A2, H * H, n, K, st.t, prm.eta, prm.sigma, dc) /
                   std::pow(K, prm.sigma);
    const double rho = 1.0 / std::sqrt(K);
    const double r = rho * std::cos(st.u), s = rho * std::sin(st.u);
    ms.area_times_Kpow = wk * std::pow(r, cfg.ps_k) * wnk *
                         std::pow(s, n - cfg.ps_k) * std::pow(K, 0.5 * n);
    ms.components = 1;
    monitor.commit(ms);
  }

  rep.series = monitor.series();
  rep.alpha_margin_series = monitor.alpha_margin_series();
  rep.estimates = monitor.report();
  rep.total_steps = static_cast<long>(traj.states.size());
  rep.final_t = traj.states.back().t;
  rep.area0 = rep.series.front().area_times_Kpow * std::pow(K, -0.5 * n);
  if (traj.collapsed) {
    rep.status = RunStatus::TerminatedByClassification;
    rep.ledger.live_components = 0;
    if (cfg.ps_k == 1 && traj.collapsed_factor < 0) {
      rep.ledger.discards_loop = 1;
      rep.classification = "S^1 x S^" + std::to_string(n - 1);
      rep.status_note = "shrinking hyperparallel: S^" +
                        std::to_string(n - 1) + " factor collapsed";
    } else {
      rep.ledger.discards_sphere = 1;
      rep.classification = "S^" + std::to_string(cfg.ps_k) + " x S^" +
                           std::to_string(n - cfg.ps_k);
      rep.status_note = traj.collapsed_factor < 0
                            ? "second factor collapsed"
                            : "first factor collapsed";
    }
  } else {
    rep.status = RunStatus::BudgetExhausted;
    rep.ledger.live_components = 1;
    rep.classification = "S^" + std::to_string(cfg.ps_k) + " x S^" +
                         std::to_string(n - cfg.ps_k);
    PrincipalCurvatures pc = product_sphere_curvatures(traj.states.back(), K);
    rep.final_max_A2_over_K = second_form_norm_sq(pc) / K;
  }
  return rep;
}

}  // namespace

RunReport run(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.apply_defaults();
  cfg.params.validate();
  const DerivedConstants dc =
      derive_constants(cfg.params.n, cfg.params.alpha, cfg.params.eta);

  if (cfg.scenario == "product_sphere") return run_product_sphere(cfg, dc);

  const FlowParams& prm = cfg.params;
  const int n = prm.n;
  const double K = prm.K;
  const double rho = 1.0 / std::sqrt(K);

  ProfileCurve p0 = build_initial_profile(cfg);
  check_surgery_class(p0, prm);

  RunReport rep;
  rep.config = cfg;
  rep.area0 = area(p0, n);
  rep.min_area_decrement = std::numeric_limits<double>::infinity();

  SurgeryParams sp = cfg.surgery;
  sp.apply_defaults(n, K);
  {
    auto bad = sp.check(n, K);
    if (!bad.empty()) {
      std::string msg = "invalid surgery parameters:";
      for (auto& m : bad) msg += "\n  - " + m;
      throw std::invalid_argument(msg);
    }
  }

  EstimateMonitor monitor(prm, dc);
  std::vector<Component> comps;
  {
    Component c;
    c.st.profile = p0;
    comps.push_back(std::move(c));
  }
  int next_id = 1;
  TopologyLedger& ledger = rep.ledger;
  ledger.initial_components = 1;
  ledger.live_components = 1;
  std::vector<SurgeryFootprint> footprints;

  const double h0 = p0.total_length() / p0.segment_count();
  double next_sample = 0;
  long sample_index = 0;
  double low_curv_duration = 0;
  double trigger_rearm = 0;
  double t = 0;
  const auto wall0 = std::chrono::steady_clock::now();

  auto sample_all = [&]() {
    MonitorSample merged;
    merged.tK = t * K;
    bool first = true;
    const bool want_inscribed =
        cfg.inscribed_stride > 0 && sample_index % cfg.inscribed_stride == 0;
    for (auto& c : comps) {
      ProfileGeometry g = profile_curvatures(c.st.profile, n);
      finite_diff_derivatives(c.st.profile, n, g);
      InscribedResult insc;
      bool have_insc = false;
      if (want_inscribed && !self_intersects(c.st.profile)) {
        insc = inscribed_exscribed(c.st.profile, n, g);
        have_insc = true;
      }
      MonitorSample ms =
          monitor.observe_component(c.st, g, have_insc ? &insc : nullptr);
      ms.tK = c.st.t * K;
      merged = first ? ms : EstimateMonitor::merge(merged, ms);
      first = false;
      c.st.push_frame(n);
      c.st.trim_history(cfg.step.max_history);
      c.last_max_H2 = ms.maxH2_over_K * K;
      c.last_max_A2 = ms.max_A2_over_K * K;
    }
    merged.components = static_cast<int>(comps.size());
    if (comps.empty()) {
      merged.min_margin_strict = 0;
      merged.max_cyl_deficit_ratio = 0;
      merged.max_kbar_over_F = 0;
      merged.max_alpha_margin = -1e300;  // no nodes, nothing to violate
    }
    monitor.commit(merged);
    ++sample_index;
  };

  auto refresh_component_stats = [&]() {
    for (auto& c : comps) {
      ProfileGeometry g = profile_curvatures(c.st.profile, n);
      c.last_max_H2 = 0;
      c.last_max_A2 = 0;
      for (const auto& nc : g.node) {
        c.last_max_H2 = std::max(c.last_max_H2, nc.H * nc.H);
        c.last_max_A2 = std::max(c.last_max_A2, nc.A2);
      }
    }
  };

  // one detect/surger/discard pass; returns false when a surgery failed
  auto surgery_round = [&](std::string& fail_note, bool& acted_out) {
    bool acted = false;
    // surgeries (component list may grow; iterate over a snapshot)
    const size_t n_before = comps.size();
    std::vector<Component> next;
    for (size_t ci = 0; ci < n_before; ++ci) {
      Component& c = comps[ci];
      bool replaced = false;
      if (c.last_max_H2 >= sp.Theta3 * K ||
          c.st.profile.min_z() < cfg.pinch_stop_z * rho) {
        auto necks = detect_necks(c.st, n, sp, footprints);
        for (const auto& neck : necks) {
          if (neck.covers_component) continue;  // discard pass handles it
          if (neck.H_center * neck.H_center < sp.Theta1 * K) continue;
          SurgeryOutcome out;
          try {
            out = perform_surgery(c.st.profile, c.id, neck, prm, dc, sp,
                                  c.st.t);
          } catch (const std::exception& e) {
            fail_note = e.what();
            return false;
          }
          rep.events.push_back(out.event);
          rep.min_area_decrement =
              std::min(rep.min_area_decrement,
                       out.event.area_before - out.event.area_after);
          footprints.push_back(out.footprint);
          if (out.event.loop_component) {
            ++ledger.loop_surgeries;
          } else {
            ledger.splits += static_cast<int>(out.pieces.size()) - 1;
          }
          ledger.live_components +=
              static_cast<int>(out.pieces.size()) - 1;
          for (auto& piece : out.pieces) {
            Component np;
            np.st.profile = std::move(piece);
            np.st.t = c.st.t;
            np.id = next_id++;
            next.push_back(std::move(np));
          }
          replaced = true;
          acted = true;
          break;  // one surgery per component per round
        }
      }
      if (!replaced) next.push_back(std::move(c));
    }
    comps = std::move(next);
    refresh_component_stats();

    // Discard pass: certain tag, max H^2 >= Theta1 K, and recognized
    // geometry -- either the component is entirely a neck (a loop with ND1
    // everywhere) or its high-curvature region is uniformly convex (no ND1
    // point at all).  Anything else keeps flowing toward a usable neck.
    std::vector<Component> keep;
    for (auto& c : comps) {
      bool discard = false;
      if (c.last_max_H2 >= sp.Theta1 * K) {
        ProfileGeometry g = profile_curvatures(c.st.profile, n);
        const double sqrtK = std::sqrt(K);
        int nd1 = 0;
        for (const auto& nc : g.node)
          if (nc.H >= sp.h_sharp * sqrtK &&
              nc.lambda_min() <= sp.eta_sharp * nc.H)
            ++nd1;
        const bool covered =
            c.st.profile.closed && nd1 == c.st.profile.size();
        if (nd1 == 0 || covered) {
          TopologyTag tag = classify_component(c.st.profile);
          if (tag == TopologyTag::Sphere)
            ++ledger.discards_sphere;
          else
            ++ledger.discards_loop;
          --ledger.live_components;
          discard = true;
          acted = true;
        }
      }
      if (!discard) keep.push_back(std::move(c));
    }
    comps = std::move(keep);
    if (acted) monitor.era_break();
    fail_note.clear();
    acted_out = acted;
    return true;
  };

  RunStatus status = RunStatus::Continue;
  std::string note;

  sample_all();
  refresh_component_stats();

  while (true) {
    // termination
    double maxA2K = 0;
    for (auto& c : comps) maxA2K = std::max(maxA2K, c.last_max_A2 / K);
    status = termination_check(static_cast<int>(comps.size()),
                               low_curv_duration, K, maxA2K, cfg.minimal_tol);
    if (status != RunStatus::Continue) break;
    if (t >= cfg.t_max) {
      status = RunStatus::BudgetExhausted;
      break;
    }

    // step
    double dt = std::numeric_limits<double>::infinity();
    for (auto& c : comps) dt = std::min(dt, cfl_dt(c.st, n, cfg.step));
    dt = std::min(dt, cfg.t_max - t);
    bool step_failed = false;
    double max_H2_now = 0, min_z_now = std::numeric_limits<double>::infinity();
    for (auto& c : comps) {
      try {
        StepStats ss = mcf_step(c.st, n, dt);
        c.last_max_H2 = ss.max_H2;
        c.last_max_A2 = ss.max_A2;
        max_H2_now = std::max(max_H2_now, ss.max_H2);
        min_z_now = std::min(min_z_now, ss.min_z);
      } catch (const std::exception& e) {
        status = RunStatus::UnresolvedSingularity;
        note = e.what();
        step_failed = true;
        break;
      }
    }
    if (step_failed) break;
    t += dt;
    rep.total_steps += 1;
    for (auto& c : comps) maybe_regrid(c.st, cfg.step, h0);

    // low-curvature duration for the long-time branch
    if (max_H2_now < sp.Theta1 * K)
      low_curv_duration += dt;
    else
      low_curv_duration = 0;

    // surgery trigger and pinch handling
    const bool pinch = !comps.empty() && min_z_now < cfg.pinch_stop_z * rho;
    const bool trigger = max_H2_now >= std::max(sp.Theta3 * K, trigger_rearm);
    if ((trigger || pinch) && cfg.surgery_enabled) {
      bool any_action = false;
      for (int round = 0; round < 3; ++round) {
        std::string fail;
        bool acted = false;
        if (!surgery_round(fail, acted)) {
          status = RunStatus::UnresolvedSingularity;
          note = "surgery failed: " + fail;
          break;
        }
        if (!acted) break;  // nothing recognized yet; keep flowing
        any_action = true;
        double mh = 0;
        double mz = std::numeric_limits<double>::infinity();
        for (auto& c : comps) {
          mh = std::max(mh, c.last_max_H2);
          mz = std::min(mz, c.st.profile.min_z());
        }
        if (comps.empty() ||
            (mh <= sp.Theta2 * K && mz >= cfg.pinch_stop_z * rho))
          break;
      }
      if (status != RunStatus::Continue) break;
      if (any_action) {
        trigger_rearm = 0;
        sample_all();  // record the post-surgery state
      } else if (pinch) {
        status = RunStatus::UnresolvedSingularity;
        note = "profile pinched without an actionable neck";
        break;
      } else {
        // neck not yet of surgical quality; re-arm slightly above the
        // current curvature so detection retries as the neck develops
        trigger_rearm = max_H2_now * 1.05;
      }
    } else if (pinch && !cfg.surgery_enabled) {
      status = RunStatus::UnresolvedSingularity;
      note = "profile pinched with surgery disabled";
      break;
    }

    // sampling cadence (dense inside the Bernstein window)
    if (t >= next_sample || t <= monitor.burn_in_time()) {
      sample_all();
      while (next_sample <= t) next_sample += cfg.sample_dt;
    }
  }

  rep.final_t = t;
  rep.status = status;
  rep.status_note = note;
  double finalA2 = 0;
  for (auto& c : comps) finalA2 = std::max(finalA2, c.last_max_A2 / K);
  rep.final_max_A2_over_K = finalA2;
  rep.classification = ledger.classification(n);
  // the state at an unresolved pinch is below grid resolution; keep it out
  // of the monitored series
  if (!comps.empty() && status != RunStatus::UnresolvedSingularity)
    sample_all();
  rep.series = monitor.series();
  rep.alpha_margin_series = monitor.alpha_margin_series();
  rep.estimates = monitor.report();
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
          .count();
  return rep;
}

}  // namespace mcfs
