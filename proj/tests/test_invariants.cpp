#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "mcfs/controller.hpp"
#include "mcfs/exact_models.hpp"
#include "mcfs/flow.hpp"
#include "mcfs/inscribed.hpp"
#include "mcfs/profile.hpp"
#include "mcfs/profile_curvature.hpp"
#include "mcfs/surgery.hpp"

using namespace mcfs;

TEST_CASE("local curvature comparability on parabolic cylinders") {
  // Wherever H >= h# sqrt(K) and |grad H|/H^2 <= c# holds, H stays within
  // a factor 10 on the intrinsic parabolic cylinder of radius 1/(10 c# H).
  const int n = 4;
  const double K = 1.0;
  FlowState st;
  st.profile = make_dumbbell_profile(0.15, 0.5, 400, K);
  StepControl ctrl;
  const double h0 = st.profile.total_length() / st.profile.segment_count();
  const double h_sharp = 10.0;
  double c_sharp = 0;
  double next_frame = 0;
  // stop well before the waist pinches (no surgery in this test)
  while (st.t < 1.2e-3) {
    mcf_step(st, n, cfl_dt(st, n, ctrl));
    maybe_regrid(st, ctrl, h0);
    if (st.t >= next_frame) {
      st.push_frame(n);
      next_frame += 5e-5;
    }
  }
  // measure c# over the hot region across the run
  for (const auto& fr : st.history)
    for (size_t i = 0; i < fr.H.size(); ++i)
      if (fr.H[i] >= h_sharp * std::sqrt(K))
        c_sharp = std::max(c_sharp, fr.grad_A[i] /* >= |grad H| */ /
                                        (fr.H[i] * fr.H[i]));
  REQUIRE(c_sharp > 0);

  const auto& last = st.history.back();
  int checked = 0;
  for (size_t i = 0; i < last.H.size(); i += 7) {
    const double Hp = last.H[i];
    if (Hp < h_sharp * std::sqrt(K)) continue;
    const double rad = 1.0 / (10.0 * c_sharp * Hp);
    for (const auto& fr : st.history) {
      if (fr.t < last.t - rad * rad) continue;
      for (size_t j = 0; j < fr.H.size(); ++j) {
        const double dist = std::abs(fr.arclength[j] - last.arclength[i]);
        if (dist > rad) continue;
        CHECK(fr.H[j] >= Hp / 10.0);
        CHECK(fr.H[j] <= 10.0 * Hp);
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("run report invariants on the surgery scenario") {
  RunConfig cfg;
  cfg.scenario = "rotsym_profile";
  cfg.params.V = 2000;
  cfg.params.Theta = 800;
  cfg.generator.kind = "dumbbell";
  cfg.generator.neck_theta = 0.12;
  cfg.generator.bulb_theta = 0.5;
  cfg.grid_N = 400;
  cfg.t_max = 0.5;
  cfg.sample_dt = 1e-4;
  cfg.inscribed_stride = 20;
  cfg.surgery.h_sharp = 12;
  cfg.surgery.Theta1 = 576;
  cfg.surgery.Theta2 = 2304;
  cfg.surgery.Theta3 = 2500;
  RunReport rep = run(cfg);

  REQUIRE(rep.events.size() >= 1);
  CHECK(rep.ledger.reconciles());

  // termination bound: surgeries <= initial area / min decrement
  CHECK(double(rep.events.size()) <=
        rep.area0 / rep.min_area_decrement + 1e-9);

  // area nonincreasing across the whole run (surgery only removes area)
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.series) {
    if (row.components == 0) break;
    CHECK(row.area_times_Kpow <= prev * (1 + 1e-8));
    prev = row.area_times_Kpow;
  }

  // gradient-estimate ratio does not diverge after burn-in: the late sup
  // stays within a factor 2 of the sup over the first half of the run
  double early = 0, late = 0;
  const double t_half = 0.5 * rep.series.back().tK;
  for (const auto& row : rep.series) {
    if (row.components == 0) break;
    if (row.tK <= t_half)
      early = std::max(early, row.max_gradA_ratio);
    late = std::max(late, row.max_gradA_ratio);
  }
  REQUIRE(early > 0);
  CHECK(late <= 2.0 * early);

  // every event: strict area decrease and trigger band
  for (const auto& e : rep.events) {
    CHECK(e.area_after < e.area_before);
    CHECK(e.cut_H_left >= 3.0 / (10.0 * e.r_used));
    CHECK(e.cut_H_left <= 30.0 / e.r_used);
  }
}

TEST_CASE("profile table input round trip") {
  ProfileCurve p = make_geodesic_sphere_profile(0.8, 64, 1.0);
  std::string table = "# xi x y z\n";
  auto s = p.cumulative_arclength();
  for (int i = 0; i < p.size(); ++i) {
    char line[160];
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g\n", s[i],
                  p.nodes[i].x(), p.nodes[i].y(), p.nodes[i].z());
    table += line;
  }
  ProfileCurve q = profile_from_table(table, 1.0);
  REQUIRE(q.size() == p.size());
  for (int i = 0; i < p.size(); ++i)
    CHECK((q.nodes[i] - p.nodes[i]).norm() < 1e-12);
  CHECK(q.check_invariants().empty());
}

TEST_CASE("inscribed/exscribed rejects non-embedded profiles") {
  ProfileCurve bad = make_dumbbell_profile(0.3, 1.0, 200, 1.0);
  REQUIRE(self_intersects(bad));
  CHECK_THROWS_AS(inscribed_exscribed(bad, 4), std::invalid_argument);
}

TEST_CASE("budget-exhausted status on a short horizon") {
  RunConfig cfg;
  cfg.scenario = "geodesic_sphere";
  cfg.params.V = 2000;
  cfg.generator.kind = "geodesic_sphere";
  cfg.generator.d = 1.0;
  cfg.grid_N = 64;
  cfg.t_max = 1e-3;
  cfg.sample_dt = 5e-4;
  cfg.surgery_enabled = false;
  RunReport rep = run(cfg);
  CHECK(rep.status == RunStatus::BudgetExhausted);
  CHECK(rep.final_t >= 1e-3);
}

TEST_CASE("dimension genericity: n = 3 and n = 5 runs") {
  {
    RunConfig cfg;
    cfg.scenario = "geodesic_sphere";
    cfg.params.n = 3;
    cfg.params.alpha = 0.75;
    cfg.params.eta = 0.01;
    cfg.params.V = 2000;
    cfg.generator.kind = "geodesic_sphere";
    cfg.generator.d = 1.0;
    cfg.grid_N = 96;
    cfg.t_max = 0.02;
    cfg.sample_dt = 5e-3;
    cfg.surgery_enabled = false;
    RunReport rep = run(cfg);
    CHECK(rep.status == RunStatus::BudgetExhausted);
    CHECK(rep.estimates.kato_violations == 0);
    CHECK(rep.estimates.max_alpha_margin < 0);
  }
  {
    RunConfig cfg;
    cfg.scenario = "rotsym_profile";
    cfg.params.n = 5;
    cfg.params.eta = 0.02;  // the n = 5 window is (0, 1/(n-2+a) - 1/(n-1))
    cfg.params.V = 2000;
    cfg.generator.kind = "tube";
    cfg.generator.u = 0.25;
    cfg.grid_N = 128;
    cfg.t_max = 0.2;
    cfg.sample_dt = 5e-4;
    cfg.inscribed_stride = 0;
    cfg.surgery.h_sharp = 20;
    RunReport rep = run(cfg);
    CHECK(rep.status == RunStatus::TerminatedByClassification);
    CHECK(rep.classification == "S^1 x S^4");
    CHECK(rep.estimates.kato_violations == 0);
  }
}

TEST_CASE("mcf_step rejects a CFL-violating step") {
  FlowState st;
  st.profile = make_tube_profile(0.4, 64, 1.0);
  const double h = st.profile.min_spacing();
  CHECK_THROWS_AS(mcf_step(st, 4, h * h), std::invalid_argument);
}

namespace {

// closed-loop tube with a thin plateau sector joined to a thick sector by
// smoothstep shoulders: the plateau pinches first as an exact thin tube,
// exercising surgery on a loop component
ProfileCurve make_necked_loop(double thin_theta, double thick_theta, int N,
                              double K) {
  ProfileCurve p;
  p.rho = 1.0 / std::sqrt(K);
  p.closed = true;
  const double zn = p.rho * std::sin(thin_theta);
  const double zb = p.rho * std::sin(thick_theta);
  const double pi = 3.14159265358979323846;
  auto smoothstep = [](double x) {
    x = std::min(std::max(x, 0.0), 1.0);
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
  };
  const double a = 0.3 * pi;  // half-width of the thin sector
  const double w = 0.3 * pi;
  p.nodes.reserve(N);
  for (int j = 0; j < N; ++j) {
    const double th = -2 * pi * j / N;
    double d = std::abs(std::atan2(std::sin(th), std::cos(th)));  // in [0,pi]
    double S;
    if (d <= a)
      S = 0.0;
    else if (d >= a + w)
      S = 1.0;
    else
      S = smoothstep((d - a) / w);
    const double z = zn + (zb - zn) * S;
    const double wr = std::sqrt(p.rho * p.rho - z * z);
    p.nodes.emplace_back(wr * std::cos(th), wr * std::sin(th), z);
  }
  return regrid(p);
}

}  // namespace

TEST_CASE("surgery on a loop component keeps the connected-sum count") {
  ProfileCurve wavy = make_necked_loop(0.12, 0.3, 768, 1.0);
  REQUIRE(classify_component(wavy) == TopologyTag::LoopProduct);
  REQUIRE(wavy.check_invariants().empty());
  ProfileGeometry g0 = profile_curvatures(wavy, 4);
  for (const auto& nc : g0.node)
    REQUIRE(quadratic_margin(nc.A2, nc.H * nc.H, 4, 1.0, 0.5) < 0);

  RunConfig cfg;
  cfg.scenario = "rotsym_profile";
  cfg.params.V = 2000;
  cfg.params.Theta = 800;
  cfg.generator.kind = "table";  // placeholder; profile injected below
  cfg.grid_N = 768;
  cfg.t_max = 0.5;
  cfg.sample_dt = 5e-5;
  cfg.inscribed_stride = 0;
  cfg.surgery.h_sharp = 12;
  cfg.surgery.Theta1 = 576;
  cfg.surgery.Theta2 = 2304;
  cfg.surgery.Theta3 = 2500;

  // route the profile through the table interface
  std::string table;
  auto s = wavy.cumulative_arclength();
  for (int i = 0; i < wavy.size(); ++i) {
    char line[160];
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g\n", s[i],
                  wavy.nodes[i].x(), wavy.nodes[i].y(), wavy.nodes[i].z());
    table += line;
  }
  const std::string path =
      (std::filesystem::temp_directory_path() / "mcfs_wavy_tube_profile.txt")
          .string();
  {
    std::ofstream out(path);
    out << table;
  }
  cfg.generator.table_path = path;
  cfg.generator.table_closed = true;

  RunReport rep = run(cfg);
  // The loop surgery itself must happen and be bookkept correctly.  The
  // continuation of the capped-off arc may afterwards pinch into a cap (a
  // neck bordered by a disc), which is outside the supported surgery
  // repertoire, so an unresolved-singularity ending is a legitimate honest
  // outcome here; a full termination is too.
  REQUIRE(rep.events.size() >= 1);
  const SurgeryEvent& ev = rep.events.front();
  CHECK(ev.loop_component);
  CHECK(ev.pieces == 1);
  CHECK(ev.area_after < ev.area_before);
  CHECK(ev.cut_H_left >= 3.0 / (10.0 * ev.r_used));
  CHECK(ev.cut_H_left <= 30.0 / ev.r_used);
  CHECK(rep.ledger.loop_surgeries == 1);
  CHECK(rep.ledger.reconciles());
  // one cut on a loop: the original component was S^1 x S^{n-1}
  CHECK(rep.classification == "S^1 x S^3");
  CHECK((rep.status == RunStatus::TerminatedByClassification ||
         rep.status == RunStatus::UnresolvedSingularity));
}

TEST_CASE("pinch without surgery reports an unresolved singularity") {
  RunConfig cfg;
  cfg.scenario = "rotsym_profile";
  cfg.params.V = 2000;
  cfg.params.Theta = 800;
  cfg.generator.kind = "dumbbell";
  cfg.generator.neck_theta = 0.12;
  cfg.generator.bulb_theta = 0.5;
  cfg.grid_N = 300;
  cfg.t_max = 0.5;
  cfg.sample_dt = 1e-3;
  cfg.inscribed_stride = 0;
  cfg.surgery_enabled = false;
  RunReport rep = run(cfg);
  CHECK(rep.status == RunStatus::UnresolvedSingularity);
  CHECK(rep.events.empty());
}

TEST_CASE("homogeneous states have vanishing discrete |grad A|") {
  for (int n : {4, 5}) {
    ProfileCurve tube = make_tube_profile(0.4, 256, 1.0);
    ProfileGeometry g = profile_curvatures(tube, n);
    finite_diff_derivatives(tube, n, g);
    for (const auto& nc : g.node) CHECK(nc.grad_A <= 1e-6);
  }
  ProfileCurve sph = make_geodesic_sphere_profile(0.9, 256, 1.0);
  ProfileGeometry g = profile_curvatures(sph, 4);
  finite_diff_derivatives(sph, 4, g);
  for (const auto& nc : g.node) CHECK(nc.grad_A <= 1e-6);
}

TEST_CASE("gradient ratio sup is stable under grid refinement") {
  auto sup_at = [](int N) {
    FlowState st;
    st.profile = make_dumbbell_profile(0.15, 0.5, N, 1.0);
    StepControl ctrl;
    const double h0 = st.profile.total_length() / st.profile.segment_count();
    while (st.t < 1e-3) {
      mcf_step(st, 4, cfl_dt(st, 4, ctrl));
      maybe_regrid(st, ctrl, h0);
    }
    ProfileGeometry g = profile_curvatures(st.profile, 4);
    finite_diff_derivatives(st.profile, 4, g);
    double sup = 0;
    for (const auto& nc : g.node) {
      const double H2 = nc.H * nc.H;
      sup = std::max(sup, nc.grad_A * nc.grad_A / (H2 * H2 + 1.0));
    }
    return sup;
  };
  const double s400 = sup_at(400), s800 = sup_at(800);
  CHECK(std::abs(s800 - s400) <= 0.05 * std::max(s400, s800));
}

TEST_CASE("orientation reversal swaps inscribed and exscribed curvatures") {
  ProfileCurve p = make_dumbbell_profile(0.15, 0.5, 200, 1.0);
  ProfileCurve rev = p;
  std::reverse(rev.nodes.begin(), rev.nodes.end());
  auto a = inscribed_exscribed(p, 4);
  auto b = inscribed_exscribed(rev, 4);
  const int N = p.size();
  for (int i = 0; i < N; ++i) {
    CHECK(b.kbar[N - 1 - i] == doctest::Approx(-a.klow[i]).epsilon(1e-10));
    CHECK(b.klow[N - 1 - i] == doctest::Approx(-a.kbar[i]).epsilon(1e-10));
  }
}
