#include <doctest.h>

#include <cmath>

#include "mcfs/exact_models.hpp"
#include "mcfs/flow.hpp"
#include "mcfs/inscribed.hpp"
#include "mcfs/profile.hpp"
#include "mcfs/profile_curvature.hpp"

using namespace mcfs;

namespace {
constexpr double kPi = 3.14159265358979323846;

double sphere_radius_from_endpoints(const ProfileCurve& p) {
  const double c = p.nodes.front().dot(p.nodes.back()) / (p.rho * p.rho);
  return 0.5 * p.rho * std::acos(std::min(1.0, std::max(-1.0, c)));
}

}  // namespace

TEST_CASE("mcf: shrinking geodesic sphere matches the closed form") {
  const int n = 4;
  const double K = 1.0, d0 = kPi / 3;
  FlowState st;
  st.profile = make_geodesic_sphere_profile(d0, 400, K);
  StepControl ctrl;
  const double t_end = 0.5 * geodesic_sphere_extinction_time(d0, n, K);
  const double h0 = st.profile.total_length() / st.profile.segment_count();
  double worst = 0;
  while (st.t < t_end) {
    const double dt = std::min(cfl_dt(st, n, ctrl), t_end - st.t);
    mcf_step(st, n, dt);
    maybe_regrid(st, ctrl, h0);
  }
  const double d_num = sphere_radius_from_endpoints(st.profile);
  const double d_ref = geodesic_sphere_closed_form(d0, st.t, n, K);
  worst = std::abs(d_num - d_ref) / d_ref;
  CHECK(worst < 1e-3);
}

TEST_CASE("mcf: equator is stationary") {
  const int n = 4;
  FlowState st;
  st.profile = make_equator_profile(200, 1.0);
  StepControl ctrl;
  while (st.t < 1.0) {
    mcf_step(st, n, cfl_dt(st, n, ctrl));
  }
  ProfileGeometry g = profile_curvatures(st.profile, n);
  for (const auto& nc : g.node) CHECK(std::abs(nc.H) < 1e-8);
}

TEST_CASE("mcf: tube tracks the reduced ODE") {
  const int n = 4;
  const double K = 1.0, u0 = 0.3;
  FlowState st;
  st.profile = make_tube_profile(u0, 256, K);
  StepControl ctrl;
  const double t_end = 0.01;
  const double h0 = st.profile.total_length() / st.profile.segment_count();
  while (st.t < t_end) {
    const double dt = std::min(cfl_dt(st, n, ctrl), t_end - st.t);
    mcf_step(st, n, dt);
    maybe_regrid(st, ctrl, h0);
  }
  OdeStepControl octrl;
  octrl.dt = 1e-5;
  auto traj =
      flow_product_sphere(ProductSphereState{n, 1, u0, 0}, t_end, K, octrl);
  const double u_ref = traj.states.back().u;
  // recover u from the tube height z = sin(u)/sqrt(K)
  const double z = st.profile.nodes.front().z();
  const double u_num = std::asin(std::min(1.0, z * std::sqrt(K)));
  CHECK(std::abs(u_num - u_ref) < 1e-3);
}

TEST_CASE("mcf: area is monotone nonincreasing") {
  const int n = 4;
  FlowState st;
  st.profile = make_dumbbell_profile(0.15, 0.5, 300, 1.0);
  StepControl ctrl;
  double prev = area(st.profile, n);
  const double h0 = st.profile.total_length() / st.profile.segment_count();
  for (int it = 0; it < 400; ++it) {
    mcf_step(st, n, cfl_dt(st, n, ctrl));
    maybe_regrid(st, ctrl, h0);
    const double a = area(st.profile, n);
    CHECK(a <= prev * (1 + 1e-8));
    prev = a;
  }
}

TEST_CASE("mcf: PDE-level pinching preservation on a dumbbell") {
  const int n = 4;
  const double alpha = 0.5, K = 1.0;
  FlowState st;
  st.profile = make_dumbbell_profile(0.15, 0.5, 300, K);
  StepControl ctrl;
  ProfileGeometry g0 = profile_curvatures(st.profile, n);
  for (const auto& nc : g0.node)
    REQUIRE(quadratic_margin(nc.A2, nc.H * nc.H, n, K, alpha) < 0);
  const double h0 = st.profile.total_length() / st.profile.segment_count();
  for (int it = 0; it < 500; ++it) {
    mcf_step(st, n, cfl_dt(st, n, ctrl));
    maybe_regrid(st, ctrl, h0);
    ProfileGeometry g = profile_curvatures(st.profile, n);
    for (const auto& nc : g.node)
      CHECK(quadratic_margin(nc.A2, nc.H * nc.H, n, K, alpha) < 0);
  }
}

TEST_CASE("inscribed/exscribed: closed forms") {
  // geodesic sphere d = pi/4: every chord gives exactly cot(d) = 1
  ProfileCurve p = make_geodesic_sphere_profile(kPi / 4, 128, 1.0);
  auto r = inscribed_exscribed(p, 4);
  for (int i = 2; i + 2 < p.size(); ++i) {
    CHECK(r.kbar[i] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.klow[i] == doctest::Approx(1.0).epsilon(1e-4));
  }
  // equator: kbar = klow = 0
  ProfileCurve eq = make_equator_profile(128, 1.0);
  auto re = inscribed_exscribed(eq, 4);
  for (int i = 0; i < eq.size(); ++i) {
    CHECK(std::abs(re.kbar[i]) < 1e-8);
    CHECK(std::abs(re.klow[i]) < 1e-8);
  }
  // nodewise bounds kbar >= lambda_n, klow <= lambda_1
  ProfileCurve d = make_dumbbell_profile(0.15, 0.5, 200, 1.0);
  ProfileGeometry g = profile_curvatures(d, 4);
  auto rd = inscribed_exscribed(d, 4, g);
  for (int i = 0; i < d.size(); ++i) {
    CHECK(rd.kbar[i] >= g.node[i].lambda_max() - 1e-9);
    CHECK(rd.klow[i] <= g.node[i].lambda_min() + 1e-9);
    CHECK(rd.kbar[i] >= g.node[i].H / 4 - 1e-9);
    CHECK(rd.klow[i] <= g.node[i].H / 4 + 1e-9);
  }
}

TEST_CASE("history frames and ring buffer") {
  FlowState st;
  st.profile = make_tube_profile(0.4, 64, 1.0);
  for (int i = 0; i < 10; ++i) {
    st.push_frame(4);
    st.t += 1e-4;
  }
  CHECK(st.history.size() == 10);
  st.trim_history(4);
  CHECK(st.history.size() == 4);
  CHECK(st.history.back().t > st.history.front().t);
}
