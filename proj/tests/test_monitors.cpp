#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mcfs/controller.hpp"
#include "mcfs/exact_models.hpp"
#include "mcfs/monitors.hpp"
#include "mcfs/poincare.hpp"

using namespace mcfs;

TEST_CASE("evolution residual: exact stationary cases") {
  // Clifford minimal: H = 0 and RHS = 0 identically
  std::vector<double> t, H, A2;
  for (int i = 0; i < 10; ++i) {
    t.push_back(i * 1e-3);
    H.push_back(0.0);
    A2.push_back(4.0);
  }
  auto rs = evolution_residual(t, H, A2, 4, 1.0);
  CHECK(rs.max_H_residual_rel < 1e-12);
}

TEST_CASE("evolution residual: shrinking geodesic sphere closed form") {
  std::vector<double> t, H, A2;
  const int n = 4;
  for (int i = 0; i < 200; ++i) {
    const double tt = i * 1e-4;
    const double d = geodesic_sphere_closed_form(1.0, tt, n, 1.0);
    const double lam = std::cos(d) / std::sin(d);
    t.push_back(tt);
    H.push_back(n * lam);
    A2.push_back(n * lam * lam);
  }
  auto rs = evolution_residual(t, H, A2, n, 1.0);
  CHECK(rs.max_H_residual_rel < 1e-5);
  for (double r : rs.A2_residual_rel) CHECK(r < 1e-4);
}

TEST_CASE("acylindrical membership and the documented sample") {
  auto s = evaluate_sample({0, 0, 1, 1}, 4, 0.5, 0.05);
  CHECK(s.member);
  CHECK(s.f1_eta == doctest::Approx(7.0 / 15.0).epsilon(1e-12));
  CHECK(s.g2_alpha == doctest::Approx(-2.6).epsilon(1e-12));
  CHECK(s.normC2 == doctest::Approx(8.0));
  CHECK(s.W == doctest::Approx(3.15).epsilon(1e-12));
  CHECK(s.ratio() == doctest::Approx(9.0 / (3.15 * 3.15 * 3.15)).epsilon(1e-12));
  // near-umbilic is excluded by f_{1,eta} < 0
  CHECK_FALSE(evaluate_sample({1, 1, 1, 1.05}, 4, 0.5, 0.05).member);
  // large rescaling exits through g_{2,alpha} > 0
  CHECK_FALSE(evaluate_sample({0, 0, 10, 10}, 4, 0.5, 0.05).member);
}

TEST_CASE("gamma search: positivity, monotonicity, stability") {
  auto r1 = poincare_gamma_search(4, 0.5, 0.05, 100000, 1);
  auto r2 = poincare_gamma_search(4, 0.5, 0.05, 200000, 1);
  CHECK(r1.gamma_hat > 0);
  CHECK(r2.gamma_hat > 0);
  CHECK(r2.gamma_hat <= r1.gamma_hat + 1e-15);         // nested samples
  CHECK(std::abs(r2.gamma_hat - r1.gamma_hat) <
        0.01 * r1.gamma_hat);                           // stabilized
  CHECK(r1.documented_point_member);
  CHECK(r1.documented_point_ratio == doctest::Approx(0.2879).epsilon(1e-3));
  // empty window rejected
  CHECK_THROWS_AS(poincare_gamma_search(4, 0.5, 0.2, 1000, 1),
                  std::invalid_argument);
}

TEST_CASE("noncollapse check: geodesic sphere closed forms") {
  // kbar/F = cot(d) / sqrt(4 + H^2/2 - |A|^2) = cos(d)/2 for n = 4, K = 1;
  // always below C and nonincreasing, so the bound holds with mu = C
  const double C = std::sqrt(2.5);
  for (double t : {0.0, 0.05, 0.12}) {
    const double d = geodesic_sphere_closed_form(1.0, t, 4, 1.0);
    const double lam = std::cos(d) / std::sin(d);
    const double F = std::sqrt(4 + 16 * lam * lam / 2 - 4 * lam * lam);
    std::vector<double> kbar{lam}, klow{lam}, FF{F};
    CHECK(noncollapse_check(kbar, klow, FF, t, 1.0, C, C) == 0);
    CHECK(lam / F == doctest::Approx(std::cos(d) / 2).epsilon(1e-12));
  }
}

TEST_CASE("cylindrical sup is finite and attained on the k=1 tube") {
  const int n = 4;
  const double K = 1.0, eta = 0.05;
  const auto dc = derive_constants(n, 0.5, eta);
  OdeStepControl ctrl;
  ctrl.sample_dt = 1e-3;
  auto traj = flow_product_sphere(ProductSphereState{n, 1, 0.8, 0}, 3.0, K,
                                  ctrl);
  double sup = -1e300, last = 0;
  for (const auto& s : traj.states) {
    auto pc = product_sphere_curvatures(s, K);
    const double H2 = std::pow(mean_curvature(pc), 2);
    const double v = (cylindrical_deficit(pc) - eta * H2) *
                     std::exp(2 * dc.delta * K * s.t) / K;
    sup = std::max(sup, v);
    last = v;
  }
  CHECK(std::isfinite(sup));
  CHECK(sup > last);  // attained in the interior, not escaping at the end
}

TEST_CASE("f_plus of the pinched tube decays (era monotonicity)") {
  const int n = 4;
  const double K = 1.0;
  const auto dc = derive_constants(n, 0.5, 0.05);
  OdeStepControl ctrl;
  ctrl.sample_dt = 1e-3;
  auto traj =
      flow_product_sphere(ProductSphereState{n, 1, 0.7, 0}, 3.0, K, ctrl);
  double era_sup = -1;
  for (const auto& s : traj.states) {
    auto pc = product_sphere_curvatures(s, K);
    const double H2 = std::pow(mean_curvature(pc), 2);
    const double fp = f_plus(second_form_norm_sq(pc), H2, n, K, s.t, 0.05,
                             0.1, dc);
    if (era_sup >= 0) CHECK(fp <= era_sup * 1.01 + 1e-12);
    era_sup = std::max(era_sup, fp);
  }
  CHECK(era_sup > 0);  // the fat tube starts strictly acylindrical
}

TEST_CASE("fitted C_eta is nonpositive on umbilic runs") {
  // shrinking geodesic sphere: the cylindrical deficit is negative, so the
  // fitted constant must come out <= 0
  RunConfig cfg;
  cfg.scenario = "geodesic_sphere";
  cfg.params.V = 2000;
  cfg.generator.kind = "geodesic_sphere";
  cfg.generator.d = 1.0;
  cfg.grid_N = 64;
  cfg.t_max = 0.01;
  cfg.sample_dt = 2e-3;
  cfg.surgery_enabled = false;
  RunReport rep = run(cfg);
  CHECK(rep.estimates.C_eta_fitted <= 0.0);
  CHECK(rep.estimates.C_eta_fitted > -1e300);
}
