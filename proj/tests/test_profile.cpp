#include <doctest.h>

#include <cmath>
#include <random>

#include "mcfs/exact_models.hpp"
#include "mcfs/fd_oracle.hpp"
#include "mcfs/flow.hpp"
#include "mcfs/profile.hpp"
#include "mcfs/profile_curvature.hpp"

using namespace mcfs;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("profile invariants of the generators") {
  for (double K : {0.25, 1.0, 4.0}) {
    CHECK(make_geodesic_sphere_profile(0.9 / std::sqrt(K), 200, K)
              .check_invariants()
              .empty());
    CHECK(make_tube_profile(0.35, 200, K).check_invariants().empty());
    CHECK(make_dumbbell_profile(0.25, 0.95, 400, K).check_invariants().empty());
    CHECK(make_equator_profile(200, K, 0.05).check_invariants().empty());
  }
}

TEST_CASE("geodesic sphere profile curvatures are exact") {
  const double d = kPi / 4;
  ProfileCurve p = make_geodesic_sphere_profile(d, 200, 1.0);
  ProfileGeometry g = profile_curvatures(p, 4);
  for (int i = 0; i < p.size(); ++i) {
    CHECK(g.node[i].lambda_rot == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g.node[i].kappa_prof == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g.node[i].H == doctest::Approx(4.0).epsilon(1e-8));
  }
}

TEST_CASE("tube profile matches the exact k=1 family") {
  const double u = 0.35;
  for (double K : {0.25, 1.0, 4.0}) {
    ProfileCurve p = make_tube_profile(u, 256, K);
    ProfileGeometry g = profile_curvatures(p, 4);
    auto exact = product_sphere_curvatures(ProductSphereState{4, 1, u, 0}, K);
    const double lam_exp = exact.lambda.back();   // sqrt(K) cot u
    const double kap_exp = exact.lambda.front();  // -sqrt(K) tan u
    for (int i = 0; i < p.size(); ++i) {
      CHECK(g.node[i].lambda_rot ==
            doctest::Approx(lam_exp).epsilon(1e-6));
      CHECK(g.node[i].kappa_prof ==
            doctest::Approx(kap_exp).epsilon(1e-6));
    }
  }
}

TEST_CASE("equator profile is totally geodesic") {
  ProfileCurve p = make_equator_profile(200, 1.0);
  ProfileGeometry g = profile_curvatures(p, 4);
  for (int i = 0; i < p.size(); ++i) {
    CHECK(std::abs(g.node[i].lambda_rot) < 1e-9);
    CHECK(std::abs(g.node[i].kappa_prof) < 1e-9);
  }
}

TEST_CASE("profile oracle at dumbbell nodes, with grid convergence") {
  auto worst_at = [](int N) {
    ProfileCurve p = make_dumbbell_profile(0.15, 0.5, N, 1.0);
    ProfileGeometry g = profile_curvatures(p, 4);
    double worst = 0;
    for (int frac = 1; frac <= 9; frac += 2) {
      const int i = frac * p.size() / 10;
      auto fd = fd_profile_point(p, i, 4, g.normal[i]);
      auto exact = g.node[i].principal(4);
      for (int q = 0; q < 4; ++q)
        worst = std::max(worst, std::abs(fd.lambda[q] - exact.lambda[q]) /
                                    (1 + std::abs(exact.lambda[q])));
    }
    return worst;
  };
  const double e400 = worst_at(400), e800 = worst_at(800);
  CHECK(e800 < 5e-5);
  CHECK(e800 < 0.5 * e400);  // second-order agreement
}

TEST_CASE("Codazzi relation validates the derivative discretization") {
  ProfileCurve p = make_dumbbell_profile(0.15, 0.5, 800, 1.0);
  ProfileGeometry g = profile_curvatures(p, 4);
  finite_diff_derivatives(p, 4, g);
  CHECK(codazzi_residual(p, 4, g) < 5e-4);
  ProfileCurve p2 = make_dumbbell_profile(0.15, 0.5, 1600, 1.0);
  ProfileGeometry g2 = profile_curvatures(p2, 4);
  finite_diff_derivatives(p2, 4, g2);
  CHECK(codazzi_residual(p2, 4, g2) < 0.5 * codazzi_residual(p, 4, g));
}

TEST_CASE("Kato inequality on a dumbbell profile") {
  ProfileCurve p = make_dumbbell_profile(0.15, 0.5, 500, 1.0);
  ProfileGeometry g = profile_curvatures(p, 4);
  finite_diff_derivatives(p, 4, g);
  const double K = 1.0;
  for (const auto& nc : g.node) {
    const double H2 = nc.H * nc.H;
    if (nc.grad_H * nc.grad_H <= 1e-20 * (H2 + K) * (H2 + K)) continue;
    CHECK(nc.grad_A * nc.grad_A >=
          (1 - 1e-6) * kato_constant(4) * nc.grad_H * nc.grad_H);
  }
}

TEST_CASE("regrid: idempotence, curvature stability, spacing") {
  ProfileCurve p = make_geodesic_sphere_profile(0.8, 200, 1.0);
  ProfileCurve q = regrid(p);
  REQUIRE(q.size() == p.size());
  for (int i = 0; i < p.size(); ++i)
    CHECK((q.nodes[i] - p.nodes[i]).norm() < 1e-10);

  ProfileGeometry gq = profile_curvatures(q, 4);
  for (int i = 0; i < q.size(); ++i)
    CHECK(gq.node[i].lambda_rot == doctest::Approx(1.0 / std::tan(0.8))
                                       .epsilon(1e-6));

  // spacing drifted by a short stretch of real flow, then regridded
  FlowState st;
  st.profile = make_dumbbell_profile(0.15, 0.5, 400, 1.0);
  StepControl ctrl;
  for (int it = 0; it < 20; ++it) mcf_step(st, 4, cfl_dt(st, 4, ctrl));
  const ProfileCurve& drift = st.profile;
  ProfileCurve r = regrid(drift);
  CHECK(r.max_spacing() / r.min_spacing() < 1.01);
  CHECK(std::abs(r.total_length() - drift.total_length()) <
        1e-6 * drift.total_length());
}

TEST_CASE("area: quadrature vs closed forms") {
  // unit S^4 equator: 8 pi^2 / 3
  ProfileCurve eq = make_equator_profile(400, 1.0);
  CHECK(area(eq, 4) ==
        doctest::Approx(8 * kPi * kPi / 3).epsilon(1e-4));
  // geodesic sphere of radius d: sin(d)^4 * 8 pi^2/3
  for (double d : {0.6, kPi / 4, 1.2}) {
    ProfileCurve p = make_geodesic_sphere_profile(d, 400, 1.0);
    CHECK(area(p, 4) == doctest::Approx(std::pow(std::sin(d), 4) * 8 * kPi *
                                        kPi / 3)
                            .epsilon(1e-4));
  }
  // scaling: K -> K/c^2 multiplies area by c^n
  ProfileCurve p1 = make_geodesic_sphere_profile(0.7, 300, 1.0);
  ProfileCurve p2 = make_geodesic_sphere_profile(1.4, 300, 0.25);
  CHECK(area(p2, 4) == doctest::Approx(16.0 * area(p1, 4)).epsilon(1e-10));
}

TEST_CASE("embed_profile basics") {
  ProfileCurve p = make_geodesic_sphere_profile(0.7, 64, 1.0);
  std::vector<Eigen::VectorXd> omegas;
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
  e1[0] = 1;
  Eigen::VectorXd e2 = Eigen::VectorXd::Zero(3);
  e2[1] = 1;
  omegas.push_back(e1);
  omegas.push_back(e2);
  auto pts = embed_profile(p, omegas);
  REQUIRE(pts.size() == size_t(2 * p.size()));
  for (const auto& X : pts) CHECK(X.norm() == doctest::Approx(1.0));
  // axis endpoint is independent of omega
  CHECK((pts[0] - pts[1]).norm() < 1e-14);
}

TEST_CASE("self intersection detection") {
  CHECK_FALSE(self_intersects(make_dumbbell_profile(0.15, 0.5, 200, 1.0)));
  // oversized bulbs wrap past a full turn of azimuth and do intersect
  CHECK(self_intersects(make_dumbbell_profile(0.3, 1.0, 200, 1.0)));
  CHECK_FALSE(self_intersects(make_tube_profile(0.4, 128, 1.0)));
}

TEST_CASE("warped Laplacian: spherical harmonic sanity") {
  // On the geodesic-sphere profile about (1,0,0), the ambient coordinate y
  // restricts to a degree-1 harmonic of the intrinsic round S^n of radius
  // sin(d): Delta y = -(n / sin^2 d) y.
  const double d = 1.0;
  ProfileCurve p = make_geodesic_sphere_profile(d, 500, 1.0);
  std::vector<double> f(p.size());
  for (int i = 0; i < p.size(); ++i) f[i] = p.nodes[i].y();
  auto lap = profile_laplacian(p, 4, f);
  const double ev = 4.0 / std::pow(std::sin(d), 2);
  for (int i = 5; i < p.size() - 5; ++i)
    CHECK(lap[i] == doctest::Approx(-ev * f[i]).epsilon(2e-3));
}
