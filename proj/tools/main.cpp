// mcfs: mean curvature flow with surgery on pinched hypersurfaces of the
// round sphere, reduced to rotationally symmetric profile curves.
//
// Subcommands:
//   run          evolve a configured scenario, write CSV series + JSON report
//   verify       run the built-in invariant suites
//   gamma-search brute-force the Poincare-type constant gamma
//   oracle       finite-difference embedding checks of the curvature formulas
//
// Exit codes: 0 success, 2 invariant violation, 3 config error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <random>

#include "mcfs/controller.hpp"
#include "mcfs/exact_models.hpp"
#include "mcfs/fd_oracle.hpp"
#include "mcfs/poincare.hpp"
#include "mcfs/report_io.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::uint64_t seed, bool have_seed) {
  mcfs::RunConfig cfg;
  try {
    cfg = mcfs::parse_config(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 3;
  }
  if (have_seed) cfg.seed = seed;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    cfg.out_csv = out_dir + "/timeseries.csv";
    cfg.out_json = out_dir + "/report.json";
  }

  mcfs::RunReport rep;
  try {
    rep = mcfs::run(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failed: %s\n", e.what());
    return 2;
  }

  if (!cfg.out_csv.empty()) mcfs::emit_timeseries(rep, cfg.out_csv);
  if (!cfg.out_json.empty()) mcfs::emit_report(rep, cfg.out_json);

  std::printf("status:         %s\n", mcfs::to_string(rep.status).c_str());
  if (!rep.status_note.empty())
    std::printf("note:           %s\n", rep.status_note.c_str());
  std::printf("classification: %s\n", rep.classification.c_str());
  std::printf("surgeries:      %zu\n", rep.events.size());
  std::printf("steps:          %ld\n", rep.total_steps);
  std::printf("final tK:       %.6g\n", rep.final_t * cfg.params.K);
  std::printf("wall seconds:   %.2f\n", rep.wall_seconds);

  const auto& er = rep.estimates;
  const bool bad = er.kato_violations > 0 || er.noncollapse_violations > 0 ||
                   !rep.ledger.reconciles();
  if (bad) {
    std::fprintf(stderr, "invariant violations: kato=%d noncollapse=%d\n",
                 er.kato_violations, er.noncollapse_violations);
    return 2;
  }
  return 0;
}

int cmd_verify(std::uint64_t seed) {
  using namespace mcfs;
  int failures = 0;
  auto check = [&](const char* name, bool ok, double value = 0) {
    std::printf("%-52s %s", name, ok ? "PASS" : "FAIL");
    if (value != 0) std::printf("   (%.3g)", value);
    std::printf("\n");
    if (!ok) ++failures;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uu(0.15, 1.42);
  std::uniform_real_distribution<double> uK(0.25, 4.0);

  // embedding oracle vs exact product-sphere curvatures
  {
    double worst = 0;
    for (int it = 0; it < 100; ++it) {
      const int n = 3 + static_cast<int>(rng() % 4);
      const int k = 1 + static_cast<int>(rng() % (n - 1));
      const double u = uu(rng), K = uK(rng);
      auto fd = fd_product_sphere(n, k, u, K);
      ProductSphereState st{n, k, u, 0};
      auto exact = product_sphere_curvatures(st, K);
      for (int i = 0; i < n; ++i)
        worst = std::max(worst,
                         std::abs(fd.lambda[i] - exact.lambda[i]) /
                             std::sqrt(K) / (1 + std::abs(exact.lambda[i])));
    }
    check("oracle: product-sphere curvatures (100 random)", worst < 1e-6,
          worst);
  }

  // reduced ODE sign against the mean curvature vector
  {
    double worst = 0;
    for (int it = 0; it < 20; ++it) {
      const int n = 3 + static_cast<int>(rng() % 3);
      const int k = 1 + static_cast<int>(rng() % (n - 1));
      const double u = uu(rng), K = uK(rng);
      const double fd = fd_product_sphere_dudt(n, k, u, K);
      ProductSphereState st{n, k, u, 0};
      const double exact = product_sphere_ode_rhs(st, K);
      worst = std::max(worst, std::abs(fd - exact) / (K * (1 + std::abs(exact / K))));
    }
    check("oracle: reduced ODE du/dt sign and value", worst < 1e-5, worst);
  }

  // closed-form geodesic sphere vs RK4
  {
    double worst = 0;
    for (int it = 0; it < 10; ++it) {
      const int n = 3 + static_cast<int>(rng() % 3);
      const double K = uK(rng);
      const double d0 = (0.3 + 0.2 * uu(rng)) / std::sqrt(K);
      const double text = geodesic_sphere_extinction_time(d0, n, K);
      const double t = 0.8 * text;
      const double cf = geodesic_sphere_closed_form(d0, t, n, K);
      const double rk = geodesic_sphere_rk4(d0, t, n, K, 1e-5 / K);
      worst = std::max(worst, std::abs(cf - rk) / cf);
    }
    check("oracle: geodesic sphere closed form vs RK4", worst < 1e-8, worst);
  }

  // scaling covariance of the pointwise algebra
  {
    bool ok = true;
    std::uniform_real_distribution<double> ul(-2.0, 2.0);
    for (int it = 0; it < 200; ++it) {
      const int n = 3 + static_cast<int>(rng() % 4);
      std::vector<double> l(n);
      for (auto& v : l) v = ul(rng);
      const double K = 1.0, alpha = n == 3 ? 0.7 : 0.5;
      for (double c : {0.5, 2.0, 10.0}) {
        std::vector<double> lc(l);
        for (auto& v : lc) v *= c;
        PrincipalCurvatures a(l), b(lc);
        const bool s1 = strict_pinching_check(a, K);
        const bool s2 = strict_pinching_check(b, c * c * K);
        if (s1 != s2) ok = false;
        const double m1 = quadratic_margin(a, K, alpha);
        const double m2 = quadratic_margin(b, c * c * K, alpha);
        if ((m1 > 0) != (m2 > 0) &&
            std::abs(m1) > 1e-12 && std::abs(m2) > 1e-12)
          ok = false;
      }
    }
    check("scaling covariance: pinching signs", ok);
  }

  // orientation invariance
  {
    bool ok = true;
    std::uniform_real_distribution<double> ul(-2.0, 2.0);
    for (int it = 0; it < 200; ++it) {
      const int n = 3 + static_cast<int>(rng() % 4);
      std::vector<double> l(n);
      for (auto& v : l) v = ul(rng);
      std::vector<double> lm(l);
      for (auto& v : lm) v = -v;
      PrincipalCurvatures a(l), b(lm);
      if (std::abs(second_form_norm_sq(a) - second_form_norm_sq(b)) > 1e-12)
        ok = false;
      if (std::abs(mean_curvature(a) + mean_curvature(b)) > 1e-12) ok = false;
      if (std::abs(quadratic_margin(a, 1.0, 0.5) -
                   quadratic_margin(b, 1.0, 0.5)) > 1e-12)
        ok = false;
      if (std::abs(cylindrical_deficit(a) - cylindrical_deficit(b)) > 1e-12)
        ok = false;
    }
    check("orientation invariance: lambda -> -lambda", ok);
  }

  // derive_constants admissibility boundary
  {
    bool ok = true;
    try {
      derive_constants(4, 1.0 - 1e-12, 0.01);  // poincare window empty-ish
    } catch (const std::invalid_argument&) {
    }
    try {
      derive_constants(3, 0.4, 0.01);  // delta term alpha + n/2 - 2 < 0
      ok = false;
    } catch (const std::invalid_argument&) {
    }
    const auto dc = derive_constants(4, 0.5, 0.05);
    if (std::abs(dc.delta - 29.0 / 120.0) > 1e-12) ok = false;
    if (std::abs(dc.a - 0.0375) > 1e-12) ok = false;
    check("derive_constants: boundary and frozen values", ok);
  }

  return failures == 0 ? 0 : 2;
}

int cmd_gamma(int n, double alpha, double eta, long budget,
              std::uint64_t seed) {
  try {
    auto res = mcfs::poincare_gamma_search(n, alpha, eta, budget, seed);
    std::printf("gamma_hat = %.10g\n", res.gamma_hat);
    std::printf("members evaluated = %ld\n", res.members_evaluated);
    std::printf("argmin lambda = (");
    for (size_t i = 0; i < res.argmin.size(); ++i)
      std::printf("%s%.6g", i ? ", " : "", res.argmin[i]);
    std::printf(")\n");
    if (n == 4)
      std::printf("reference point (0,0,1,1): ratio %.6g, member %d\n",
                  res.documented_point_ratio, res.documented_point_member);
    return res.gamma_hat > 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 3;
  }
}

int cmd_oracle(std::uint64_t seed) {
  using namespace mcfs;
  // profile-surface spot checks: geodesic sphere and tube at moderate n
  int failures = 0;
  auto check = [&](const char* name, double err, double tol) {
    std::printf("%-52s %s   (err %.3g, tol %.3g)\n", name,
                err < tol ? "PASS" : "FAIL", err, tol);
    if (!(err < tol)) ++failures;
  };
  (void)seed;
  const int n = 4;
  {
    const double K = 1.0;
    ProfileCurve p = make_geodesic_sphere_profile(0.7853981633974483, 257, K);
    ProfileGeometry g = profile_curvatures(p, n);
    const int i = 128;
    auto fd = fd_profile_point(p, i, n, g.normal[i]);
    double err = 0;
    auto exact = g.node[i].principal(n);
    for (int q = 0; q < n; ++q)
      err = std::max(err, std::abs(fd.lambda[q] - exact.lambda[q]));
    check("oracle: geodesic sphere profile point", err, 1e-5);
  }
  {
    const double K = 1.0;
    ProfileCurve p = make_tube_profile(0.4, 256, K);
    ProfileGeometry g = profile_curvatures(p, n);
    const int i = 57;
    auto fd = fd_profile_point(p, i, n, g.normal[i]);
    auto exact = g.node[i].principal(n);
    double err = 0;
    for (int q = 0; q < n; ++q)
      err = std::max(err, std::abs(fd.lambda[q] - exact.lambda[q]));
    check("oracle: tube profile point", err, 1e-5);
  }
  {
    // Codazzi residual on a dumbbell validates the |grad A| discretization
    const double K = 1.0;
    ProfileCurve p = make_dumbbell_profile(0.35, 0.95, 600, K);
    ProfileGeometry g = profile_curvatures(p, n);
    finite_diff_derivatives(p, n, g);
    check("oracle: Codazzi residual on dumbbell", codazzi_residual(p, n, g),
          5e-3);
  }
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean curvature flow with surgery in the round sphere"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 1;
  bool have_seed = false;

  auto* run = app.add_subcommand("run", "evolve a configured scenario");
  run->add_option("--config", config_path, "config JSON path")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
    have_seed = true;
  });

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--seed", seed, "seed");

  int gn = 4;
  double galpha = 0.5, geta = 0.05;
  long gbudget = 200000;
  auto* gamma = app.add_subcommand("gamma-search",
                                   "brute-force the Poincare constant");
  gamma->add_option("--n", gn, "dimension");
  gamma->add_option("--alpha", galpha, "pinching parameter");
  gamma->add_option("--eta", geta, "eta");
  gamma->add_option("--budget", gbudget, "random sample budget");
  gamma->add_option("--seed", seed, "seed");

  auto* oracle =
      app.add_subcommand("oracle", "finite-difference embedding checks");
  oracle->add_option("--seed", seed, "seed");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, out_dir, seed, have_seed);
  if (verify->parsed()) return cmd_verify(seed);
  if (gamma->parsed()) return cmd_gamma(gn, galpha, geta, gbudget, seed);
  if (oracle->parsed()) return cmd_oracle(seed);
  return 0;
}
