#include "mcfs/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "mcfs/geometry.hpp"

namespace mcfs {

AcylindricalSample evaluate_sample(const std::vector<double>& lambda, int n,
                                   double alpha, double eta) {
  AcylindricalSample s;
  s.lambda = lambda;
  double tr = 0, norm2 = 0;
  for (double l : lambda) {
    tr += l;
    norm2 += l * l;
  }
  const double tr2 = tr * tr;
  s.f1_eta = norm2 - (1.0 / (n - 1) + eta) * tr2;
  s.g2_alpha = norm2 - tr2 / (n - 2 + alpha) - 2 * (2 - alpha);
  const double a = 1.0 / (n - 2 + alpha) - 1.0 / (n - 1) - eta +
                   alpha / (2.0 * n * (n - 1));
  s.W = a * tr2 + 2 * (2 - alpha);
  s.member = s.f1_eta >= 0 && s.g2_alpha <= 0;
  double c2 = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = lambda[j] - lambda[i];
      const double m = lambda[i] * lambda[j] + 1.0;
      c2 += d * d * m * m;
    }
  s.normC2 = c2;
  return s;
}

namespace {

struct Best {
  double ratio = std::numeric_limits<double>::infinity();
  std::vector<double> lambda;
  void consider(const AcylindricalSample& s) {
    if (s.member && s.ratio() < ratio) {
      ratio = s.ratio();
      lambda = s.lambda;
    }
  }
};

}  // namespace

GammaSearchResult poincare_gamma_search(int n, double alpha, double eta,
                                        long budget, std::uint64_t seed) {
  const DerivedConstants dc = derive_constants(n, alpha, eta);
  if (!(eta < dc.eta_max_poincare))
    throw std::invalid_argument(
        "poincare_gamma_search: eta outside the admissible window");

  GammaSearchResult out;
  Best best;
  long members = 0;

  auto eval = [&](const std::vector<double>& l) {
    AcylindricalSample s = evaluate_sample(l, n, alpha, eta);
    if (s.member) {
      ++members;
      best.consider(s);
    }
    return s;
  };

  // (i) deterministic grid over two-distinct-value spectra
  const double R = 6.0;
  const double step = 0.1;
  const int nsteps = static_cast<int>(std::lround(2 * R / step));
  for (int m = 1; m <= n - 1; ++m) {
    for (int ix = 0; ix <= nsteps; ++ix) {
      const double x = -R + ix * step;
      for (int iy = 0; iy <= nsteps; ++iy) {
        const double y = -R + iy * step;
        std::vector<double> l(n, y);
        for (int i = 0; i < m; ++i) l[i] = x;
        eval(l);
      }
    }
  }

  // documented reference point for n = 4
  if (n == 4) {
    AcylindricalSample s = eval({0, 0, 1, 1});
    out.documented_point_ratio = s.ratio();
    out.documented_point_member = s.member;
  }

  // descent starts from the grid minimum only, so its path does not depend
  // on the budget and gamma_hat is monotone nonincreasing in the budget
  const std::vector<double> grid_best = best.lambda;
  const double grid_best_ratio = best.ratio;

  // (ii) nested random sampling
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-R, R);
  for (long it = 0; it < budget; ++it) {
    std::vector<double> l(n);
    for (int i = 0; i < n; ++i) l[i] = uni(rng);
    eval(l);
  }

  // (iii) coordinate descent
  if (!grid_best.empty()) {
    std::vector<double> cur = grid_best;
    double cur_ratio = grid_best_ratio;
    double h = 0.05;
    for (int sweep = 0; sweep < 200 && h > 1e-9; ++sweep) {
      bool improved = false;
      for (int i = 0; i < n; ++i) {
        for (double sgn : {+1.0, -1.0}) {
          std::vector<double> trial = cur;
          trial[i] += sgn * h;
          AcylindricalSample s = eval(trial);
          if (s.member && s.ratio() < cur_ratio) {
            cur = trial;
            cur_ratio = s.ratio();
            improved = true;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
  }

  out.gamma_hat = best.ratio;
  out.argmin = best.lambda;
  out.members_evaluated = members;
  if (members == 0)
    throw std::runtime_error("poincare_gamma_search: no admissible samples");
  return out;
}

}  // namespace mcfs
