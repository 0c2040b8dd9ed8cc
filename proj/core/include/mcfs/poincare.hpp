#pragma once

#include <cstdint>
#include <vector>

namespace mcfs {

/// Membership data of a curvature spectrum in the acylindrical set
/// U_{alpha,eta} = { f_{1,eta} >= 0 >= g_{2,alpha} } (unit-K normalization,
/// as in the underlying compactness argument).
struct AcylindricalSample {
  std::vector<double> lambda;
  double f1_eta = 0;   // |l|^2 - (1/(n-1) + eta) tr^2
  double g2_alpha = 0; // |l|^2 - tr^2/(n-2+alpha) - 2(2-alpha)
  double W = 0;        // a tr^2 + 2(2-alpha)
  double normC2 = 0;   // sum (l_j - l_i)^2 (l_i l_j + 1)^2
  bool member = false;

  double ratio() const { return (normC2 + 1.0) / (W * W * W); }
};

AcylindricalSample evaluate_sample(const std::vector<double>& lambda,
                                   int n, double alpha, double eta);

struct GammaSearchResult {
  double gamma_hat = 0;
  std::vector<double> argmin;
  long members_evaluated = 0;
  double documented_point_ratio = 0;  // ratio at (0,0,1,1) when n == 4
  bool documented_point_member = false;
};

/// Brute-force lower bound for gamma in  gamma W^3 <= |C|^2 + 1  on
/// U_{alpha,eta}: (i) deterministic grid over two-distinct-value spectra,
/// (ii) `budget` random samples (nested across budgets for a fixed seed, so
/// gamma_hat is monotone nonincreasing in the budget), (iii) coordinate
/// descent from the grid minimum.  Throws when the eta window is empty.
GammaSearchResult poincare_gamma_search(int n, double alpha, double eta,
                                        long budget, std::uint64_t seed = 1);

}  // namespace mcfs
