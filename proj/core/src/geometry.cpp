#include "mcfs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mcfs {

std::vector<std::string> FlowParams::check() const {
  std::vector<std::string> bad;
  if (n < 3) bad.push_back("n >= 3 required, got n=" + std::to_string(n));
  if (!(K > 0)) bad.push_back("K > 0 required");
  if (!(alpha > 0 && alpha < 1)) bad.push_back("alpha in (0,1) required");
  if (n == 3 && !(alpha > 2.0 / 3.0))
    bad.push_back("alpha > 2/3 required when n=3");
  if (!(V > 0)) bad.push_back("V > 0 required");
  if (!(Theta > 0)) bad.push_back("Theta > 0 required");
  if (!(sigma > 0 && sigma < 1)) bad.push_back("sigma in (0,1) required");
  if (bad.empty()) {
    // eta windows are only meaningful once (n, alpha) are admissible
    try {
      DerivedConstants dc = derive_constants(n, alpha, eta);
      double win = std::min(dc.eta_max_poincare, dc.eta_max_cylindrical);
      if (!(eta > 0 && eta < win)) {
        std::ostringstream os;
        os << "eta must lie in (0, " << win << ") "
           << "[poincare window " << dc.eta_max_poincare
           << ", cylindrical window " << dc.eta_max_cylindrical << "]";
        bad.push_back(os.str());
      }
    } catch (const std::invalid_argument& e) {
      bad.push_back(e.what());
    }
  }
  return bad;
}

void FlowParams::validate() const {
  auto bad = check();
  if (bad.empty()) return;
  std::string msg = "invalid FlowParams:";
  for (const auto& m : bad) msg += "\n  - " + m;
  throw std::invalid_argument(msg);
}

PrincipalCurvatures::PrincipalCurvatures(std::vector<double> values)
    : lambda(std::move(values)) {
  std::sort(lambda.begin(), lambda.end());
}

DerivedConstants derive_constants(int n, double alpha, double eta) {
  if (n < 3) throw std::invalid_argument("derive_constants: n >= 3 required");
  if (!(alpha > 0 && alpha < 1))
    throw std::invalid_argument("derive_constants: alpha in (0,1) required");
  const double nn = n;
  DerivedConstants dc;
  dc.a = 1.0 / (nn - 2 + alpha) - 1.0 / (nn - 1) - eta +
         alpha / (2 * nn * (nn - 1));
  dc.b = 2 * (2 - alpha);
  dc.beta = 0.5 * (3.0 / (nn + 2) - 1.0 / (nn - 1));
  dc.C_noncollapse = std::sqrt((nn - 2) * (nn - 2 + alpha) / (4 * alpha));
  dc.eta_max_poincare = 1.0 / (nn - 2 + alpha) - 1.0 / (nn - 1);
  dc.eta_max_cylindrical =
      (2 - alpha) * (nn - alpha) / (2 * nn * (nn - 1) * (nn - 2 + alpha));
  if (!(dc.a > 0)) {
    std::ostringstream os;
    os << "derive_constants: a = " << dc.a
       << " <= 0, eta/alpha combination inadmissible "
       << "[poincare window (0, " << dc.eta_max_poincare
       << "), cylindrical window (0, " << dc.eta_max_cylindrical << ")]";
    throw std::invalid_argument(os.str());
  }
  const double d1 = 1.0 - (nn + 2) / 3.0 * (1.0 / (nn - 2 + alpha) -
                                            alpha / (2 * nn * (nn - 1)));
  const double d2 = (1.0 / dc.a) / (2 * (nn - 1));
  const double d3 = alpha + nn / 2 - 2;
  dc.delta = std::min({d1, d2, d3});
  if (!(dc.delta > 0)) {
    std::ostringstream os;
    os << "derive_constants: delta = min{" << d1 << ", " << d2 << ", " << d3
       << "} <= 0 (alpha inadmissible for n=" << n << ")";
    throw std::invalid_argument(os.str());
  }
  return dc;
}

double mean_curvature(const PrincipalCurvatures& pc) {
  return std::accumulate(pc.lambda.begin(), pc.lambda.end(), 0.0);
}

double second_form_norm_sq(const PrincipalCurvatures& pc) {
  double s = 0;
  for (double l : pc.lambda) s += l * l;
  return s;
}

double scalar_curvature(const PrincipalCurvatures& pc, double K) {
  const double H = mean_curvature(pc);
  const double n = pc.n();
  return H * H - second_form_norm_sq(pc) + n * (n - 1) * K;
}

double quadratic_margin(double A2, double H2, int n, double K, double alpha) {
  return A2 - H2 / (n - 2 + alpha) - 2 * (2 - alpha) * K;
}

double quadratic_margin(const PrincipalCurvatures& pc, double K,
                        double alpha) {
  const double H = mean_curvature(pc);
  return quadratic_margin(second_form_norm_sq(pc), H * H, pc.n(), K, alpha);
}

double strict_margin(double A2, double H2, int n, double K) {
  if (n == 3) return A2 - 0.6 * H2 - (8.0 / 3.0) * K;
  return A2 - H2 / (n - 2) - 4 * K;
}

double strict_margin(const PrincipalCurvatures& pc, double K) {
  const double H = mean_curvature(pc);
  return strict_margin(second_form_norm_sq(pc), H * H, pc.n(), K);
}

bool strict_pinching_check(const PrincipalCurvatures& pc, double K) {
  return strict_margin(pc, K) < 0;
}

double cylindrical_deficit(double A2, double H2, int n) {
  return A2 - H2 / (n - 1);
}

double cylindrical_deficit(const PrincipalCurvatures& pc) {
  const double H = mean_curvature(pc);
  return cylindrical_deficit(second_form_norm_sq(pc), H * H, pc.n());
}

double weight_W(double H, double K, const DerivedConstants& dc) {
  if (!(dc.a > 0))
    throw std::invalid_argument("weight_W: inadmissible constants, a <= 0");
  return dc.a * H * H + dc.b * K;
}

double f_sigma_eta(double A2, double H2, int n, double K, double eta,
                   double sigma, const DerivedConstants& dc) {
  const double W = dc.a * H2 + dc.b * K;
  const double numerator = A2 - (1.0 / (n - 1) + eta) * H2;
  if (sigma == 1.0) return numerator;
  return numerator * std::pow(W, sigma - 1.0);
}

double f_sigma_eta(const PrincipalCurvatures& pc, double K, double eta,
                   double sigma, const DerivedConstants& dc) {
  const double H = mean_curvature(pc);
  return f_sigma_eta(second_form_norm_sq(pc), H * H, pc.n(), K, eta, sigma,
                     dc);
}

double f_plus(double A2, double H2, int n, double K, double t, double eta,
              double sigma, const DerivedConstants& dc) {
  const double f = f_sigma_eta(A2, H2, n, K, eta, sigma, dc);
  return std::max(std::exp(2 * dc.delta * K * t) * f, 0.0);
}

double noncollapse_F(double A2, double H2, int n, double K) {
  const double radicand = 4 * K + H2 / (n - 2) - A2;
  if (!(radicand > 0))
    throw std::domain_error(
        "noncollapse_F: radicand <= 0, input is not strictly pinched");
  return std::sqrt(radicand);
}

double noncollapse_F(const PrincipalCurvatures& pc, double K) {
  const double H = mean_curvature(pc);
  return noncollapse_F(second_form_norm_sq(pc), H * H, pc.n(), K);
}

double kato_constant(int n) { return 3.0 / (n + 2); }

}  // namespace mcfs
