#pragma once

#include <string>
#include <vector>

namespace mcfs {

/// Parameters of a flow in the round sphere of sectional curvature K.
///
/// All fields except K are dimensionless; K carries length^-2.  The pinching
/// parameter alpha tightens the quadratic curvature condition
///   |A|^2 <= H^2/(n-2+alpha) + 2(2-alpha) K,
/// V bounds the initial area by V K^{-n/2}, Theta bounds the initial squared
/// mean curvature by Theta K, and (eta, sigma) enter the cylindrical-estimate
/// weight function.
struct FlowParams {
  int n = 4;
  double K = 1.0;
  double alpha = 0.5;
  double V = 1000.0;
  double Theta = 400.0;
  double eta = 0.05;
  double sigma = 0.1;

  /// Returns one message per violated constraint; empty means valid.
  std::vector<std::string> check() const;
  /// Throws std::invalid_argument listing every violated constraint.
  void validate() const;
};

/// Principal curvatures at a point, kept sorted ascending so that
/// lambda[0] is always the smallest eigenvalue (the one neck detection uses).
struct PrincipalCurvatures {
  std::vector<double> lambda;

  PrincipalCurvatures() = default;
  explicit PrincipalCurvatures(std::vector<double> values);

  int n() const { return static_cast<int>(lambda.size()); }
};

/// Constants derived from (n, alpha, eta), frozen at configuration time.
struct DerivedConstants {
  double a = 0;                    // H^2 coefficient of the weight W
  double b = 0;                    // K coefficient of W, b = 2(2-alpha)
  double delta = 0;                // exponential decay rate
  double beta = 0;                 // (3/(n+2) - 1/(n-1))/2
  double C_noncollapse = 0;        // sqrt((n-2)(n-2+alpha)/(4 alpha))
  double eta_max_poincare = 0;     // 1/(n-2+alpha) - 1/(n-1)
  double eta_max_cylindrical = 0;  // (2-alpha)(n-alpha)/(2n(n-1)(n-2+alpha))
};

/// Derives all constants from the closed-form expressions.  Throws
/// std::invalid_argument when the combination is inadmissible (a <= 0 or
/// delta <= 0, i.e. eta or alpha outside their windows).
DerivedConstants derive_constants(int n, double alpha, double eta);

double mean_curvature(const PrincipalCurvatures& pc);
double second_form_norm_sq(const PrincipalCurvatures& pc);

/// Sc = H^2 - |A|^2 + n(n-1)K (trace of the Gauss equation).
double scalar_curvature(const PrincipalCurvatures& pc, double K);

/// Q_alpha = |A|^2 - H^2/(n-2+alpha) - 2(2-alpha)K; the uniform quadratic
/// pinching condition holds iff Q_alpha <= 0.
double quadratic_margin(const PrincipalCurvatures& pc, double K, double alpha);
double quadratic_margin(double A2, double H2, int n, double K, double alpha);

/// Margin of the strict (alpha -> 0) condition:
///   |A|^2 - H^2/(n-2) - 4K          for n >= 4,
///   |A|^2 - (3/5)H^2 - (8/3)K       for n == 3.
/// Negative iff the strict condition holds.
double strict_margin(const PrincipalCurvatures& pc, double K);
double strict_margin(double A2, double H2, int n, double K);

bool strict_pinching_check(const PrincipalCurvatures& pc, double K);

/// |A|^2 - H^2/(n-1): zero on round cylinders, negative on strictly
/// convex points.
double cylindrical_deficit(const PrincipalCurvatures& pc);
double cylindrical_deficit(double A2, double H2, int n);

/// W = a H^2 + b K with (a, b) from derive_constants.  Throws on a <= 0.
double weight_W(double H, double K, const DerivedConstants& dc);

/// f_{sigma,eta} = [|A|^2 - (1/(n-1)+eta)H^2] W^{sigma-1}.
double f_sigma_eta(double A2, double H2, int n, double K, double eta,
                   double sigma, const DerivedConstants& dc);
double f_sigma_eta(const PrincipalCurvatures& pc, double K, double eta,
                   double sigma, const DerivedConstants& dc);

/// f_plus = max{ e^{2 delta K t} f_{sigma,eta}, 0 }.
double f_plus(double A2, double H2, int n, double K, double t, double eta,
              double sigma, const DerivedConstants& dc);

/// F = sqrt(4K + H^2/(n-2) - |A|^2).  Throws std::domain_error when the
/// radicand is not positive (input not strictly pinched).
double noncollapse_F(const PrincipalCurvatures& pc, double K);
double noncollapse_F(double A2, double H2, int n, double K);

/// Kato constant 3/(n+2): |grad A|^2 >= kato_constant(n) |grad H|^2.
double kato_constant(int n);

}  // namespace mcfs
