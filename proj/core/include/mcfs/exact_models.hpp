#pragma once

#include <vector>

#include "mcfs/geometry.hpp"

namespace mcfs {

/// S^k(r) x S^{n-k}(s) in the sphere of curvature K, with r = cos(u)/sqrt(K),
/// s = sin(u)/sqrt(K), so r^2 + s^2 = 1/K holds exactly.
struct ProductSphereState {
  int n = 4;
  int k = 1;
  double u = 0.5;  // angle in (0, pi/2)
  double t = 0.0;
};

/// Geodesic sphere of radius d in (0, pi/sqrt(K)) about a fixed pole.
struct GeodesicSphereState {
  int n = 4;
  double d = 1.0;
  double t = 0.0;
};

/// Principal curvatures -sqrt(K) tan(u) (multiplicity k) and
/// sqrt(K) cot(u) (multiplicity n-k); they satisfy lambda * mu = -K.
/// Throws on degenerate u (at 0 or pi/2).
PrincipalCurvatures product_sphere_curvatures(const ProductSphereState& st,
                                              double K);

/// du/dt = -K [ (n-k) cot u - k tan u ].  Stationary exactly at
/// tan^2 u* = (n-k)/k (the minimal Clifford hypersurface).
double product_sphere_ode_rhs(const ProductSphereState& st, double K);

/// u* = arctan(sqrt((n-k)/k)).
double minimal_clifford_angle(int n, int k);

struct OdeStepControl {
  double dt = 0.0;        // 0 means min(1e-3/K, ...) default
  double u_min = 1e-4;    // collapse cutoff
  double max_du = 1e-2;   // halve dt when |du/dt| dt exceeds this
  double sample_dt = 0.0; // record every sample_dt time units (0 = every step)
};

struct ProductSphereTrajectory {
  std::vector<ProductSphereState> states;
  bool collapsed = false;
  // +1: u -> pi/2, the S^k factor collapsed; -1: u -> 0, the S^{n-k}
  // factor collapsed; 0: reached t_end.
  int collapsed_factor = 0;
};

/// Classical RK4 with adaptive halving near collapse.  The trajectory ends at
/// t_end or when u leaves [u_min, pi/2 - u_min].  Throws on step underflow.
ProductSphereTrajectory flow_product_sphere(const ProductSphereState& start,
                                            double t_end, double K,
                                            const OdeStepControl& ctrl = {});

/// d' = -n sqrt(K) cot(sqrt(K) d), the shrinking geodesic sphere ODE.
double geodesic_sphere_ode_rhs(double d, int n, double K);

/// Closed form cos(sqrt(K) d(t)) = cos(sqrt(K) d0) e^{nKt}.  Throws
/// std::domain_error once the right side reaches 1 (extinction).
double geodesic_sphere_closed_form(double d0, double t, int n, double K);

/// Extinction time of the closed form; +inf for d0 >= pi/(2 sqrt(K)).
double geodesic_sphere_extinction_time(double d0, int n, double K);

/// RK4 integration of geodesic_sphere_ode_rhs, used to certify the closed
/// form (and nothing else).
double geodesic_sphere_rk4(double d0, double t, int n, double K, double dt);

}  // namespace mcfs
