#include "mcfs/exact_models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcfs {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_product_state(const ProductSphereState& st) {
  if (st.n < 2 || st.k < 1 || st.k > st.n - 1)
    throw std::invalid_argument("product sphere: need 1 <= k <= n-1");
  if (!(st.u > 0 && st.u < kPi / 2))
    throw std::invalid_argument("product sphere: u in (0, pi/2) required");
}
}  // namespace

PrincipalCurvatures product_sphere_curvatures(const ProductSphereState& st,
                                              double K) {
  check_product_state(st);
  const double sqrtK = std::sqrt(K);
  const double lam = -sqrtK * std::tan(st.u);
  const double mu = sqrtK / std::tan(st.u);
  std::vector<double> v;
  v.reserve(st.n);
  for (int i = 0; i < st.k; ++i) v.push_back(lam);
  for (int i = 0; i < st.n - st.k; ++i) v.push_back(mu);
  return PrincipalCurvatures(std::move(v));
}

double product_sphere_ode_rhs(const ProductSphereState& st, double K) {
  check_product_state(st);
  const double c = std::cos(st.u), s = std::sin(st.u);
  return -K * ((st.n - st.k) * c / s - st.k * s / c);
}

double minimal_clifford_angle(int n, int k) {
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("minimal_clifford_angle: need 1 <= k <= n-1");
  return std::atan(std::sqrt(double(n - k) / double(k)));
}

ProductSphereTrajectory flow_product_sphere(const ProductSphereState& start,
                                            double t_end, double K,
                                            const OdeStepControl& ctrl) {
  check_product_state(start);
  if (!(t_end > start.t))
    throw std::invalid_argument("flow_product_sphere: t_end > t0 required");

  const double dt0 = ctrl.dt > 0 ? ctrl.dt : 1e-3 / K;
  // inner RK4 evaluations may probe past the collapse cutoff; clamp them
  // (the step that lands outside [u_min, pi/2 - u_min] ends the run anyway)
  const double u_lo = 0.1 * ctrl.u_min, u_hi = kPi / 2 - 0.1 * ctrl.u_min;
  auto rhs = [&](double u) {
    ProductSphereState s = start;
    s.u = std::min(std::max(u, u_lo), u_hi);
    return product_sphere_ode_rhs(s, K);
  };

  ProductSphereTrajectory traj;
  ProductSphereState st = start;
  traj.states.push_back(st);
  double next_sample = ctrl.sample_dt > 0 ? st.t + ctrl.sample_dt : st.t;

  while (st.t < t_end) {
    double dt = std::min(dt0, t_end - st.t);
    // adaptive halving near collapse; the step may never overshoot the
    // boundary, so it is also capped by a fraction of the remaining gap
    double f0 = rhs(st.u);
    const double gap = std::min(st.u, kPi / 2 - st.u);
    while (std::abs(f0) * dt > std::min(ctrl.max_du, 0.4 * gap)) {
      dt *= 0.5;
      if (dt < 1e-16 / K)
        throw std::runtime_error("flow_product_sphere: step size underflow");
    }
    const double k1 = f0;
    const double k2 = rhs(st.u + 0.5 * dt * k1);
    const double k3 = rhs(st.u + 0.5 * dt * k2);
    const double k4 = rhs(st.u + dt * k3);
    st.u += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    st.t += dt;

    if (st.u < ctrl.u_min) {
      traj.collapsed = true;
      traj.collapsed_factor = -1;
      traj.states.push_back(st);
      break;
    }
    if (st.u > kPi / 2 - ctrl.u_min) {
      traj.collapsed = true;
      traj.collapsed_factor = +1;
      traj.states.push_back(st);
      break;
    }
    if (ctrl.sample_dt <= 0 || st.t >= next_sample - 1e-15 / K) {
      traj.states.push_back(st);
      next_sample += ctrl.sample_dt;
    }
  }
  if (!traj.collapsed && traj.states.back().t != st.t) traj.states.push_back(st);
  return traj;
}

double geodesic_sphere_ode_rhs(double d, int n, double K) {
  const double sqrtK = std::sqrt(K);
  return -n * sqrtK * std::cos(sqrtK * d) / std::sin(sqrtK * d);
}

double geodesic_sphere_closed_form(double d0, double t, int n, double K) {
  const double sqrtK = std::sqrt(K);
  const double arg = std::cos(sqrtK * d0) * std::exp(n * K * t);
  if (arg >= 1.0)
    throw std::domain_error("geodesic_sphere_closed_form: extinction reached");
  if (arg <= -1.0)
    throw std::domain_error("geodesic_sphere_closed_form: argument <= -1");
  return std::acos(arg) / sqrtK;
}

double geodesic_sphere_extinction_time(double d0, int n, double K) {
  const double c = std::cos(std::sqrt(K) * d0);
  if (c <= 0) return std::numeric_limits<double>::infinity();
  return -std::log(c) / (n * K);
}

double geodesic_sphere_rk4(double d0, double t, int n, double K, double dt) {
  double d = d0, s = 0;
  auto f = [&](double x) { return geodesic_sphere_ode_rhs(x, n, K); };
  while (s < t) {
    const double h = std::min(dt, t - s);
    const double k1 = f(d);
    const double k2 = f(d + 0.5 * h * k1);
    const double k3 = f(d + 0.5 * h * k2);
    const double k4 = f(d + h * k3);
    d += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    s += h;
  }
  return d;
}

}  // namespace mcfs
