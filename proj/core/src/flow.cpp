#include "mcfs/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace mcfs {

void FlowState::push_frame(int n) {
  ProfileGeometry g = profile_curvatures(profile, n);
  finite_diff_derivatives(profile, n, g);
  FlowFrame fr;
  fr.t = t;
  fr.grid_version = grid_version;
  const int N = profile.size();
  fr.lambda_rot.resize(N);
  fr.kappa_prof.resize(N);
  fr.z.resize(N);
  fr.H.resize(N);
  fr.grad_A.resize(N);
  fr.hess_A.resize(N);
  fr.arclength = g.arclength;
  fr.position = profile.nodes;
  for (int i = 0; i < N; ++i) {
    fr.lambda_rot[i] = g.node[i].lambda_rot;
    fr.kappa_prof[i] = g.node[i].kappa_prof;
    fr.z[i] = g.node[i].z;
    fr.H[i] = g.node[i].H;
    fr.grad_A[i] = g.node[i].grad_A;
    fr.hess_A[i] = g.node[i].hess_A;
  }
  history.push_back(std::move(fr));
}

void FlowState::trim_history(int max_frames) {
  while (static_cast<int>(history.size()) > max_frames) history.pop_front();
}

double cfl_dt(const FlowState& st, int n, const StepControl& ctrl) {
  const double h = st.profile.min_spacing();
  double dt = ctrl.cfl * h * h;
  ProfileGeometry g = profile_curvatures(st.profile, n);
  double maxA2 = 0;
  for (const auto& nc : g.node) maxA2 = std::max(maxA2, nc.A2);
  if (maxA2 > 0) dt = std::min(dt, ctrl.reaction_cap / maxA2);
  return dt;
}

namespace {

std::vector<Eigen::Vector3d> velocities(const ProfileCurve& p, int n) {
  ProfileGeometry g = profile_curvatures(p, n);
  std::vector<Eigen::Vector3d> v(p.size());
  for (int i = 0; i < p.size(); ++i) v[i] = -g.node[i].H * g.normal[i];
  return v;
}

void advance(ProfileCurve& p, const std::vector<Eigen::Vector3d>& v,
             double dt) {
  for (int i = 0; i < p.size(); ++i) p.nodes[i] += dt * v[i];
  p.project_to_sphere();
  if (!p.closed) {
    // endpoints ride the axis: the ghost construction keeps their velocity
    // in the z = 0 plane, kill roundoff drift
    p.nodes.front().z() = 0;
    p.nodes.back().z() = 0;
    p.project_to_sphere();
  }
}

}  // namespace

StepStats mcf_step(FlowState& st, int n, double dt) {
  ProfileCurve& p = st.profile;

  const double h = p.min_spacing();
  if (dt > 0.5 * h * h)
    throw std::invalid_argument("mcf_step: CFL violation, dt > h^2/2");

  const auto v1 = velocities(p, n);
  ProfileCurve predictor = p;
  advance(predictor, v1, dt);
  const auto v2 = velocities(predictor, n);

  std::vector<Eigen::Vector3d> v(p.size());
  for (int i = 0; i < p.size(); ++i) v[i] = 0.5 * (v1[i] + v2[i]);
  advance(p, v, dt);

  st.t += dt;
  ++st.steps;

  StepStats stats;
  stats.dt = dt;
  stats.min_z = p.min_z();
  ProfileGeometry g = profile_curvatures(p, n);
  for (const auto& nc : g.node) {
    if (!std::isfinite(nc.H) || !std::isfinite(nc.A2))
      throw std::runtime_error("mcf_step: NaN in curvature at t=" +
                               std::to_string(st.t));
    stats.max_H2 = std::max(stats.max_H2, nc.H * nc.H);
    stats.max_A2 = std::max(stats.max_A2, nc.A2);
  }
  return stats;
}

bool maybe_regrid(FlowState& st, const StepControl& ctrl, double target_h) {
  const ProfileCurve& p = st.profile;
  const double ratio = p.max_spacing() / p.min_spacing();
  bool need = ratio > ctrl.regrid_ratio;
  if (target_h > 0) {
    const double h = p.total_length() / p.segment_count();
    if (h < 0.5 * target_h || h > 2.0 * target_h) need = true;
  }
  if (!need) return false;
  st.profile = regrid(p, target_h);
  ++st.grid_version;
  return true;
}

}  // namespace mcfs
