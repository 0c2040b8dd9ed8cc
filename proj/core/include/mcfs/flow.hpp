#pragma once

#include <deque>
#include <vector>

#include "mcfs/profile.hpp"
#include "mcfs/profile_curvature.hpp"

namespace mcfs {

/// One history frame: per-node curvature data at a sample time, used by the
/// parabolic windows of neck detection and by time-derivative monitors.
struct FlowFrame {
  double t = 0;
  int grid_version = 0;
  std::vector<double> lambda_rot, kappa_prof, z, arclength, H, grad_A, hess_A;
  std::vector<Eigen::Vector3d> position;
};

struct StepControl {
  double cfl = 0.2;            // dt <= cfl * h_min^2
  double reaction_cap = 0.1;   // dt <= reaction_cap / max |A|^2
  double regrid_ratio = 1.3;   // regrid when max/min spacing exceeds this
  int max_history = 1024;      // history ring capacity (frames)
};

/// Mutable flow state with a bounded history ring.  Single-writer: the
/// stepper owns it; monitor evaluations read frozen snapshots.
struct FlowState {
  ProfileCurve profile;
  double t = 0;
  int grid_version = 0;
  long steps = 0;
  std::deque<FlowFrame> history;

  void push_frame(int n);
  void trim_history(int max_frames);
};

struct StepStats {
  double dt = 0;
  double max_H2 = 0;
  double max_A2 = 0;
  double min_z = 0;
};

/// Admissible explicit time step for the current grid.
double cfl_dt(const FlowState& st, int n, const StepControl& ctrl);

/// One Heun (RK2) step of mean curvature flow: every node moves by -H nu dt
/// inside the orbit 2-sphere and is reprojected.  Throws on NaN.
StepStats mcf_step(FlowState& st, int n, double dt);

/// Regrids in place when spacing has drifted: arclength-uniform resample
/// targeting spacing target_h (0 keeps the count).  Bumps grid_version.
bool maybe_regrid(FlowState& st, const StepControl& ctrl, double target_h = 0);

}  // namespace mcfs
