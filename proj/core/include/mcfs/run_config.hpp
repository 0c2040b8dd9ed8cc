#pragma once

#include <cstdint>
#include <string>

#include "mcfs/flow.hpp"
#include "mcfs/geometry.hpp"
#include "mcfs/surgery.hpp"

namespace mcfs {

struct GeneratorSpec {
  std::string kind = "geodesic_sphere";  // geodesic_sphere | tube | dumbbell
                                         // | equator | table
  double d = 1.0;                        // geodesic_sphere radius
  double u = 0.3;                        // tube angle
  double neck_theta = 0.15, bulb_theta = 0.5;  // dumbbell tube/bulb angles
  double neck_len = 2.0, trans_len = 1.4;       // dumbbell lengths (x rho)
  double amp = 0.0;                      // equator perturbation amplitude
  int mode = 1;                          // equator perturbation mode (odd)
  std::string table_path;                // whitespace table (xi x y z)
  bool table_closed = false;
};

struct RunConfig {
  std::string scenario = "geodesic_sphere";  // | product_sphere | rotsym_profile
  FlowParams params;
  GeneratorSpec generator;
  int grid_N = 400;
  StepControl step;
  double t_max = 0;        // 0 -> 10/K
  double sample_dt = 0;    // 0 -> 1e-3/K
  int inscribed_stride = 10;  // 0 disables the O(N^2) chord monitor
  bool surgery_enabled = true;
  SurgeryParams surgery;
  // product_sphere (ODE) scenario
  int ps_k = 1;
  double ps_u0 = 0.3;
  std::string out_csv, out_json;
  std::uint64_t seed = 1;
  double minimal_tol = 1e-3;   // converged-to-minimal gate on max|A|^2/K
  double pinch_stop_z = 1e-3;  // unresolved-pinch gate, units of rho

  void apply_defaults();
};

/// Parses and validates; the exception message lists every violated
/// constraint, not just the first.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);
std::string config_to_json(const RunConfig& cfg);

}  // namespace mcfs
