#pragma once

#include <array>
#include <string>
#include <vector>

#include "mcfs/flow.hpp"
#include "mcfs/geometry.hpp"

namespace mcfs {

struct SurgeryParams {
  double epsilon = 0.01;  // neck quality, must be <= 1/100
  int k_neck = 2;         // highest derivative order checked (grid limit)
  double L = 10.0;        // neck length parameter
  double tau = 0.1;       // cap blend parameter (reserved)
  double B = 10.0;        // cap curvature bound, |A_cap| <= B / r
  double r_surg = 0.0;    // surgery scale; 0 -> (n-1)/sqrt(Theta1 K)
  double eta_sharp = 0.0; // ND1 threshold; 0 -> 0.1/n
  double h_sharp = 0.0;   // ND1 threshold; 0 -> 20 n
  double Theta1 = 0.0;    // 0 -> max(4 h_sharp^2, (n-1)^2/(50 r^2 K))
  double Theta2 = 0.0;    // 0 -> 4 Theta1
  double Theta3 = 0.0;    // 0 -> 16 Theta1
  double theta_nd2 = 0.0; // ND2 window; 0 -> 1e4 (n-1)^2
  double cap_factor = 1.7;  // cap arclength = cap_factor * z_cut

  /// Fills the zero fields from the defaults above (in that order).
  void apply_defaults(int n, double K);
  std::vector<std::string> check(int n, double K) const;
};

/// Space-time record of a region modified by surgery, for the ND2
/// surgery-free test.
struct SurgeryFootprint {
  double t = 0;
  std::vector<Eigen::Vector3d> points;  // cut points and cap tips
};

struct NeckRegion {
  int first = 0, last = 0;  // inclusive node interval (wraps on loops)
  int center = 0;
  double r0 = 0;            // (n-1)/H(center)
  double H_center = 0;
  std::array<double, 3> Lambda{0, 0, 0};  // quality maxima, k = 0,1,2
  bool quality_ok = false;
  bool partial_window = false;   // time or space window truncated
  bool covers_component = false;
  bool surgery_free = true;      // ND2
};

struct SurgeryEvent {
  double t = 0;
  int component_id = 0;
  bool loop_component = false;
  double area_before = 0, area_after = 0;
  double fplus_before = 0, fplus_after = 0;  // max over the modified region
  double fplus_caps = 0;                     // max over cap nodes
  double cut_H_left = 0, cut_H_right = 0;
  double r_used = 0;
  int retries = 0;
  int pieces = 0;
};

enum class TopologyTag { Sphere, LoopProduct };

/// Open arc (both endpoints on the axis) -> S^n; closed loop -> S^1 x
/// S^{n-1}.  Throws std::runtime_error on a malformed component.
TopologyTag classify_component(const ProfileCurve& p);

struct TopologyLedger {
  int initial_components = 1;
  int splits = 0;
  int discards_sphere = 0;
  int discards_loop = 0;
  int loop_surgeries = 0;
  int live_components = 1;

  bool reconciles() const {
    return initial_components + splits - discards_sphere - discards_loop ==
           live_components;
  }
  /// "S^n" when every split produced spheres, otherwise a connected sum of
  /// N = discards_loop + loop_surgeries copies of S^1 x S^{n-1}.
  std::string classification(int n) const;
};

/// Quality numbers Lambda_{r0,k,eps} for k = 0,1,2 over the space-time
/// window (truncated to the available history and to the candidate
/// interval; truncation sets *partial).
std::array<double, 3> neck_quality(const FlowState& st, int n,
                                   const NeckRegion& cand,
                                   const SurgeryParams& sp, bool* partial);

/// Maximal ND1 intervals passing ND2 and the quality check; empty when no
/// node qualifies.  Centers sit at the max-H node of each interval.
std::vector<NeckRegion> detect_necks(const FlowState& st, int n,
                                     const SurgeryParams& sp,
                                     const std::vector<SurgeryFootprint>& past);

struct SurgeryOutcome {
  std::vector<ProfileCurve> pieces;
  SurgeryEvent event;
  SurgeryFootprint footprint;
};

/// Standard surgery on the neck: excises the middle of the surgery-eligible
/// sub-interval (H^2 >= Theta1 K) and attaches quintic caps built in the
/// rescaled tangent-space picture, then verifies
///   (a) max f_+ does not increase on the modified region, f_+ = 0 on caps,
///   (b) strict pinching on every node of every piece,
///   (c) strict area decrease,
/// retrying with r halved up to 3 times.  Throws std::runtime_error on
/// retry exhaustion or a trigger-band violation.
SurgeryOutcome perform_surgery(const ProfileCurve& comp, int component_id,
                               const NeckRegion& neck, const FlowParams& prm,
                               const DerivedConstants& dc,
                               const SurgeryParams& sp, double t);

}  // namespace mcfs
