#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace mcfs {

/// Profile curve of an SO(n)-invariant hypersurface of the sphere of
/// curvature K = 1/rho^2, living on the orbit 2-sphere
///   { (x, y, z) : x^2 + y^2 + z^2 = rho^2, z >= 0 }.
/// z is the radius of the S^{n-1} orbit through a point.  Open arcs have both
/// endpoints on the axis {z = 0} and meet it orthogonally; closed loops never
/// touch the axis.  Node order fixes the co-orientation: the profile normal is
/// (tangent x position)/rho, chosen by the generators so that a shrinking
/// geodesic sphere has positive mean curvature.
struct ProfileCurve {
  std::vector<Eigen::Vector3d> nodes;
  bool closed = false;
  double rho = 1.0;

  int size() const { return static_cast<int>(nodes.size()); }
  double K() const { return 1.0 / (rho * rho); }
  int segment_count() const { return closed ? size() : size() - 1; }

  /// Geodesic length of segment i -> i+1 (wraps when closed).
  double segment_length(int i) const;
  /// Cumulative arclength; size() entries for open arcs, size()+1 (with the
  /// closing segment) for loops.
  std::vector<double> cumulative_arclength() const;
  double total_length() const;
  double min_spacing() const;
  double max_spacing() const;
  double min_z() const;

  void project_to_sphere();

  /// One message per violated structural invariant; empty means valid.
  std::vector<std::string> check_invariants() const;
};

ProfileCurve make_geodesic_sphere_profile(double d, int N, double K);
ProfileCurve make_tube_profile(double u, int N, double K);

/// Axis-aligned dumbbell: two round bulb caps of geodesic radius bulb_theta
/// about points of the axis, joined through quintic shoulders of length
/// trans_len * rho to a thin tube bridge of orbit radius sin(neck_theta)/
/// sqrt(K) and length neck_len * rho.  Gentle shoulders keep the quadratic
/// pinching condition while the bridge is a genuine neck.
ProfileCurve make_dumbbell_profile(double neck_theta, double bulb_theta,
                                   int N, double K, double neck_len = 2.0,
                                   double trans_len = 1.4);

/// Equator profile with an axis-compatible perturbation of amplitude amp:
/// offset amp * sin^2(phi) cos(m phi) in the x-direction (m odd keeps the
/// surface area-bisecting, so the flow exists for all time).
ProfileCurve make_equator_profile(int N, double K, double amp = 0.0,
                                  int mode = 1);

/// Parses a whitespace table with rows "xi x y z" (xi ignored, kept for
/// plotting round trips).  Points are projected onto the orbit sphere.
ProfileCurve profile_from_table(const std::string& text, double K,
                                bool closed = false);

/// Arclength-uniform resample through a cubic spline, reprojected to the
/// sphere.  target_h == 0 keeps the node count; otherwise the count is
/// round(L / target_h) clamped below at 8.
ProfileCurve regrid(const ProfileCurve& p, double target_h = 0.0);

/// O(N^2) chordal segment-pair test (adjacent pairs excluded).
bool self_intersects(const ProfileCurve& p);

/// Area of the unit m-sphere, 2 pi^{(m+1)/2} / Gamma((m+1)/2).
double unit_sphere_area(int m);

/// Hypersurface area: omega_{n-1} * integral of z^{n-1} d(arclength),
/// trapezoid rule over segments.
double area(const ProfileCurve& p, int n);

/// Points (x, y, z*omega) in R^{n+2} for the given orbit samples on S^{n-1}.
std::vector<Eigen::VectorXd> embed_profile(
    const ProfileCurve& p, const std::vector<Eigen::VectorXd>& orbit_samples);

}  // namespace mcfs
