#pragma once

#include <Eigen/Core>
#include <vector>

#include "mcfs/geometry.hpp"
#include "mcfs/profile.hpp"

namespace mcfs {

/// Pointwise curvature data of the generated hypersurface at one profile
/// node.  lambda_rot has multiplicity n-1, kappa_prof multiplicity 1, so
///   H = (n-1) lambda_rot + kappa_prof,
///   |A|^2 = (n-1) lambda_rot^2 + kappa_prof^2.
struct NodeCurvature {
  double lambda_rot = 0;
  double kappa_prof = 0;
  double H = 0;
  double A2 = 0;
  double z = 0;
  // first-derivative magnitudes along the profile (filled by
  // finite_diff_derivatives; zero until then)
  double grad_H = 0;
  double grad_A = 0;   // |grad A|
  double hess_A = 0;   // |grad^2 A|
  bool near_pinch = false;

  double lambda_min() const { return std::min(lambda_rot, kappa_prof); }
  double lambda_max() const { return std::max(lambda_rot, kappa_prof); }
  PrincipalCurvatures principal(int n) const;
};

struct ProfileGeometry {
  std::vector<NodeCurvature> node;
  std::vector<Eigen::Vector3d> tangent;  // unit, along traversal
  std::vector<Eigen::Vector3d> normal;   // (tangent x position)/rho
  std::vector<double> arclength;         // cumulative, size() entries
};

/// Curvatures at every node.  Interior nodes use the circumcircle through
/// three consecutive nodes for kappa_prof (exact on circular profiles) and
/// normal_z / z for lambda_rot.  Axis endpoints use reflection ghosts for
/// kappa_prof and a one-sided quadratic fit for lambda_rot.  Nodes with
/// z < 1e-6 rho are flagged near_pinch instead of erroring.
ProfileGeometry profile_curvatures(const ProfileCurve& p, int n);

/// Fills grad_H, grad_A, hess_A by centered differences along arclength.
/// For the rotationally symmetric class the full norms reduce to
///   |grad A|^2   = (d kappa)^2 + 3(n-1) (d lambda)^2,
///   |grad^2 A|^2 = (dd kappa)^2 + 3(n-1) (dd lambda)^2,
/// where d lambda coincides with (kappa - lambda) z'/z by the Codazzi
/// relation (cross-checked by codazzi_residual below).  Even reflection is
/// used at axis endpoints.
void finite_diff_derivatives(const ProfileCurve& p, int n, ProfileGeometry& g);

/// Max over interior nodes of |d lambda_rot - (kappa - lambda) z'/z|
/// normalized by (|d lambda_rot| + |A|^{3/2} + K^{3/4}...), used to validate
/// the derivative discretization against the Codazzi relation.
double codazzi_residual(const ProfileCurve& p, int n,
                        const ProfileGeometry& g);

/// Warped-product Laplacian of a per-node scalar:
/// (Delta f)_i = f'' + (n-1) (z'/z) f', with the axis limit n f'' at
/// open-arc endpoints.
std::vector<double> profile_laplacian(const ProfileCurve& p, int n,
                                      const std::vector<double>& f);

}  // namespace mcfs
