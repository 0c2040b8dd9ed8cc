#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "mcfs/profile.hpp"

namespace mcfs {

/// Independent curvature oracle: principal curvatures computed purely by
/// finite differences of an explicit embedding chart into R^{n+2}, via the
/// first and second fundamental forms and a generalized symmetric
/// eigensolve.  Never calls the analytic curvature formulas it is used to
/// check; the only analytic input is an orientation hint for the normal.
struct OracleResult {
  std::vector<double> lambda;  // sorted ascending
  double H = 0;
  Eigen::VectorXd normal;
};

using EmbeddingChart =
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Shape operator eigenvalues at chart parameter `base`.  `orient_hint`
/// fixes the sign of the unit normal (empty hint leaves the QR sign).
/// Fourth-order centered differences with step eps.
OracleResult fd_shape_operator(const EmbeddingChart& chart, int n_params,
                               int ambient_dim, const Eigen::VectorXd& base,
                               const Eigen::VectorXd& orient_hint,
                               double eps = 1e-2);

/// Oracle for S^k(cos u /sqrtK) x S^{n-k}(sin u /sqrtK) from the explicit
/// product embedding.
OracleResult fd_product_sphere(int n, int k, double u, double K,
                               double eps = 1e-2);

/// Orientation-free du/dt of the product-sphere family from the mean
/// curvature vector (settles the sign of the reduced ODE).
double fd_product_sphere_dudt(int n, int k, double u, double K,
                              double eps = 1e-2);

/// Oracle at an interior profile node: the local curve is interpolated with
/// a degree-6 Lagrange polynomial through 7 nodes, the surface chart is
/// (arclength, orbit chart), and everything is projected back onto the
/// ambient sphere.  Requires 3 nodes on each side of `node`.
OracleResult fd_profile_point(const ProfileCurve& p, int node, int n,
                              const Eigen::Vector3d& profile_normal_hint);

}  // namespace mcfs
