#include "mcfs/inscribed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcfs {

InscribedResult inscribed_exscribed(const ProfileCurve& p, int /*n*/,
                                    const ProfileGeometry& g) {
  if (self_intersects(p))
    throw std::invalid_argument("inscribed_exscribed: non-embedded profile");

  const int N = p.size();
  const double rho2 = p.rho * p.rho;
  InscribedResult out;
  out.kbar.resize(N);
  out.klow.resize(N);

  for (int i = 0; i < N; ++i) {
    const Eigen::Vector3d& pi = p.nodes[i];
    const Eigen::Vector3d& nh = g.normal[i];
    const double nx = nh.x(), ny = nh.y(), nz = nh.z();
    const double zi = pi.z();

    double hi = g.node[i].lambda_max();
    double lo = g.node[i].lambda_min();

    for (int j = 0; j < N; ++j) {
      const Eigen::Vector3d& q = p.nodes[j];
      for (int side = 0; side < 2; ++side) {
        const double c = side == 0 ? 1.0 : -1.0;  // cos of the orbit angle
        if (j == i && c > 0) continue;            // q == p
        const double num = -2.0 * (q.x() * nx + q.y() * ny + q.z() * nz * c);
        const double den =
            2.0 * rho2 - 2.0 * (pi.x() * q.x() + pi.y() * q.y() + zi * q.z() * c);
        if (den < 1e-14 * rho2) continue;
        const double ratio = num / den;
        hi = std::max(hi, ratio);
        lo = std::min(lo, ratio);
      }
    }
    out.kbar[i] = hi;
    out.klow[i] = lo;
  }
  return out;
}

InscribedResult inscribed_exscribed(const ProfileCurve& p, int n) {
  ProfileGeometry g = profile_curvatures(p, n);
  return inscribed_exscribed(p, n, g);
}

}  // namespace mcfs
