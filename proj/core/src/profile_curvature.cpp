#include "mcfs/profile_curvature.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>

namespace mcfs {

namespace {

// Signed principal curvature of the profile direction from the circumcircle
// through three consecutive points on the orbit sphere.  The circle at polar
// angle theta_c about the plane pole has geodesic curvature cot(theta_c)/rho
// toward the pole; the Weingarten convention flips the bending sign.
double circumcircle_kappa(const Eigen::Vector3d& pm, const Eigen::Vector3d& p,
                          const Eigen::Vector3d& pp, const Eigen::Vector3d& nh,
                          double rho) {
  const Eigen::Vector3d c1 = p - pm, c2 = pp - p;
  Eigen::Vector3d m = c1.cross(c2);
  const double mn = m.norm();
  if (mn < 1e-14 * c1.norm() * c2.norm()) return 0.0;  // great circle
  m /= mn;
  const double e = m.dot(p);
  const double r2 = rho * rho - e * e;
  if (r2 <= 0) throw std::runtime_error("degenerate circumcircle");
  Eigen::Vector3d toward = m - (e / (rho * rho)) * p;
  const double tn = toward.norm();
  if (tn < 1e-14) return 0.0;
  toward /= tn;
  const double kg_toward = e / (rho * std::sqrt(r2));
  const double sign = toward.dot(nh) > 0 ? 1.0 : -1.0;
  return -kg_toward * sign;
}

// nonuniform centered first/second differences
double d1(double fm, double f0, double fp, double hm, double hp) {
  return (hm * hm * fp - hp * hp * fm + (hp * hp - hm * hm) * f0) /
         (hm * hp * (hm + hp));
}
double d2(double fm, double f0, double fp, double hm, double hp) {
  return 2 * (hm * fp + hp * fm - (hm + hp) * f0) / (hm * hp * (hm + hp));
}

}  // namespace

PrincipalCurvatures NodeCurvature::principal(int n) const {
  std::vector<double> v;
  v.reserve(n);
  v.push_back(kappa_prof);
  for (int i = 0; i < n - 1; ++i) v.push_back(lambda_rot);
  return PrincipalCurvatures(std::move(v));
}

ProfileGeometry profile_curvatures(const ProfileCurve& p, int n) {
  const int N = p.size();
  if (N < 4) throw std::invalid_argument("profile_curvatures: too few nodes");
  const double rho = p.rho;

  ProfileGeometry g;
  g.node.resize(N);
  g.tangent.resize(N);
  g.normal.resize(N);
  g.arclength = p.cumulative_arclength();
  g.arclength.resize(N);

  auto ghost_front = Eigen::Vector3d(p.nodes[1].x(), p.nodes[1].y(),
                                     -p.nodes[1].z());
  auto ghost_back = Eigen::Vector3d(p.nodes[N - 2].x(), p.nodes[N - 2].y(),
                                    -p.nodes[N - 2].z());

  auto node_at = [&](int i) -> Eigen::Vector3d {
    if (p.closed) return p.nodes[(i % N + N) % N];
    if (i == -1) return ghost_front;
    if (i == N) return ghost_back;
    return p.nodes[i];
  };

  for (int i = 0; i < N; ++i) {
    const Eigen::Vector3d pm = node_at(i - 1), pc = p.nodes[i],
                          pp = node_at(i + 1);
    Eigen::Vector3d t = pp - pm;
    const double tn = t.norm();
    if (tn < 1e-14 * rho)
      throw std::runtime_error("profile_curvatures: degenerate spacing");
    t /= tn;
    Eigen::Vector3d nh = t.cross(pc);
    nh /= nh.norm();
    g.tangent[i] = t;
    g.normal[i] = nh;

    NodeCurvature& nc = g.node[i];
    nc.z = pc.z();
    nc.kappa_prof = circumcircle_kappa(pm, pc, pp, nh, rho);
  }

  const bool open = !p.closed;
  for (int i = 0; i < N; ++i) {
    NodeCurvature& nc = g.node[i];
    if (open && (i == 0 || i == N - 1)) continue;  // filled below
    if (nc.z < 1e-6 * rho) {
      nc.near_pinch = true;
      nc.lambda_rot = g.normal[i].z() / std::max(nc.z, 1e-12 * rho);
    } else {
      nc.lambda_rot = g.normal[i].z() / nc.z;
    }
  }

  if (open) {
    // one-sided quadratic extrapolation of lambda_rot onto the axis
    auto extrapolate = [&](int i0, int i1, int i2, int i3) {
      const double s0 = g.arclength[i0], s1 = g.arclength[i1],
                   s2 = g.arclength[i2], s3 = g.arclength[i3];
      const double l1 = g.node[i1].lambda_rot, l2 = g.node[i2].lambda_rot,
                   l3 = g.node[i3].lambda_rot;
      const double w1 = (s0 - s2) * (s0 - s3) / ((s1 - s2) * (s1 - s3));
      const double w2 = (s0 - s1) * (s0 - s3) / ((s2 - s1) * (s2 - s3));
      const double w3 = (s0 - s1) * (s0 - s2) / ((s3 - s1) * (s3 - s2));
      g.node[i0].lambda_rot = w1 * l1 + w2 * l2 + w3 * l3;
    };
    extrapolate(0, 1, 2, 3);
    extrapolate(N - 1, N - 2, N - 3, N - 4);
  }

  for (int i = 0; i < N; ++i) {
    NodeCurvature& nc = g.node[i];
    nc.H = (n - 1) * nc.lambda_rot + nc.kappa_prof;
    nc.A2 = (n - 1) * nc.lambda_rot * nc.lambda_rot +
            nc.kappa_prof * nc.kappa_prof;
  }
  return g;
}

void finite_diff_derivatives(const ProfileCurve& p, int n,
                             ProfileGeometry& g) {
  const int N = p.size();
  const auto& s = g.arclength;
  const double L = p.total_length();

  auto spacing = [&](int i) {
    // distance from node i to node i+1 along the curve
    if (p.closed) return p.segment_length((i % N + N) % N);
    return s[i + 1] - s[i];
  };

  auto value = [&](const std::vector<double>& f, int i, bool even) -> double {
    if (p.closed) return f[(i % N + N) % N];
    if (i == -1) return even ? f[1] : -f[1];
    if (i == N) return even ? f[N - 2] : -f[N - 2];
    return f[i];
  };

  (void)L;
  std::vector<double> lam(N), kap(N), Hn(N);
  for (int i = 0; i < N; ++i) {
    lam[i] = g.node[i].lambda_rot;
    kap[i] = g.node[i].kappa_prof;
    Hn[i] = g.node[i].H;
  }

  for (int i = 0; i < N; ++i) {
    double hm, hp;
    if (p.closed) {
      hm = spacing(i - 1);
      hp = spacing(i);
    } else if (i == 0) {
      hm = hp = spacing(0);
    } else if (i == N - 1) {
      hm = hp = spacing(N - 2);
    } else {
      hm = spacing(i - 1);
      hp = spacing(i);
    }
    // curvature functions are even across the poles
    const double lm = value(lam, i - 1, true), lp = value(lam, i + 1, true);
    const double km = value(kap, i - 1, true), kp = value(kap, i + 1, true);
    const double dl = d1(lm, lam[i], lp, hm, hp);
    const double dk = d1(km, kap[i], kp, hm, hp);
    const double dH = d1(value(Hn, i - 1, true), Hn[i],
                         value(Hn, i + 1, true), hm, hp);
    const double ddl = d2(lm, lam[i], lp, hm, hp);
    const double ddk = d2(km, kap[i], kp, hm, hp);

    NodeCurvature& nc = g.node[i];
    nc.grad_H = std::abs(dH);
    nc.grad_A = std::sqrt(dk * dk + 3.0 * (n - 1) * dl * dl);
    nc.hess_A = std::sqrt(ddk * ddk + 3.0 * (n - 1) * ddl * ddl);
  }
}

double codazzi_residual(const ProfileCurve& p, int /*n*/,
                        const ProfileGeometry& g) {
  const int N = p.size();
  const auto& s = g.arclength;
  const double K = p.K();
  double worst = 0;
  const int lo = p.closed ? 0 : 2;
  const int hi = p.closed ? N : N - 2;
  for (int i = lo; i < hi; ++i) {
    const int im = (i - 1 + N) % N, ip = (i + 1) % N;
    const double hm = p.closed ? p.segment_length(im) : s[i] - s[i - 1];
    const double hp = p.closed ? p.segment_length(i) : s[i + 1] - s[i];
    const double z = g.node[i].z;
    if (z < 0.05 * p.rho) continue;  // relation is 0/0-like near the axis
    const double dl = d1(g.node[im].lambda_rot, g.node[i].lambda_rot,
                         g.node[ip].lambda_rot, hm, hp);
    const double dz = d1(g.node[im].z, g.node[i].z, g.node[ip].z, hm, hp);
    const double coupling =
        (g.node[i].kappa_prof - g.node[i].lambda_rot) * dz / z;
    const double denom = std::abs(dl) + std::abs(coupling) +
                         std::pow(g.node[i].A2 + K, 0.75);
    worst = std::max(worst, std::abs(dl - coupling) / denom);
  }
  return worst;
}

std::vector<double> profile_laplacian(const ProfileCurve& p, int n,
                                      const std::vector<double>& f) {
  const int N = p.size();
  const auto s = p.cumulative_arclength();
  std::vector<double> out(N, 0.0);

  for (int i = 0; i < N; ++i) {
    if (!p.closed && (i == 0 || i == N - 1)) {
      const double h = (i == 0) ? s[1] - s[0] : s[N - 1] - s[N - 2];
      const double f1 = (i == 0) ? f[1] : f[N - 2];
      out[i] = n * 2 * (f1 - f[i]) / (h * h);
      continue;
    }
    const int im = (i - 1 + N) % N, ip = (i + 1) % N;
    const double hm = p.closed ? p.segment_length(im) : s[i] - s[i - 1];
    const double hp = p.closed ? p.segment_length(i) : s[i + 1] - s[i];
    const double df = d1(f[im], f[i], f[ip], hm, hp);
    const double ddf = d2(f[im], f[i], f[ip], hm, hp);
    const double z = p.nodes[i].z();
    const double dz = d1(p.nodes[im].z(), z, p.nodes[ip].z(), hm, hp);
    out[i] = ddf + (n - 1) * (dz / std::max(z, 1e-12 * p.rho)) * df;
  }
  return out;
}

}  // namespace mcfs
