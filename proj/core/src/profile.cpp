#include "mcfs/profile.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mcfs {

namespace {
constexpr double kPi = 3.14159265358979323846;

double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     double rho) {
  // stable for both small and near-pi angles
  const double c = a.dot(b) / (rho * rho);
  const double s = a.cross(b).norm() / (rho * rho);
  return std::atan2(s, c);
}

// Natural (open) or periodic (closed) cubic spline through y vs x.
// Returns second derivatives at the knots.
std::vector<double> spline_second_derivs(const std::vector<double>& x,
                                         const std::vector<double>& y,
                                         bool periodic, double period) {
  const int n = static_cast<int>(x.size());
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;

  if (!periodic) {
    // tridiagonal solve, natural boundary conditions
    std::vector<double> a(n, 0), b(n, 0), c(n, 0), d(n, 0);
    b[0] = 1;
    b[n - 1] = 1;
    for (int i = 1; i + 1 < n; ++i) {
      const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
      a[i] = h0 / 6;
      b[i] = (h0 + h1) / 3;
      c[i] = h1 / 6;
      d[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    for (int i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    m[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
    return m;
  }

  // periodic: cyclic tridiagonal via Sherman-Morrison
  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) {
    const double x1 = (i + 1 < n) ? x[i + 1] : x[0] + period;
    h[i] = x1 - x[i];
  }
  auto yy = [&](int i) { return y[(i % n + n) % n]; };
  std::vector<double> a(n), b(n), c(n), d(n);
  for (int i = 0; i < n; ++i) {
    const double hm = h[(i - 1 + n) % n], hp = h[i];
    a[i] = hm / 6;
    b[i] = (hm + hp) / 3;
    c[i] = hp / 6;
    d[i] = (yy(i + 1) - yy(i)) / hp - (yy(i) - yy(i - 1)) / hm;
  }
  // solve (T + corner terms) m = d
  const double alpha = a[0], beta = c[n - 1];
  const double gamma = -b[0];
  std::vector<double> bb(b);
  bb[0] -= gamma;
  bb[n - 1] -= alpha * beta / gamma;
  auto solve_tri = [&](std::vector<double> rhs) {
    std::vector<double> bp(bb), dp(std::move(rhs));
    for (int i = 1; i < n; ++i) {
      const double w = a[i] / bp[i - 1];
      bp[i] -= w * c[i - 1];
      dp[i] -= w * dp[i - 1];
    }
    std::vector<double> out(n);
    out[n - 1] = dp[n - 1] / bp[n - 1];
    for (int i = n - 2; i >= 0; --i)
      out[i] = (dp[i] - c[i] * out[i + 1]) / bp[i];
    return out;
  };
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = beta;
  auto sol_d = solve_tri(d);
  auto sol_u = solve_tri(u);
  const double fact =
      (sol_d[0] + alpha * sol_d[n - 1] / gamma) /
      (1.0 + sol_u[0] + alpha * sol_u[n - 1] / gamma);
  for (int i = 0; i < n; ++i) m[i] = sol_d[i] - fact * sol_u[i];
  return m;
}

double spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& m, bool periodic, double period,
                   double xq) {
  const int n = static_cast<int>(x.size());
  if (periodic) {
    xq = std::fmod(xq - x[0], period);
    if (xq < 0) xq += period;
    xq += x[0];
  }
  int lo = int(std::upper_bound(x.begin(), x.end(), xq) - x.begin()) - 1;
  lo = std::clamp(lo, 0, periodic ? n - 1 : n - 2);
  const int hi = (lo + 1) % n;
  const double x1 = (periodic && hi == 0) ? x[0] + period : x[hi];
  const double h = x1 - x[lo];
  const double A = (x1 - xq) / h, B = (xq - x[lo]) / h;
  return A * y[lo] + B * y[hi] +
         ((A * A * A - A) * m[lo] + (B * B * B - B) * m[hi]) * h * h / 6.0;
}

}  // namespace

double ProfileCurve::segment_length(int i) const {
  const int j = (i + 1) % size();
  return rho * angle_between(nodes[i], nodes[j], rho);
}

std::vector<double> ProfileCurve::cumulative_arclength() const {
  std::vector<double> s;
  s.reserve(size() + 1);
  s.push_back(0.0);
  for (int i = 0; i < segment_count(); ++i) s.push_back(s.back() + segment_length(i));
  return s;
}

double ProfileCurve::total_length() const {
  double L = 0;
  for (int i = 0; i < segment_count(); ++i) L += segment_length(i);
  return L;
}

double ProfileCurve::min_spacing() const {
  double h = std::numeric_limits<double>::infinity();
  for (int i = 0; i < segment_count(); ++i) h = std::min(h, segment_length(i));
  return h;
}

double ProfileCurve::max_spacing() const {
  double h = 0;
  for (int i = 0; i < segment_count(); ++i) h = std::max(h, segment_length(i));
  return h;
}

double ProfileCurve::min_z() const {
  double z = std::numeric_limits<double>::infinity();
  if (closed) {
    for (const auto& p : nodes) z = std::min(z, p.z());
  } else {
    // endpoints sit on the axis by construction
    for (int i = 1; i + 1 < size(); ++i) z = std::min(z, nodes[i].z());
  }
  return z;
}

void ProfileCurve::project_to_sphere() {
  for (auto& p : nodes) p *= rho / p.norm();
}

std::vector<std::string> ProfileCurve::check_invariants() const {
  std::vector<std::string> bad;
  if (size() < 4) {
    bad.push_back("profile needs at least 4 nodes");
    return bad;
  }
  for (int i = 0; i < size(); ++i) {
    const double r = std::abs(nodes[i].norm() - rho);
    if (r > 1e-10 * rho) {
      bad.push_back("node " + std::to_string(i) + " off the orbit sphere");
      break;
    }
  }
  for (int i = 0; i < size(); ++i) {
    if (nodes[i].z() < -1e-12 * rho) {
      bad.push_back("node " + std::to_string(i) + " has z < 0");
      break;
    }
  }
  if (!closed) {
    if (std::abs(nodes.front().z()) > 1e-12 * rho ||
        std::abs(nodes.back().z()) > 1e-12 * rho)
      bad.push_back("open arc endpoints must have z = 0");
    // orthogonal axis meeting: first segment must climb in z
    const double h0 = segment_length(0);
    const double hl = segment_length(size() - 2);
    if (nodes[1].z() < 0.5 * h0 || nodes[size() - 2].z() < 0.5 * hl)
      bad.push_back("profile does not meet the axis orthogonally");
  }
  if (max_spacing() > 2.0 * min_spacing() + 1e-12 * rho)
    bad.push_back("node spacing ratio exceeds 2 (regrid required)");
  return bad;
}

ProfileCurve make_geodesic_sphere_profile(double d, int N, double K) {
  const double rho = 1.0 / std::sqrt(K);
  if (!(d > 0 && d < kPi * rho))
    throw std::invalid_argument("geodesic sphere: d in (0, pi/sqrt(K))");
  const double a = d / rho;
  ProfileCurve p;
  p.rho = rho;
  p.closed = false;
  p.nodes.reserve(N);
  for (int j = 0; j < N; ++j) {
    const double phi = kPi * j / (N - 1);
    p.nodes.emplace_back(rho * std::cos(a), rho * std::sin(a) * std::cos(phi),
                         rho * std::sin(a) * std::sin(phi));
  }
  return p;
}

ProfileCurve make_tube_profile(double u, int N, double K) {
  const double rho = 1.0 / std::sqrt(K);
  if (!(u > 0 && u < kPi / 2))
    throw std::invalid_argument("tube: u in (0, pi/2)");
  const double r = rho * std::cos(u), s = rho * std::sin(u);
  ProfileCurve p;
  p.rho = rho;
  p.closed = true;
  p.nodes.reserve(N);
  // clockwise traversal orients the normal so that lambda_rot = sqrt(K) cot u
  for (int j = 0; j < N; ++j) {
    const double th = -2 * kPi * j / N;
    p.nodes.emplace_back(r * std::cos(th), r * std::sin(th), s);
  }
  return p;
}

ProfileCurve make_dumbbell_profile(double neck_theta, double bulb_theta,
                                   int N, double K, double neck_len,
                                   double trans_len) {
  if (!(neck_theta > 0 && neck_theta < bulb_theta && bulb_theta < kPi / 2))
    throw std::invalid_argument("dumbbell: need 0 < neck < bulb < pi/2");
  if (!(neck_len > 0 && trans_len > 0))
    throw std::invalid_argument("dumbbell: lengths must be positive");
  const double rho = 1.0 / std::sqrt(K);
  const double zb = rho * std::sin(bulb_theta);
  const double zn = rho * std::sin(neck_theta);

  // Height plan z(s), built from arcs that respect the tangent budget
  // rho |z'| <= sqrt(rho^2 - z^2) on the orbit sphere:
  //   cap       z = zb sin(s/zb)           (exact round bulb, z' = 1 at axis)
  //   descent   quintic zb -> zn           (C^2 matched at both joins)
  //   bridge    z = zn                     (exact thin tube)
  // mirrored around the waist.  The azimuth comes from arclength.
  const double s_cap = 0.5 * kPi * zb;
  const double w = trans_len * rho;
  const double s_plateau = neck_len * rho;

  // quintic for the descent, solved in normalized (s/w, z/zb) variables so
  // the system is dimensionless: value/slope/curvature matched to the cap
  // summit (1, 0, -w^2/zb^2) and to the bridge (zn/zb, 0, 0)
  Eigen::Matrix<double, 6, 6> M;
  Eigen::Matrix<double, 6, 1> rhs;
  for (int repr = 0; repr < 2; ++repr) {
    const double s0 = repr;
    const int row = 3 * repr;
    double pw = 1;
    for (int i = 0; i < 6; ++i) {
      M(row, i) = pw;
      M(row + 1, i) = i >= 1 ? i * (i == 1 ? 1.0 : std::pow(s0, i - 1)) : 0.0;
      M(row + 2, i) =
          i >= 2 ? i * (i - 1) * (i == 2 ? 1.0 : std::pow(s0, i - 2)) : 0.0;
      pw *= s0;
    }
  }
  rhs << 1.0, 0.0, -(w * w) / (zb * zb), zn / zb, 0.0, 0.0;
  const Eigen::Matrix<double, 6, 1> c = M.fullPivLu().solve(rhs);
  auto quintic = [&](double s) {
    const double sh = s / w;
    double v = 0, pw = 1;
    for (int i = 0; i < 6; ++i) {
      v += c(i) * pw;
      pw *= sh;
    }
    return zb * v;
  };

  const double S_half = s_cap + w + 0.5 * s_plateau;
  const double S = 2 * S_half;
  auto height = [&](double s) {
    if (s > S_half) s = S - s;
    if (s <= s_cap) return zb * std::sin(s / zb);
    if (s <= s_cap + w) return quintic(s - s_cap);
    return zn;
  };

  // integrate the azimuth: (rho^2 - z^2) phi'^2 = 1 - rho^2 z'^2/(rho^2-z^2)
  const int sub = 40 * N;
  const double ds = S / sub;
  std::vector<Eigen::Vector3d> fine;
  fine.reserve(sub + 1);
  double phi = 0;
  auto push = [&](double s, double ph) {
    const double z = height(s);
    const double wrad = std::sqrt(std::max(rho * rho - z * z, 0.0));
    fine.emplace_back(wrad * std::cos(ph), wrad * std::sin(ph), z);
  };
  push(0, 0);
  auto dphi = [&](double s) {
    const double z = height(s);
    const double dz = (height(std::min(s + 0.5 * ds, S)) -
                       height(std::max(s - 0.5 * ds, 0.0))) /
                      (std::min(s + 0.5 * ds, S) - std::max(s - 0.5 * ds, 0.0));
    const double w2 = rho * rho - z * z;
    return std::sqrt(std::max(w2 - rho * rho * dz * dz, 0.0)) / w2;
  };
  // clockwise azimuth orients the normal like the tube generator, giving
  // the necks positive mean curvature
  for (int j = 1; j <= sub; ++j) {
    const double s0 = (j - 1) * ds, s1 = j * ds;
    phi -= 0.5 * (dphi(s0) + dphi(s1)) * ds;
    push(s1, phi);
  }
  fine.front().z() = 0;
  fine.back().z() = 0;

  ProfileCurve p;
  p.rho = rho;
  p.closed = false;
  p.nodes = std::move(fine);
  p.project_to_sphere();
  return regrid(p, S / (N - 1));
}

ProfileCurve make_equator_profile(int N, double K, double amp, int mode) {
  const double rho = 1.0 / std::sqrt(K);
  ProfileCurve p;
  p.rho = rho;
  p.closed = false;
  p.nodes.reserve(N);
  for (int j = 0; j < N; ++j) {
    const double phi = kPi * j / (N - 1);
    const double s2 = std::sin(phi) * std::sin(phi);
    Eigen::Vector3d q(amp * s2 * std::cos(mode * phi), std::cos(phi),
                      std::sin(phi));
    p.nodes.push_back(rho * q.normalized());
  }
  if (amp != 0.0) return regrid(p);
  return p;
}

ProfileCurve profile_from_table(const std::string& text, double K,
                                bool closed) {
  ProfileCurve p;
  p.rho = 1.0 / std::sqrt(K);
  p.closed = closed;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double xi, x, y, z;
    if (ls >> xi >> x >> y >> z) p.nodes.emplace_back(x, y, z);
  }
  if (p.size() < 4)
    throw std::invalid_argument("profile table: fewer than 4 usable rows");
  p.project_to_sphere();
  return p;
}

ProfileCurve regrid(const ProfileCurve& p, double target_h) {
  const int N = p.size();
  if (N < 4) throw std::invalid_argument("regrid: profile too small");
  auto s = p.cumulative_arclength();
  const double L = s.back();

  int n_new = target_h > 0 ? std::max(8, (int)std::lround(L / target_h))
                           : (p.closed ? N : N);
  if (p.closed) n_new = std::max(n_new, 16);

  // spline knots; for closed curves the wrap point duplicates node 0
  std::vector<double> sx(s.begin(), s.begin() + N);
  std::vector<std::vector<double>> coord(3, std::vector<double>(N));
  for (int i = 0; i < N; ++i)
    for (int c = 0; c < 3; ++c) coord[c][i] = p.nodes[i][c];

  std::vector<std::vector<double>> m(3);
  for (int c = 0; c < 3; ++c)
    m[c] = spline_second_derivs(sx, coord[c], p.closed, L);

  ProfileCurve out;
  out.rho = p.rho;
  out.closed = p.closed;
  out.nodes.reserve(n_new);
  const int samples = p.closed ? n_new : n_new;
  for (int j = 0; j < samples; ++j) {
    const double sq = p.closed ? L * j / n_new
                               : L * j / (n_new - 1);
    Eigen::Vector3d q;
    for (int c = 0; c < 3; ++c)
      q[c] = spline_eval(sx, coord[c], m[c], p.closed, L, sq);
    out.nodes.push_back(q);
  }
  if (!p.closed) {
    out.nodes.front() = p.nodes.front();
    out.nodes.back() = p.nodes.back();
  }
  out.project_to_sphere();
  // z >= 0 can be violated at roundoff level next to the axis
  for (auto& q : out.nodes)
    if (q.z() < 0 && q.z() > -1e-9 * out.rho) q.z() = std::abs(q.z());
  return out;
}

bool self_intersects(const ProfileCurve& p) {
  const int ns = p.segment_count();
  auto seg = [&](int i) {
    return std::pair<Eigen::Vector3d, Eigen::Vector3d>(
        p.nodes[i], p.nodes[(i + 1) % p.size()]);
  };
  const double tol = 1e-6 * p.rho;
  for (int i = 0; i < ns; ++i) {
    for (int j = i + 2; j < ns; ++j) {
      if (p.closed && i == 0 && j == ns - 1) continue;  // adjacent via wrap
      auto [a0, a1] = seg(i);
      auto [b0, b1] = seg(j);
      // closest distance between chords
      const Eigen::Vector3d d1 = a1 - a0, d2 = b1 - b0, r = a0 - b0;
      const double A = d1.dot(d1), B = d1.dot(d2), C = d2.dot(d2);
      const double D = d1.dot(r), E = d2.dot(r);
      const double den = A * C - B * B;
      double t1 = 0, t2 = 0;
      if (den > 1e-30) {
        t1 = std::clamp((B * E - C * D) / den, 0.0, 1.0);
        t2 = std::clamp((A * E - B * D) / den, 0.0, 1.0);
      } else {
        t2 = std::clamp(E / C, 0.0, 1.0);
      }
      const double dist = (a0 + t1 * d1 - b0 - t2 * d2).norm();
      if (dist < tol) return true;
    }
  }
  return false;
}

double unit_sphere_area(int m) {
  return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

double area(const ProfileCurve& p, int n) {
  const double w = unit_sphere_area(n - 1);
  double integral = 0;
  for (int i = 0; i < p.segment_count(); ++i) {
    const int j = (i + 1) % p.size();
    const double za = std::pow(p.nodes[i].z(), n - 1);
    const double zb = std::pow(p.nodes[j].z(), n - 1);
    integral += 0.5 * (za + zb) * p.segment_length(i);
  }
  return w * integral;
}

std::vector<Eigen::VectorXd> embed_profile(
    const ProfileCurve& p, const std::vector<Eigen::VectorXd>& orbit_samples) {
  std::vector<Eigen::VectorXd> out;
  if (orbit_samples.empty()) return out;
  const int nm1 = static_cast<int>(orbit_samples.front().size());
  out.reserve(p.size() * orbit_samples.size());
  for (const auto& q : p.nodes) {
    for (const auto& w : orbit_samples) {
      Eigen::VectorXd X(2 + nm1);
      X[0] = q.x();
      X[1] = q.y();
      X.tail(nm1) = q.z() * w;
      out.push_back(std::move(X));
    }
  }
  return out;
}

}  // namespace mcfs
