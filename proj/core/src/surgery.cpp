#include "mcfs/surgery.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mcfs {

void SurgeryParams::apply_defaults(int n, double K) {
  if (eta_sharp <= 0) eta_sharp = 0.1 / n;
  if (h_sharp <= 0) h_sharp = 20.0 * n;
  if (Theta1 <= 0) {
    Theta1 = 4.0 * h_sharp * h_sharp;
    if (r_surg > 0)
      Theta1 = std::max(Theta1, (n - 1.0) * (n - 1.0) / (50.0 * r_surg * r_surg * K));
  }
  if (Theta2 <= 0) Theta2 = 4.0 * Theta1;
  if (Theta3 <= 0) Theta3 = 16.0 * Theta1;
  if (r_surg <= 0) r_surg = (n - 1.0) / std::sqrt(Theta1 * K);
  if (theta_nd2 <= 0) theta_nd2 = 1e4 * (n - 1.0) * (n - 1.0);
}

std::vector<std::string> SurgeryParams::check(int n, double K) const {
  std::vector<std::string> bad;
  if (!(epsilon > 0 && epsilon <= 0.01))
    bad.push_back("surgery epsilon must lie in (0, 1/100]");
  if (!(L >= 10)) bad.push_back("neck length L >= 10 required");
  if (!(Theta1 > 0 && Theta1 < Theta2 && Theta2 < Theta3))
    bad.push_back("Theta1 < Theta2 < Theta3 required");
  if (!(r_surg > 0)) bad.push_back("r_surg > 0 required");
  const double lhs = (n - 1.0) * (n - 1.0) / (100.0 * r_surg * r_surg);
  if (lhs > Theta1 * K)
    bad.push_back("trigger band inconsistent: (n-1)^2/(100 r^2) > Theta1 K");
  if (k_neck < 0 || k_neck > 2)
    bad.push_back("k_neck beyond the grid's derivative order (0..2)");
  return bad;
}

TopologyTag classify_component(const ProfileCurve& p) {
  if (p.closed) {
    if (p.min_z() <= 0)
      throw std::runtime_error("classify_component: loop touches the axis");
    return TopologyTag::LoopProduct;
  }
  const double tol = 1e-9 * p.rho;
  const bool a = std::abs(p.nodes.front().z()) <= tol;
  const bool b = std::abs(p.nodes.back().z()) <= tol;
  if (a && b) return TopologyTag::Sphere;
  throw std::runtime_error(
      "classify_component: open arc with only one axis endpoint");
}

std::string TopologyLedger::classification(int n) const {
  const int N = discards_loop + loop_surgeries;
  if (N == 0) return "S^n";
  std::ostringstream os;
  if (N == 1)
    os << "S^1 x S^" << n - 1;
  else
    os << "#_" << N << " (S^1 x S^" << n - 1 << ")";
  return os.str();
}

namespace {

// distance measured along the profile at one history frame, from the node
// nearest to a reference position
int nearest_node(const std::vector<Eigen::Vector3d>& pos,
                 const Eigen::Vector3d& ref) {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pos.size(); ++i) {
    const double d = (pos[i] - ref).squaredNorm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

std::array<double, 3> neck_quality(const FlowState& st, int n,
                                   const NeckRegion& cand,
                                   const SurgeryParams& sp, bool* partial) {
  const double r0 = cand.r0;
  const double t0 = st.t;
  const double t_lo = t0 - 1e4 * r0 * r0;
  const double ball = r0 / sp.epsilon;
  const Eigen::Vector3d center_pos = st.profile.nodes[cand.center];

  std::array<double, 3> Lam{0, 0, 0};
  bool truncated = false;

  // Desk-scale truncation: the full curvature ball eps^-1 r0 is far larger
  // than any neck the grid can represent, so the scan is capped at the
  // surgery-relevant neighborhood (L+2) r0 -- the same scale ND2 protects.
  const double max_dist = std::min(ball, (sp.L + 2.0) * r0);
  if (max_dist < ball) truncated = true;

  auto scan_frame = [&](const std::vector<double>& lam_rot,
                        const std::vector<double>& kap,
                        const std::vector<double>& grad_A,
                        const std::vector<double>& hess_A,
                        const std::vector<double>& arclength,
                        const std::vector<Eigen::Vector3d>& pos,
                        bool closed) {
    const int N = static_cast<int>(lam_rot.size());
    const int c = nearest_node(pos, center_pos);
    const double sc = arclength[c];
    const double L_total =
        closed ? arclength.back() + (pos.back() - pos.front()).norm()
               : arclength.back();
    for (int i = 0; i < N; ++i) {
      double dist = std::abs(arclength[i] - sc);
      if (closed) dist = std::min(dist, L_total - dist);
      if (dist > max_dist) continue;
      // Lambda_0 for the spectrum {kappa (x1), lambda_rot (x n-1)}:
      // sqrt(lambda_1^2 + sum_{j>=2} (lambda_n - lambda_j)^2)
      const double l1 = std::min(kap[i], lam_rot[i]);
      double spread2 = 0;
      if (kap[i] > lam_rot[i]) {
        const double d = kap[i] - lam_rot[i];
        spread2 = (n - 2) * d * d;
      }
      Lam[0] = std::max(Lam[0], std::sqrt(l1 * l1 + spread2));
      Lam[1] = std::max(Lam[1], grad_A[i]);
      Lam[2] = std::max(Lam[2], hess_A[i]);
    }
  };

  {
    ProfileGeometry g = profile_curvatures(st.profile, n);
    finite_diff_derivatives(st.profile, n, g);
    std::vector<double> lam(g.node.size()), kap(g.node.size()),
        ga(g.node.size()), ha(g.node.size());
    for (size_t i = 0; i < g.node.size(); ++i) {
      lam[i] = g.node[i].lambda_rot;
      kap[i] = g.node[i].kappa_prof;
      ga[i] = g.node[i].grad_A;
      ha[i] = g.node[i].hess_A;
    }
    scan_frame(lam, kap, ga, ha, g.arclength, st.profile.nodes,
               st.profile.closed);
  }

  bool window_complete = false;
  for (auto it = st.history.rbegin(); it != st.history.rend(); ++it) {
    if (it->t > t0 - 1e-14) continue;  // current frame already scanned
    if (it->t <= t_lo) {
      window_complete = true;
      break;
    }
    scan_frame(it->lambda_rot, it->kappa_prof, it->grad_A, it->hess_A,
               it->arclength, it->position, st.profile.closed);
  }
  if (!window_complete) truncated = true;

  if (partial) *partial = truncated;
  return Lam;
}

std::vector<NeckRegion> detect_necks(
    const FlowState& st, int n, const SurgeryParams& sp,
    const std::vector<SurgeryFootprint>& past) {
  const ProfileCurve& p = st.profile;
  const double K = p.K();
  const double sqrtK = std::sqrt(K);
  const int N = p.size();

  ProfileGeometry g = profile_curvatures(p, n);

  // ND1 mask
  std::vector<char> nd1(N, 0);
  for (int i = 0; i < N; ++i) {
    const NodeCurvature& nc = g.node[i];
    if (nc.H >= sp.h_sharp * sqrtK &&
        nc.lambda_min() <= sp.eta_sharp * nc.H)
      nd1[i] = 1;
  }

  std::vector<NeckRegion> out;
  std::vector<std::pair<int, int>> runs;
  if (p.closed) {
    // maximal circular runs
    int start = -1;
    bool all = true;
    for (int i = 0; i < N; ++i)
      if (!nd1[i]) {
        all = false;
        start = i;
        break;
      }
    if (all) {
      runs.emplace_back(0, N - 1);
    } else {
      int seen = 0;
      while (seen < N) {
        while (seen < N && !nd1[(start + seen) % N]) ++seen;
        if (seen >= N) break;
        const int lo = (start + seen) % N;
        int len = 0;
        while (seen < N && nd1[(start + seen) % N]) {
          ++seen;
          ++len;
        }
        runs.emplace_back(lo, (lo + len - 1) % N);
      }
    }
  } else {
    int i = 0;
    while (i < N) {
      if (!nd1[i]) {
        ++i;
        continue;
      }
      int j = i;
      while (j + 1 < N && nd1[j + 1]) ++j;
      runs.emplace_back(i, j);
      i = j + 1;
    }
  }

  for (auto [lo, hi] : runs) {
    NeckRegion neck;
    neck.first = lo;
    neck.last = hi;
    const int len = (hi >= lo) ? hi - lo + 1 : N - lo + hi + 1;
    if (len < 5 && !(p.closed && len == N)) continue;  // unresolvable
    neck.covers_component = p.closed && len == N;

    // center at the max-H node
    double bestH = -1;
    for (int k = 0; k < len; ++k) {
      const int idx = (lo + k) % N;
      if (g.node[idx].H > bestH) {
        bestH = g.node[idx].H;
        neck.center = idx;
      }
    }
    neck.H_center = bestH;
    neck.r0 = (n - 1.0) / bestH;

    // ND2: parabolic neighborhood free of surgeries
    const double rad = (n - 1.0) * (sp.L + 1.0) / bestH;
    const double dur = sp.theta_nd2 / (bestH * bestH);
    const Eigen::Vector3d cpos = p.nodes[neck.center];
    neck.surgery_free = true;
    for (const auto& fp : past) {
      if (fp.t < st.t - dur) continue;
      for (const auto& q : fp.points) {
        if ((q - cpos).norm() <= rad) {
          neck.surgery_free = false;
          break;
        }
      }
      if (!neck.surgery_free) break;
    }
    if (!neck.surgery_free) continue;

    // quality numbers
    bool partial = false;
    neck.Lambda = neck_quality(st, n, neck, sp, &partial);
    neck.partial_window = partial;
    neck.quality_ok = true;
    const int kmax = std::min(sp.k_neck, 2);
    for (int k = 0; k <= kmax; ++k) {
      const double bound = sp.epsilon * std::pow(neck.r0, -(k + 1.0));
      if (neck.Lambda[k] > bound) neck.quality_ok = false;
    }
    if (!neck.quality_ok) continue;

    out.push_back(neck);
  }
  return out;
}

namespace {

struct CapCurve {
  std::vector<Eigen::Vector3d> nodes;  // from the cut point (exclusive) to the axis
  bool ok = false;
  std::string why;
};

// Quintic Hermite cap in the rescaled half-plane picture, pushed onto the
// orbit sphere via (z, azimuth) coordinates.  Starts at P with tangent data
// (dz0, ddz0) and descends monotonically to the axis, meeting it with
// dz/ds = -1 (orthogonally).
CapCurve build_cap(const Eigen::Vector3d& P, double dz0, double ddz0,
                   double azim_sign, double rho, double s_cap, double h) {
  CapCurve cap;
  const double z_cut = P.z();
  if (z_cut <= 0) {
    cap.why = "cut on the axis";
    return cap;
  }

  // quintic in normalized variables (s/s_cap, z/z_cut) so the linear solve
  // sees dimensionless, scale-invariant data:
  //   zh(0)=1, zh'(0)=dz0*s_cap/z_cut, zh''(0)=ddz0*s_cap^2/z_cut,
  //   zh(1)=0, zh'(1)=-s_cap/z_cut, zh''(1)=0
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
  rhs << 1.0, dz0 * s_cap / z_cut, ddz0 * s_cap * s_cap / z_cut, 0.0,
      -s_cap / z_cut, 0.0;
  const Eigen::Matrix<double, 6, 1> c = M.fullPivLu().solve(rhs);

  auto zh = [&](double sh) {
    double v = 0, pw = 1;
    for (int i = 0; i < 6; ++i) {
      v += c(i) * pw;
      pw *= sh;
    }
    return v;
  };
  auto q = [&](double s) { return z_cut * zh(s / s_cap); };
  auto dq = [&](double s) {
    const double sh = s / s_cap;
    double v = 0, pw = 1;
    for (int i = 1; i < 6; ++i) {
      v += i * c(i) * pw;
      pw *= sh;
    }
    return v * z_cut / s_cap;
  };

  // integrate the azimuth from the metric of the orbit sphere
  const int sub = std::max(64, (int)std::ceil(s_cap / (0.25 * h)) * 4);
  const double ds = s_cap / sub;
  double phi = std::atan2(P.y(), P.x());
  std::vector<Eigen::Vector3d> pts;
  const int stride = std::max(1, (int)std::lround(h / ds));
  for (int j = 1; j <= sub; ++j) {
    auto dphi = [&](double s) {
      const double z = q(s), dz = dq(s);
      const double w2 = rho * rho - z * z;
      double inner = (w2 - rho * rho * dz * dz) / (w2 * w2);
      if (inner < -1e-8 / (rho * rho)) return std::nan("");
      return azim_sign * std::sqrt(std::max(inner, 0.0));
    };
    const double s0 = (j - 1) * ds, s1 = j * ds;
    const double k1 = dphi(s0), k2 = dphi(s1);
    if (std::isnan(k1) || std::isnan(k2)) {
      cap.why = "tangent budget exceeded (cap too steep)";
      return cap;
    }
    phi += 0.5 * (k1 + k2) * ds;
    const double z = q(s1);
    if (j < sub && (z <= 0 || z > 1.05 * z_cut)) {
      cap.why = "cap not monotone within (0, z_cut]";
      return cap;
    }
    if (j % stride == 0 || j == sub) {
      const double zj = std::max(z, 0.0);
      const double w = std::sqrt(std::max(rho * rho - zj * zj, 0.0));
      pts.emplace_back(w * std::cos(phi), w * std::sin(phi), zj);
    }
  }
  pts.back().z() = 0.0;  // exact axis landing
  {
    const double w = rho;  // z = 0
    const double ph = std::atan2(pts.back().y(), pts.back().x());
    pts.back() = Eigen::Vector3d(w * std::cos(ph), w * std::sin(ph), 0.0);
  }
  cap.nodes = std::move(pts);
  cap.ok = true;
  return cap;
}

double max_fplus(const ProfileGeometry& g, int lo, int hi, int N, int n,
                 double K, double t, const FlowParams& prm,
                 const DerivedConstants& dc) {
  double v = 0;
  const int len = (hi >= lo) ? hi - lo + 1 : N - lo + hi + 1;
  for (int k = 0; k < len; ++k) {
    const int i = (lo + k) % N;
    v = std::max(v, f_plus(g.node[i].A2, g.node[i].H * g.node[i].H, n, K, t,
                           prm.eta, prm.sigma, dc));
  }
  return v;
}

}  // namespace

SurgeryOutcome perform_surgery(const ProfileCurve& comp, int component_id,
                               const NeckRegion& neck, const FlowParams& prm,
                               const DerivedConstants& dc,
                               const SurgeryParams& sp, double t) {
  const int n = prm.n;
  const double K = prm.K;
  const int N = comp.size();
  ProfileGeometry g = profile_curvatures(comp, n);

  const double area_before = area(comp, n);
  const bool loop = comp.closed;

  double r = sp.r_surg;
  std::string last_why;

  for (int attempt = 0; attempt <= 3; ++attempt, r *= 0.5) {
    // surgery-eligible sub-interval: nodes of the neck with H^2 >= Theta1 K,
    // contiguous around the center
    const double H_eligible = std::sqrt(sp.Theta1 * K);
    auto eligible = [&](int i) {
      return g.node[i].H >= H_eligible;
    };
    if (!eligible(neck.center)) {
      last_why = "neck center below Theta1";
      break;
    }
    const int len = (neck.last >= neck.first)
                        ? neck.last - neck.first + 1
                        : N - neck.first + neck.last + 1;
    int off_lo = 0, off_hi = 0;  // offsets from center within the run
    auto in_run = [&](int idx) {
      const int rel = ((idx - neck.first) % N + N) % N;
      return rel < len;
    };
    while (true) {
      const int cand = ((neck.center - off_lo - 1) % N + N) % N;
      if (!in_run(cand) || !eligible(cand)) break;
      ++off_lo;
      if (off_lo > N) break;
    }
    while (true) {
      const int cand = (neck.center + off_hi + 1) % N;
      if (!in_run(cand) || !eligible(cand)) break;
      ++off_hi;
      if (off_hi > N) break;
    }
    int iL = ((neck.center - off_lo) % N + N) % N;  // first eligible
    int iR = (neck.center + off_hi) % N;            // last eligible

    const int elig_len = off_lo + off_hi + 1;
    if (elig_len < 9) {
      last_why = "eligible stretch too short to cut";
      break;
    }

    // Cut cross-sections sit where the mean curvature is closest to the
    // surgery scale, H ~ (n-1)/r, one on each side of the center; the
    // excised middle always contains at least the middle third of the
    // eligible stretch.
    const double target = (n - 1.0) / r;
    auto pick_cut = [&](int toward) {
      int best = neck.center;
      double bd = std::numeric_limits<double>::infinity();
      const int len = toward < 0 ? off_lo : off_hi;
      for (int k = 3; k <= len; ++k) {
        const int idx = ((neck.center + toward * k) % N + N) % N;
        const double d = std::abs(g.node[idx].H - target);
        if (d < bd) {
          bd = d;
          best = idx;
        }
      }
      return best;
    };
    const int cutL = pick_cut(-1);
    const int cutR = pick_cut(+1);
    const int excised = [&] {
      const int rel = ((cutR - cutL) % N + N) % N;
      return rel;
    }();
    if (cutL == neck.center || cutR == neck.center ||
        3 * excised < elig_len) {
      last_why = "could not place cuts around the middle third";
      continue;
    }

    // trigger band at the cut points
    const double bandlo = (n - 1.0) / (10.0 * r), bandhi = 10.0 * (n - 1.0) / r;
    const double HcutL = g.node[cutL].H, HcutR = g.node[cutR].H;
    if (HcutL < bandlo || HcutL > bandhi || HcutR < bandlo || HcutR > bandhi) {
      last_why = "cut mean curvature outside the trigger band";
      continue;  // retry with smaller r
    }

    // tangent data at the cuts (toward the removed region)
    const auto s = comp.cumulative_arclength();
    auto z_derivs = [&](int i, int toward) {
      // one-sided first/second differences of z in the direction `toward`
      const int i1 = ((i + toward) % N + N) % N;
      const int i2 = ((i + 2 * toward) % N + N) % N;
      const double h1 = (comp.nodes[i1] - comp.nodes[i]).norm();
      const double h2 = (comp.nodes[i2] - comp.nodes[i1]).norm();
      const double z0 = comp.nodes[i].z(), z1 = comp.nodes[i1].z(),
                   z2 = comp.nodes[i2].z();
      const double d1 = (z1 - z0) / h1;
      const double d2 = (z2 - z1) / h2;
      const double dz = d1;  // first-order toward the removed side
      const double ddz = (d2 - d1) / (0.5 * (h1 + h2));
      return std::pair<double, double>(dz, ddz);
    };
    auto azim_dir = [&](int i, int toward) {
      const int i1 = ((i + toward) % N + N) % N;
      const Eigen::Vector3d d = comp.nodes[i1] - comp.nodes[i];
      const Eigen::Vector3d ephi(-comp.nodes[i].y(), comp.nodes[i].x(), 0);
      return d.dot(ephi) >= 0 ? 1.0 : -1.0;
    };
    const double h = comp.min_spacing();

    auto [dzL, ddzL] = z_derivs(cutL, +1);
    auto [dzR, ddzR] = z_derivs(cutR, -1);
    CapCurve capL = build_cap(comp.nodes[cutL], dzL, ddzL, azim_dir(cutL, +1),
                              comp.rho, sp.cap_factor * comp.nodes[cutL].z(),
                              h);
    CapCurve capR = build_cap(comp.nodes[cutR], dzR, ddzR, azim_dir(cutR, -1),
                              comp.rho, sp.cap_factor * comp.nodes[cutR].z(),
                              h);
    if (!capL.ok || !capR.ok) {
      last_why = !capL.ok ? capL.why : capR.why;
      continue;
    }

    // assemble the pieces
    std::vector<ProfileCurve> pieces;
    if (!loop) {
      ProfileCurve left;
      left.rho = comp.rho;
      left.closed = false;
      for (int i = 0; i <= cutL; ++i) left.nodes.push_back(comp.nodes[i]);
      left.nodes.insert(left.nodes.end(), capL.nodes.begin(), capL.nodes.end());
      ProfileCurve right;
      right.rho = comp.rho;
      right.closed = false;
      for (auto it = capR.nodes.rbegin(); it != capR.nodes.rend(); ++it)
        right.nodes.push_back(*it);
      for (int i = cutR; i < N; ++i) right.nodes.push_back(comp.nodes[i]);
      pieces.push_back(regrid(left, h));
      pieces.push_back(regrid(right, h));
    } else {
      ProfileCurve arc;
      arc.rho = comp.rho;
      arc.closed = false;
      for (auto it = capR.nodes.rbegin(); it != capR.nodes.rend(); ++it)
        arc.nodes.push_back(*it);
      for (int i = cutR; i != cutL; i = (i + 1) % N)
        arc.nodes.push_back(comp.nodes[i]);
      arc.nodes.push_back(comp.nodes[cutL]);
      arc.nodes.insert(arc.nodes.end(), capL.nodes.begin(), capL.nodes.end());
      pieces.push_back(regrid(arc, h));
    }

    // post-hoc verification
    SurgeryEvent ev;
    ev.t = t;
    ev.component_id = component_id;
    ev.loop_component = loop;
    ev.area_before = area_before;
    ev.r_used = r;
    ev.retries = attempt;
    ev.cut_H_left = HcutL;
    ev.cut_H_right = HcutR;
    ev.pieces = static_cast<int>(pieces.size());
    ev.fplus_before =
        max_fplus(g, iL, iR, N, n, K, t, prm, dc);

    bool ok = true;
    double area_after = 0, fplus_after = 0, fplus_caps = 0;
    for (const auto& piece : pieces) {
      auto bad = piece.check_invariants();
      if (!bad.empty()) {
        ok = false;
        last_why = "piece invariant: " + bad.front();
        break;
      }
      ProfileGeometry pg = profile_curvatures(piece, n);
      area_after += area(piece, n);
      // (b) strict pinching on every node
      for (const auto& nc : pg.node) {
        if (strict_margin(nc.A2, nc.H * nc.H, n, K) >= 0) {
          ok = false;
          last_why = "pinching violated on a piece";
          break;
        }
      }
      if (!ok) break;
      // f_plus on the modified region: nodes within the old eligible
      // stretch plus all cap nodes.  Caps occupy the ends after regrid;
      // conservatively scan the whole piece within chord distance of the
      // removed region, plus the cap third explicitly.
      const double s_capL = sp.cap_factor * comp.nodes[cutL].z();
      for (int i = 0; i < piece.size(); ++i) {
        const double fp = f_plus(pg.node[i].A2, pg.node[i].H * pg.node[i].H,
                                 n, K, t, prm.eta, prm.sigma, dc);
        const double dmin =
            std::min((piece.nodes[i] - comp.nodes[cutL]).norm(),
                     (piece.nodes[i] - comp.nodes[cutR]).norm());
        if (dmin <= 1.5 * s_capL) {
          fplus_after = std::max(fplus_after, fp);
          const double zcap = std::min(comp.nodes[cutL].z(), comp.nodes[cutR].z());
          if (piece.nodes[i].z() < zcap) fplus_caps = std::max(fplus_caps, fp);
        }
      }
    }
    if (ok && !(area_after < area_before)) {
      ok = false;
      last_why = "area did not decrease";
    }
    if (ok && fplus_after > ev.fplus_before + 1e-12 * std::pow(K, prm.sigma)) {
      ok = false;
      last_why = "f_plus increased on the modified region";
    }
    if (ok && fplus_caps > 1e-9 * std::pow(K, prm.sigma)) {
      ok = false;
      last_why = "f_plus nonzero on caps";
    }
    if (!ok) continue;

    ev.area_after = area_after;
    ev.fplus_after = fplus_after;
    ev.fplus_caps = fplus_caps;

    SurgeryOutcome out;
    out.pieces = std::move(pieces);
    out.event = ev;
    out.footprint.t = t;
    out.footprint.points = {comp.nodes[cutL], comp.nodes[cutR],
                            capL.nodes.back(), capR.nodes.back()};
    return out;
  }

  throw std::runtime_error("perform_surgery: retries exhausted (" + last_why +
                           ")");
}

}  // namespace mcfs
