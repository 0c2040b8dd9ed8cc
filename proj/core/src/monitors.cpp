#include "mcfs/monitors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcfs {

EstimateMonitor::EstimateMonitor(const FlowParams& params,
                                 const DerivedConstants& dc)
    : prm_(params), dc_(dc) {
  const double n = prm_.n;
  report_.Lambda0 =
      2.0 * (prm_.Theta * prm_.Theta / (n - 2 + prm_.alpha) +
             2.0 * (2.0 - prm_.alpha));
  report_.lambda0 = std::log(1.0 + n / (n + report_.Lambda0)) / (2.0 * n);
  burn_in_t_ = report_.lambda0 / prm_.K;
}

MonitorSample EstimateMonitor::observe_component(
    const FlowState& st, const ProfileGeometry& g,
    const InscribedResult* inscribed) {
  const int n = prm_.n;
  const double K = prm_.K;
  const double t = st.t;
  const int N = static_cast<int>(g.node.size());

  MonitorSample ms;
  ms.tK = t * K;
  ms.components = 1;

  double max_grad1 = 0, max_grad2 = 0;

  for (int i = 0; i < N; ++i) {
    const NodeCurvature& nc = g.node[i];
    const double H2 = nc.H * nc.H;
    ms.maxH2_over_K = std::max(ms.maxH2_over_K, H2 / K);
    ms.max_A2_over_K = std::max(ms.max_A2_over_K, nc.A2 / K);
    ms.min_margin_strict =
        std::min(ms.min_margin_strict, strict_margin(nc.A2, H2, n, K) / K);
    ms.max_alpha_margin = std::max(
        ms.max_alpha_margin, quadratic_margin(nc.A2, H2, n, K, prm_.alpha) / K);

    const double deficit = cylindrical_deficit(nc.A2, H2, n);
    ms.max_cyl_deficit_ratio =
        std::max(ms.max_cyl_deficit_ratio, deficit / (H2 + K));

    const double gr = nc.grad_A * nc.grad_A / (H2 * H2 + K * K);
    ms.max_gradA_ratio = std::max(ms.max_gradA_ratio, gr);
    if (t >= burn_in_t_) {
      if (gr > report_.gradient_ratio_sup) {
        report_.gradient_ratio_sup = gr;
        report_.gradient_ratio_time = t;
      }
      const double hr =
          nc.hess_A * nc.hess_A / (H2 * H2 * H2 + K * K * K);
      if (hr > report_.hessian_ratio_sup) {
        report_.hessian_ratio_sup = hr;
        report_.hessian_ratio_time = t;
      }
    }

    // Kato: |grad A|^2 >= 3/(n+2)|grad H|^2 with slack 1 - 1e-6.  Nodes
    // where the gradient is pure roundoff (homogeneous regions) are skipped.
    if (nc.grad_H * nc.grad_H > 1e-20 * (H2 + K) * (H2 + K) &&
        nc.grad_A * nc.grad_A <
            (1.0 - 1e-6) * kato_constant(n) * nc.grad_H * nc.grad_H)
      ++report_.kato_violations;

    const double cyl =
        (deficit - prm_.eta * H2) * std::exp(2 * dc_.delta * K * t) / K;
    ms.cyl_sup_internal = std::max(ms.cyl_sup_internal, cyl);
    if (cyl > report_.C_eta_fitted) {
      report_.C_eta_fitted = cyl;
      report_.C_eta_time = t;
    }
    report_.C0_fitted =
        std::max(report_.C0_fitted, (nc.A2 - 3.0 / (n + 2) * H2) / K);

    const double fp = f_plus(nc.A2, H2, n, K, t, prm_.eta, prm_.sigma, dc_) /
                      std::pow(K, prm_.sigma);
    ms.fplus_max = std::max(ms.fplus_max, fp);

    // c_sharp fit gated away from H ~ 0 where the ratio blows up
    if (nc.H >= 2.0 * std::sqrt(K))
      report_.c_sharp_fitted =
          std::max(report_.c_sharp_fitted, nc.grad_H / H2);

    if (t > 0 && t <= burn_in_t_) {
      max_grad1 = std::max(max_grad1, t * nc.grad_A * nc.grad_A / K);
      max_grad2 = std::max(max_grad2, t * t * nc.hess_A * nc.hess_A / K);
    }
  }

  report_.bernstein_L1 = std::max(report_.bernstein_L1, max_grad1);
  report_.bernstein_L2 = std::max(report_.bernstein_L2, max_grad2);

  // ratio against the proof quantities G_beta, G_0 with running fitted
  // constants (floored at 2, as in the estimate statements)
  {
    const double Cb = std::max(2.0, report_.C_eta_fitted);
    const double C0 = std::max(2.0, report_.C0_fitted);
    for (int i = 0; i < N; ++i) {
      const NodeCurvature& nc = g.node[i];
      const double H2 = nc.H * nc.H;
      const double Gb = 2 * Cb * K * std::exp(-2 * dc_.delta * K * t) +
                        (dc_.beta + 1.0 / (n - 1)) * H2 - nc.A2;
      const double G0 = 2 * C0 * K + 3.0 / (n + 2) * H2 - nc.A2;
      if (!(Gb > 0) || !(G0 > 0))
        throw std::runtime_error(
            "EstimateMonitor: G_beta or G_0 nonpositive (monitor "
            "misconfiguration)");
      report_.grad_over_GbetaG0_sup = std::max(
          report_.grad_over_GbetaG0_sup, nc.grad_A * nc.grad_A / (Gb * G0));
    }
  }

  if (inscribed) {
    std::vector<double> F(N);
    bool pinched = true;
    for (int i = 0; i < N; ++i) {
      const double H2 = g.node[i].H * g.node[i].H;
      const double rad = 4 * K + H2 / (n - 2) - g.node[i].A2;
      if (!(rad > 0)) {
        pinched = false;
        break;
      }
      F[i] = std::sqrt(rad);
    }
    if (pinched) {
      double kb = -std::numeric_limits<double>::infinity();
      double kl = std::numeric_limits<double>::infinity();
      for (int i = 0; i < N; ++i) {
        kb = std::max(kb, inscribed->kbar[i] / F[i]);
        kl = std::min(kl, inscribed->klow[i] / F[i]);
      }
      ms.max_kbar_over_F = kb;
      if (!mu0_set_) {
        report_.mu0 = std::max({dc_.C_noncollapse, kb, -kl});
        mu0_set_ = true;
      }
      report_.noncollapse_violations +=
          noncollapse_check(inscribed->kbar, inscribed->klow, F, t, K,
                            dc_.C_noncollapse, report_.mu0);
    } else {
      report_.notes.push_back("noncollapse skipped: not strictly pinched");
    }
  }

  ms.area_times_Kpow = area(st.profile, n) * std::pow(K, 0.5 * n);
  return ms;
}

MonitorSample EstimateMonitor::merge(const MonitorSample& a,
                                     const MonitorSample& b) {
  MonitorSample m = a;
  m.maxH2_over_K = std::max(a.maxH2_over_K, b.maxH2_over_K);
  m.max_A2_over_K = std::max(a.max_A2_over_K, b.max_A2_over_K);
  m.min_margin_strict = std::min(a.min_margin_strict, b.min_margin_strict);
  m.max_cyl_deficit_ratio =
      std::max(a.max_cyl_deficit_ratio, b.max_cyl_deficit_ratio);
  m.max_gradA_ratio = std::max(a.max_gradA_ratio, b.max_gradA_ratio);
  m.max_kbar_over_F = std::max(a.max_kbar_over_F, b.max_kbar_over_F);
  m.area_times_Kpow = a.area_times_Kpow + b.area_times_Kpow;
  m.fplus_max = std::max(a.fplus_max, b.fplus_max);
  m.components = a.components + b.components;
  m.cyl_sup_internal = std::max(a.cyl_sup_internal, b.cyl_sup_internal);
  m.max_alpha_margin = std::max(a.max_alpha_margin, b.max_alpha_margin);
  return m;
}

void EstimateMonitor::commit(MonitorSample ms) {
  if (first_sample_) {
    era_cyl_sup_ = ms.cyl_sup_internal;
    era_fplus_sup_ = ms.fplus_max;
    first_sample_ = false;
  } else {
    const double cyl_slack = 0.01 * std::max(std::abs(era_cyl_sup_), 1e-3);
    if (ms.cyl_sup_internal > era_cyl_sup_ + cyl_slack)
      ++report_.cyl_growth_violations;
    if (ms.fplus_max > era_fplus_sup_ * 1.01 + 1e-9)
      ++report_.fplus_growth_violations;
    era_cyl_sup_ = std::max(era_cyl_sup_, ms.cyl_sup_internal);
    era_fplus_sup_ = std::max(era_fplus_sup_, ms.fplus_max);
  }
  report_.fplus_sup = std::max(report_.fplus_sup, ms.fplus_max);
  report_.max_alpha_margin =
      std::max(report_.max_alpha_margin, ms.max_alpha_margin);
  alpha_margin_.emplace_back(ms.tK, ms.max_alpha_margin);
  series_.push_back(std::move(ms));
}

MonitorSample EstimateMonitor::observe(const FlowState& st,
                                       const ProfileGeometry& g,
                                       const InscribedResult* inscribed,
                                       int components) {
  MonitorSample ms = observe_component(st, g, inscribed);
  ms.components = components;
  commit(ms);
  return series_.back();
}

void EstimateMonitor::era_break() { first_sample_ = true; }

ResidualSeries evolution_residual(const std::vector<double>& t,
                                  const std::vector<double>& H,
                                  const std::vector<double>& A2, int n,
                                  double K) {
  const int m = static_cast<int>(t.size());
  if (m < 3 || H.size() != t.size() || A2.size() != t.size())
    throw std::invalid_argument("evolution_residual: need >= 3 frames");
  ResidualSeries rs;
  for (int i = 1; i + 1 < m; ++i) {
    const double hm = t[i] - t[i - 1], hp = t[i + 1] - t[i];
    const double dH = (hm * hm * H[i + 1] - hp * hp * H[i - 1] +
                       (hp * hp - hm * hm) * H[i]) /
                      (hm * hp * (hm + hp));
    const double rhsH = (A2[i] + n * K) * H[i];
    const double denomH = std::max(std::abs(rhsH), 1e-3 * std::pow(K, 1.5));
    const double dA2 = (hm * hm * A2[i + 1] - hp * hp * A2[i - 1] +
                        (hp * hp - hm * hm) * A2[i]) /
                       (hm * hp * (hm + hp));
    const double rhsA = 2 * (A2[i] + n * K) * A2[i] -
                        4 * n * K * (A2[i] - H[i] * H[i] / n);
    const double denomA = std::max(std::abs(rhsA), 1e-3 * K * K);
    rs.t.push_back(t[i]);
    rs.H_residual_rel.push_back(std::abs(dH - rhsH) / denomH);
    rs.A2_residual_rel.push_back(std::abs(dA2 - rhsA) / denomA);
    rs.max_H_residual_rel =
        std::max(rs.max_H_residual_rel, rs.H_residual_rel.back());
  }
  return rs;
}

int noncollapse_check(const std::vector<double>& kbar,
                      const std::vector<double>& klow,
                      const std::vector<double>& F, double t, double K,
                      double C, double mu, double slack) {
  const double bound = C + (mu - C) * std::exp(-4 * K * t);
  const double tol = slack * std::max(std::abs(bound), 0.1);
  int bad = 0;
  for (size_t i = 0; i < kbar.size(); ++i) {
    if (kbar[i] / F[i] > bound + tol) ++bad;
    if (klow[i] / F[i] < -bound - tol) ++bad;
  }
  return bad;
}

}  // namespace mcfs
