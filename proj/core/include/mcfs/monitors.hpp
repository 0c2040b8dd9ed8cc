#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcfs/flow.hpp"
#include "mcfs/geometry.hpp"
#include "mcfs/inscribed.hpp"

namespace mcfs {

/// One dimensionless row of the run time series (the CSV schema), plus two
/// internal aggregates that never reach the CSV.
struct MonitorSample {
  double tK = 0;
  double maxH2_over_K = 0;
  double min_margin_strict = 1e300;  // min over nodes of strict margin / K
  double max_cyl_deficit_ratio = -1e300;  // max (|A|^2-H^2/(n-1))/(H^2+K)
  double max_gradA_ratio = 0;             // max |grad A|^2/(H^4+K^2)
  double max_kbar_over_F = -1e300;
  double area_times_Kpow = 0;  // summed over components
  double fplus_max = 0;        // max f_+ / K^sigma
  int components = 1;
  // internal
  double cyl_sup_internal = -1e300;  // max (deficit - eta H^2) e^{2dKt}/K
  double max_alpha_margin = -1e300;  // max over nodes of Q_alpha / K
  double max_A2_over_K = 0;
};

/// Fitted constants and violation flags of every monitored a-priori
/// estimate.  Estimates of "there exists C" type are tested as
/// boundedness/non-growth of the measured sup, never against invented
/// numbers.
struct EstimateReport {
  double C_eta_fitted = -1e300;  // sup (deficit - eta H^2) e^{2 delta K t}/K
  double C_eta_time = 0;
  double C0_fitted = -1e300;     // sup (|A|^2 - 3/(n+2) H^2) / K
  double gradient_ratio_sup = 0;  // sup |grad A|^2/(H^4+K^2) after burn-in
  double gradient_ratio_time = 0;
  double hessian_ratio_sup = 0;   // sup |grad^2 A|^2/(H^6+K^3) after burn-in
  double hessian_ratio_time = 0;
  double grad_over_GbetaG0_sup = 0;
  double c_sharp_fitted = 0;      // sup |grad H|/H^2 over H >= 2 sqrt(K)
  double Lambda0 = 0, lambda0 = 0;
  double bernstein_L1 = 0, bernstein_L2 = 0;  // sup t^m|grad^m A|^2/K, t<=l0/K
  double fplus_sup = 0;
  double mu0 = 0;  // noncollapsing pinching constant measured at t = 0
  double max_alpha_margin = -1e300;  // worst (largest) Q_alpha / K over the run
  int kato_violations = 0;
  int noncollapse_violations = 0;
  int cyl_growth_violations = 0;  // era sup grew beyond 1% slack
  int fplus_growth_violations = 0;
  bool partial_window = false;
  std::vector<std::string> notes;
};

/// Accumulates every estimate along a run.  Per sample time, call
/// observe_component for each live component, merge the rows, and commit the
/// merged row; era_break() right after each surgery restarts the non-growth
/// baselines.
class EstimateMonitor {
 public:
  EstimateMonitor(const FlowParams& params, const DerivedConstants& dc);

  MonitorSample observe_component(const FlowState& st,
                                  const ProfileGeometry& g,
                                  const InscribedResult* inscribed);
  static MonitorSample merge(const MonitorSample& a, const MonitorSample& b);
  void commit(MonitorSample ms);

  /// Single-component convenience: observe + commit.
  MonitorSample observe(const FlowState& st, const ProfileGeometry& g,
                        const InscribedResult* inscribed, int components);

  void era_break();

  double burn_in_time() const { return burn_in_t_; }
  const EstimateReport& report() const { return report_; }
  EstimateReport& mutable_report() { return report_; }
  const std::vector<MonitorSample>& series() const { return series_; }
  /// (tK, max over nodes of Q_alpha / K) per committed sample; the pinching
  /// condition is preserved iff every entry stays negative.
  const std::vector<std::pair<double, double>>& alpha_margin_series() const {
    return alpha_margin_;
  }

 private:
  FlowParams prm_;
  DerivedConstants dc_;
  EstimateReport report_;
  std::vector<MonitorSample> series_;
  std::vector<std::pair<double, double>> alpha_margin_;
  double era_cyl_sup_ = 0;
  double era_fplus_sup_ = 0;
  bool first_sample_ = true;
  bool mu0_set_ = false;
  double burn_in_t_ = 0;
};

/// | d/dt H - (|A|^2 + nK) H | per sample on a homogeneous trajectory given
/// as (t, H, A2) triples; centered differences in t.
struct ResidualSeries {
  std::vector<double> t;
  std::vector<double> H_residual_rel;   // |dtH - rhs| / |rhs|
  std::vector<double> A2_residual_rel;  // |A|^2 equation, gradient term = 0
  double max_H_residual_rel = 0;
};

ResidualSeries evolution_residual(const std::vector<double>& t,
                                  const std::vector<double>& H,
                                  const std::vector<double>& A2, int n,
                                  double K);

/// Nodewise check of the noncollapsing bounds
///   klow/F >= -C - (mu - C) e^{-4Kt},  kbar/F <= C + (mu - C) e^{-4Kt}
/// with multiplicative slack.  Returns the number of violations.
int noncollapse_check(const std::vector<double>& kbar,
                      const std::vector<double>& klow,
                      const std::vector<double>& F, double t, double K,
                      double C, double mu, double slack = 0.05);

}  // namespace mcfs
