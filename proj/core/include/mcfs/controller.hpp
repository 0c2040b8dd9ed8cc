#pragma once

#include <string>
#include <vector>

#include "mcfs/monitors.hpp"
#include "mcfs/run_config.hpp"
#include "mcfs/surgery.hpp"

namespace mcfs {

enum class RunStatus {
  Continue,
  TerminatedByClassification,
  ConvergedToMinimal,
  UnresolvedSingularity,
  BudgetExhausted,
};

std::string to_string(RunStatus s);

struct RunReport {
  RunConfig config;
  std::vector<MonitorSample> series;
  std::vector<std::pair<double, double>> alpha_margin_series;
  std::vector<SurgeryEvent> events;
  TopologyLedger ledger;
  EstimateReport estimates;
  RunStatus status = RunStatus::Continue;
  std::string status_note;
  std::string classification;
  long total_steps = 0;
  double final_t = 0;
  double final_max_A2_over_K = 0;
  double area0 = 0;
  double min_area_decrement = 0;
  double wall_seconds = 0;  // console only, never serialized
};

/// Terminated when no live components remain; converged-to-minimal when all
/// components kept H^2 < Theta1 K for at least 5/K and max |A|^2/K is below
/// tol; Continue otherwise.
RunStatus termination_check(int live_components, double low_curvature_duration,
                            double K, double max_A2_over_K, double tol);

/// Full surgically modified flow: evolve, trigger at Theta3, detect, surger,
/// discard, account area, terminate, classify.  Throws std::invalid_argument
/// on configs violating the admissibility windows or initial data outside
/// the surgery class.
RunReport run(const RunConfig& cfg);

}  // namespace mcfs
