#pragma once

#include <string>

#include "mcfs/controller.hpp"

namespace mcfs {

/// Fixed-header CSV, all columns dimensionless:
/// t,maxH2_over_K,min_margin_strict,max_cyl_deficit_ratio,max_gradA_ratio,
/// max_kbar_over_F,area_times_Kpow,fplus_max,components
/// (t is t*K).  Byte-stable for identical inputs.
std::string timeseries_csv(const RunReport& rep);
void emit_timeseries(const RunReport& rep, const std::string& path);

/// JSON run report: config echo, surgery events, topology ledger, estimate
/// report, status.  Wall-clock time is deliberately left out so reruns with
/// the same config and seed are byte-identical.
std::string report_json(const RunReport& rep);
void emit_report(const RunReport& rep, const std::string& path);

}  // namespace mcfs
