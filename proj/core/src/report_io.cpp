#include "mcfs/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "mcfs/run_config.hpp"

namespace mcfs {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

}  // namespace

std::string timeseries_csv(const RunReport& rep) {
  std::string s =
      "t,maxH2_over_K,min_margin_strict,max_cyl_deficit_ratio,"
      "max_gradA_ratio,max_kbar_over_F,area_times_Kpow,fplus_max,components\n";
  for (const auto& r : rep.series) {
    s += fmt(r.tK) + ',' + fmt(r.maxH2_over_K) + ',' +
         fmt(r.min_margin_strict) + ',' + fmt(r.max_cyl_deficit_ratio) + ',' +
         fmt(r.max_gradA_ratio) + ',' +
         fmt(r.max_kbar_over_F <= -1e300 ? 0.0 : r.max_kbar_over_F) + ',' +
         fmt(r.area_times_Kpow) + ',' + fmt(r.fplus_max) + ',' +
         std::to_string(r.components) + '\n';
  }
  return s;
}

void emit_timeseries(const RunReport& rep, const std::string& path) {
  write_file(path, timeseries_csv(rep));
}

std::string report_json(const RunReport& rep) {
  json j;
  j["config"] = json::parse(config_to_json(rep.config));
  j["status"] = to_string(rep.status);
  j["status_note"] = rep.status_note;
  j["classification"] = rep.classification;
  j["total_steps"] = rep.total_steps;
  j["final_t_times_K"] = rep.final_t * rep.config.params.K;
  j["final_max_A2_over_K"] = rep.final_max_A2_over_K;
  j["area0_times_Kpow"] =
      rep.area0 * std::pow(rep.config.params.K, 0.5 * rep.config.params.n);

  json events = json::array();
  for (const auto& e : rep.events) {
    events.push_back({{"t_times_K", e.t * rep.config.params.K},
                      {"component_id", e.component_id},
                      {"loop_component", e.loop_component},
                      {"area_before", e.area_before},
                      {"area_after", e.area_after},
                      {"area_decrement", e.area_before - e.area_after},
                      {"fplus_before", e.fplus_before},
                      {"fplus_after", e.fplus_after},
                      {"fplus_caps", e.fplus_caps},
                      {"cut_H_left", e.cut_H_left},
                      {"cut_H_right", e.cut_H_right},
                      {"r_used", e.r_used},
                      {"retries", e.retries},
                      {"pieces", e.pieces}});
  }
  j["surgery_events"] = events;

  j["ledger"] = {{"initial_components", rep.ledger.initial_components},
                 {"splits", rep.ledger.splits},
                 {"discards_sphere", rep.ledger.discards_sphere},
                 {"discards_loop", rep.ledger.discards_loop},
                 {"loop_surgeries", rep.ledger.loop_surgeries},
                 {"live_components", rep.ledger.live_components},
                 {"reconciles", rep.ledger.reconciles()}};

  const EstimateReport& er = rep.estimates;
  j["estimates"] = {{"C_eta_fitted", er.C_eta_fitted},
                    {"C_eta_time", er.C_eta_time},
                    {"C0_fitted", er.C0_fitted},
                    {"gradient_ratio_sup", er.gradient_ratio_sup},
                    {"hessian_ratio_sup", er.hessian_ratio_sup},
                    {"hessian_ratio_time_times_K",
                     er.hessian_ratio_time * rep.config.params.K},
                    {"grad_over_GbetaG0_sup", er.grad_over_GbetaG0_sup},
                    {"c_sharp_fitted", er.c_sharp_fitted},
                    {"Lambda0", er.Lambda0},
                    {"lambda0", er.lambda0},
                    {"bernstein_L1", er.bernstein_L1},
                    {"bernstein_L2", er.bernstein_L2},
                    {"fplus_sup", er.fplus_sup},
                    {"mu0", er.mu0},
                    {"max_alpha_margin", er.max_alpha_margin},
                    {"kato_violations", er.kato_violations},
                    {"noncollapse_violations", er.noncollapse_violations},
                    {"cyl_growth_violations", er.cyl_growth_violations},
                    {"fplus_growth_violations", er.fplus_growth_violations},
                    {"notes", er.notes}};
  return j.dump(2) + "\n";
}

void emit_report(const RunReport& rep, const std::string& path) {
  write_file(path, report_json(rep));
}

}  // namespace mcfs
