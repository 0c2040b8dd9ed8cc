#include "mcfs/run_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mcfs {

using nlohmann::json;

void RunConfig::apply_defaults() {
  if (t_max <= 0) t_max = 10.0 / params.K;
  if (sample_dt <= 0) sample_dt = 1e-3 / params.K;
}

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

RunConfig from_json(const json& j) {
  RunConfig c;
  get_if(j, "scenario", c.scenario);
  if (j.contains("params")) {
    const json& p = j["params"];
    get_if(p, "n", c.params.n);
    get_if(p, "K", c.params.K);
    get_if(p, "alpha", c.params.alpha);
    get_if(p, "V", c.params.V);
    get_if(p, "Theta", c.params.Theta);
    get_if(p, "eta", c.params.eta);
    get_if(p, "sigma", c.params.sigma);
  }
  if (j.contains("generator")) {
    const json& g = j["generator"];
    get_if(g, "kind", c.generator.kind);
    get_if(g, "d", c.generator.d);
    get_if(g, "u", c.generator.u);
    get_if(g, "neck_theta", c.generator.neck_theta);
    get_if(g, "bulb_theta", c.generator.bulb_theta);
    get_if(g, "neck_len", c.generator.neck_len);
    get_if(g, "trans_len", c.generator.trans_len);
    get_if(g, "amp", c.generator.amp);
    get_if(g, "mode", c.generator.mode);
    get_if(g, "table_path", c.generator.table_path);
    get_if(g, "table_closed", c.generator.table_closed);
  }
  get_if(j, "grid_N", c.grid_N);
  if (j.contains("step")) {
    const json& s = j["step"];
    get_if(s, "cfl", c.step.cfl);
    get_if(s, "reaction_cap", c.step.reaction_cap);
    get_if(s, "regrid_ratio", c.step.regrid_ratio);
    get_if(s, "max_history", c.step.max_history);
  }
  get_if(j, "t_max", c.t_max);
  get_if(j, "sample_dt", c.sample_dt);
  get_if(j, "inscribed_stride", c.inscribed_stride);
  get_if(j, "surgery_enabled", c.surgery_enabled);
  if (j.contains("surgery")) {
    const json& s = j["surgery"];
    get_if(s, "epsilon", c.surgery.epsilon);
    get_if(s, "k_neck", c.surgery.k_neck);
    get_if(s, "L", c.surgery.L);
    get_if(s, "tau", c.surgery.tau);
    get_if(s, "B", c.surgery.B);
    get_if(s, "r_surg", c.surgery.r_surg);
    get_if(s, "eta_sharp", c.surgery.eta_sharp);
    get_if(s, "h_sharp", c.surgery.h_sharp);
    get_if(s, "Theta1", c.surgery.Theta1);
    get_if(s, "Theta2", c.surgery.Theta2);
    get_if(s, "Theta3", c.surgery.Theta3);
    get_if(s, "theta_nd2", c.surgery.theta_nd2);
    get_if(s, "cap_factor", c.surgery.cap_factor);
  }
  get_if(j, "ps_k", c.ps_k);
  get_if(j, "ps_u0", c.ps_u0);
  get_if(j, "out_csv", c.out_csv);
  get_if(j, "out_json", c.out_json);
  get_if(j, "seed", c.seed);
  get_if(j, "minimal_tol", c.minimal_tol);
  get_if(j, "pinch_stop_z", c.pinch_stop_z);
  return c;
}

void validate_config(const RunConfig& c) {
  std::vector<std::string> bad = c.params.check();
  if (c.scenario != "geodesic_sphere" && c.scenario != "product_sphere" &&
      c.scenario != "rotsym_profile")
    bad.push_back("scenario must be geodesic_sphere, product_sphere or "
                  "rotsym_profile");
  if (c.grid_N < 16) bad.push_back("grid_N >= 16 required");
  if (c.step.cfl <= 0 || c.step.cfl > 0.5)
    bad.push_back("step.cfl must lie in (0, 0.5]");
  if (c.scenario == "product_sphere") {
    if (c.ps_k < 1 || c.ps_k > c.params.n - 1)
      bad.push_back("ps_k must lie in [1, n-1]");
    if (!(c.ps_u0 > 0 && c.ps_u0 < 1.5707963267948966))
      bad.push_back("ps_u0 must lie in (0, pi/2)");
  }
  if (c.surgery_enabled) {
    SurgeryParams sp = c.surgery;
    sp.apply_defaults(c.params.n, c.params.K);
    for (auto& m : sp.check(c.params.n, c.params.K)) bad.push_back(m);
  }
  if (!bad.empty()) {
    std::string msg = "invalid config:";
    for (auto& m : bad) msg += "\n  - " + m;
    throw std::invalid_argument(msg);
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") +
                                e.what());
  }
  RunConfig c = from_json(j);
  c.apply_defaults();
  validate_config(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["params"] = {{"n", c.params.n},     {"K", c.params.K},
                 {"alpha", c.params.alpha}, {"V", c.params.V},
                 {"Theta", c.params.Theta}, {"eta", c.params.eta},
                 {"sigma", c.params.sigma}};
  j["generator"] = {{"kind", c.generator.kind},
                    {"d", c.generator.d},
                    {"u", c.generator.u},
                    {"neck_theta", c.generator.neck_theta},
                    {"bulb_theta", c.generator.bulb_theta},
                    {"neck_len", c.generator.neck_len},
                    {"trans_len", c.generator.trans_len},
                    {"amp", c.generator.amp},
                    {"mode", c.generator.mode},
                    {"table_path", c.generator.table_path},
                    {"table_closed", c.generator.table_closed}};
  j["grid_N"] = c.grid_N;
  j["step"] = {{"cfl", c.step.cfl},
               {"reaction_cap", c.step.reaction_cap},
               {"regrid_ratio", c.step.regrid_ratio},
               {"max_history", c.step.max_history}};
  j["t_max"] = c.t_max;
  j["sample_dt"] = c.sample_dt;
  j["inscribed_stride"] = c.inscribed_stride;
  j["surgery_enabled"] = c.surgery_enabled;
  j["surgery"] = {{"epsilon", c.surgery.epsilon},
                  {"k_neck", c.surgery.k_neck},
                  {"L", c.surgery.L},
                  {"tau", c.surgery.tau},
                  {"B", c.surgery.B},
                  {"r_surg", c.surgery.r_surg},
                  {"eta_sharp", c.surgery.eta_sharp},
                  {"h_sharp", c.surgery.h_sharp},
                  {"Theta1", c.surgery.Theta1},
                  {"Theta2", c.surgery.Theta2},
                  {"Theta3", c.surgery.Theta3},
                  {"theta_nd2", c.surgery.theta_nd2},
                  {"cap_factor", c.surgery.cap_factor}};
  j["ps_k"] = c.ps_k;
  j["ps_u0"] = c.ps_u0;
  j["out_csv"] = c.out_csv;
  j["out_json"] = c.out_json;
  j["seed"] = c.seed;
  j["minimal_tol"] = c.minimal_tol;
  j["pinch_stop_z"] = c.pinch_stop_z;
  return j.dump(2);
}

}  // namespace mcfs
