#include <doctest.h>

#include <cstdio>
#include <stdexcept>
#include <fstream>

#include "mcfs/controller.hpp"
#include "mcfs/report_io.hpp"
#include "mcfs/run_config.hpp"

using namespace mcfs;

TEST_CASE("config parsing: minimal valid and defaults") {
  const char* text = R"({
    "scenario": "geodesic_sphere",
    "params": {"n": 4, "K": 1.0, "alpha": 0.5, "eta": 0.05, "sigma": 0.1},
    "generator": {"kind": "geodesic_sphere", "d": 1.0},
    "grid_N": 64
  })";
  RunConfig cfg = parse_config_text(text);
  CHECK(cfg.params.n == 4);
  CHECK(cfg.t_max == doctest::Approx(10.0));
  CHECK(cfg.sample_dt == doctest::Approx(1e-3));
}

TEST_CASE("config parsing: n=3 alpha gate message") {
  const char* text = R"({
    "scenario": "geodesic_sphere",
    "params": {"n": 3, "alpha": 0.5, "eta": 0.01}
  })";
  try {
    parse_config_text(text);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("alpha > 2/3") != std::string::npos);
  }
}

TEST_CASE("config parsing: eta above both windows lists both") {
  const char* text = R"({
    "scenario": "geodesic_sphere",
    "params": {"n": 4, "alpha": 0.5, "eta": 0.5}
  })";
  try {
    parse_config_text(text);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("poincare window") != std::string::npos);
    CHECK(msg.find("cylindrical window") != std::string::npos);
  }
}

TEST_CASE("config parsing: every violation reported, with line info on bad JSON") {
  try {
    parse_config_text("{ nope");
    FAIL("expected parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("parse error") != std::string::npos);
  }
  const char* text = R"({
    "scenario": "bogus",
    "params": {"n": 2, "alpha": 1.5},
    "grid_N": 4
  })";
  try {
    parse_config_text(text);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("scenario") != std::string::npos);
    CHECK(msg.find("n >= 3") != std::string::npos);
    CHECK(msg.find("alpha") != std::string::npos);
    CHECK(msg.find("grid_N") != std::string::npos);
  }
}

TEST_CASE("deterministic outputs: equator run twice is byte-identical") {
  const char* text = R"({
    "scenario": "geodesic_sphere",
    "params": {"n": 4, "K": 1.0, "alpha": 0.5, "eta": 0.05, "sigma": 0.1,
               "V": 1000.0, "Theta": 400.0},
    "generator": {"kind": "equator"},
    "grid_N": 48,
    "t_max": 0.02,
    "sample_dt": 5e-3,
    "inscribed_stride": 2
  })";
  RunConfig cfg = parse_config_text(text);
  RunReport r1 = run(cfg);
  RunReport r2 = run(cfg);
  CHECK(timeseries_csv(r1) == timeseries_csv(r2));
  CHECK(report_json(r1) == report_json(r2));
  // constant rows for the stationary equator
  CHECK(r1.series.front().maxH2_over_K == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r1.series.back().area_times_Kpow ==
        doctest::Approx(r1.series.front().area_times_Kpow).epsilon(1e-6));
}

TEST_CASE("CSV header is the documented schema") {
  RunReport rep;
  const std::string csv = timeseries_csv(rep);
  CHECK(csv.rfind("t,maxH2_over_K,min_margin_strict,max_cyl_deficit_ratio,"
                  "max_gradA_ratio,max_kbar_over_F,area_times_Kpow,"
                  "fplus_max,components\n",
                  0) == 0);
}

TEST_CASE("termination_check statuses") {
  CHECK(termination_check(0, 0, 1.0, 0, 1e-3) ==
        RunStatus::TerminatedByClassification);
  CHECK(termination_check(1, 6.0, 1.0, 1e-4, 1e-3) ==
        RunStatus::ConvergedToMinimal);
  CHECK(termination_check(2, 0.0, 1.0, 10.0, 1e-3) == RunStatus::Continue);
}
