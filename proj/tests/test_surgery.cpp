#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mcfs/exact_models.hpp"
#include "mcfs/surgery.hpp"

using namespace mcfs;

TEST_CASE("classify_component") {
  CHECK(classify_component(make_geodesic_sphere_profile(0.8, 64, 1.0)) ==
        TopologyTag::Sphere);
  CHECK(classify_component(make_tube_profile(0.4, 64, 1.0)) ==
        TopologyTag::LoopProduct);
  ProfileCurve bad = make_geodesic_sphere_profile(0.8, 64, 1.0);
  bad.nodes.back() = Eigen::Vector3d(0, 0.6, 0.8);  // lift one endpoint
  CHECK_THROWS_AS(classify_component(bad), std::runtime_error);
}

TEST_CASE("surgery parameter defaults and band consistency") {
  SurgeryParams sp;
  sp.apply_defaults(4, 1.0);
  CHECK(sp.eta_sharp == doctest::Approx(0.025));
  CHECK(sp.h_sharp == doctest::Approx(80.0));
  CHECK(sp.Theta1 == doctest::Approx(4 * 80.0 * 80.0));
  CHECK(sp.Theta2 == doctest::Approx(4 * sp.Theta1));
  CHECK(sp.Theta3 == doctest::Approx(16 * sp.Theta1));
  CHECK(sp.r_surg == doctest::Approx(3.0 / std::sqrt(sp.Theta1)));
  CHECK(sp.check(4, 1.0).empty());
  SurgeryParams bad = sp;
  bad.Theta2 = bad.Theta3 + 1;
  CHECK_FALSE(bad.check(4, 1.0).empty());
  bad = sp;
  bad.epsilon = 0.02;  // above 1/100
  CHECK_FALSE(bad.check(4, 1.0).empty());
}

TEST_CASE("topology ledger classification strings") {
  TopologyLedger lg;
  CHECK(lg.classification(4) == "S^n");
  lg.discards_loop = 1;
  CHECK(lg.classification(4) == "S^1 x S^3");
  lg.loop_surgeries = 1;
  CHECK(lg.classification(4) == "#_2 (S^1 x S^3)");
}

TEST_CASE("ND1 never fires on umbilic profiles") {
  FlowState st;
  st.profile = make_geodesic_sphere_profile(0.1, 200, 1.0);  // H = 4 cot(0.1)
  SurgeryParams sp;
  sp.h_sharp = 10;  // low gate: H clears it, but lambda_1/H = 1/4 > eta_sharp
  sp.apply_defaults(4, 1.0);
  auto necks = detect_necks(st, 4, sp, {});
  CHECK(necks.empty());
}

TEST_CASE("exact thin tube: whole component flagged as one neck") {
  FlowState st;
  const double u = 0.02;  // H = 3 cot(u) ~ 150
  st.profile = make_tube_profile(u, 256, 1.0);
  SurgeryParams sp;
  sp.h_sharp = 30;
  sp.apply_defaults(4, 1.0);
  auto necks = detect_necks(st, 4, sp, {});
  REQUIRE(necks.size() == 1);
  CHECK(necks[0].covers_component);
  // quality: Lambda_0 = |kappa| = tan(u), bound = eps * H_c/(n-1)
  CHECK(necks[0].quality_ok);
  CHECK(necks[0].partial_window);  // no history yet
}

TEST_CASE("neck quality rejects a fat tube") {
  FlowState st;
  const double u = 0.3;  // |kappa| = tan(u) = 0.31 exceeds eps r0^-1
  st.profile = make_tube_profile(u, 256, 1.0);
  SurgeryParams sp;
  sp.h_sharp = 2.0;  // low gate so ND1 fires despite moderate curvature
  sp.eta_sharp = 0.5;
  sp.apply_defaults(4, 1.0);
  // the quality filter drops it from the detection list entirely
  CHECK(detect_necks(st, 4, sp, {}).empty());
  // and the quality numbers themselves show why
  ProfileGeometry g = profile_curvatures(st.profile, 4);
  NeckRegion cand;
  cand.first = 0;
  cand.last = st.profile.size() - 1;
  cand.center = 0;
  cand.H_center = g.node[0].H;
  cand.r0 = 3.0 / cand.H_center;
  bool partial = false;
  auto Lam = neck_quality(st, 4, cand, sp, &partial);
  CHECK(Lam[0] == doctest::Approx(std::tan(u)).epsilon(1e-3));
  CHECK(Lam[0] > sp.epsilon / cand.r0);
}

TEST_CASE("ND2 vetoes recently operated regions") {
  FlowState st;
  st.profile = make_tube_profile(0.02, 256, 1.0);
  SurgeryParams sp;
  sp.h_sharp = 30;
  sp.apply_defaults(4, 1.0);
  SurgeryFootprint fp;
  fp.t = -1e-5;  // just before now
  fp.points = {st.profile.nodes[2]};
  // the footprint sits on the single component-covering neck, so ND2
  // filters it out entirely
  auto necks = detect_necks(st, 4, sp, {fp});
  CHECK(necks.empty());
}
