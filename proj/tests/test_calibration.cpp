#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "thermo/calibration.hpp"

using namespace thermo;

namespace {

// Entropy that simply reads the first coordinate; convenient for planting
// exact jump values on witnesses.
EntropyFn coord_entropy() {
  return [](const StateRef& s) { return s.coords.at(0); };
}

SpaceNode prim(const std::string& id) {
  SpaceNode n;
  n.id = {id};
  n.entropy = coord_entropy();
  return n;
}

StateRef at(const std::string& space, double v) { return StateRef::at({space}, {v}); }

}  // namespace

TEST_CASE("one-step deficit from a single witness") {
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  net.add_edge_witness("A", "B", {at("A", 1.0), at("B", 4.0), ""});
  CHECK(compute_D(net, "A", "B") == doctest::Approx(3.0));
}

TEST_CASE("missing edge gives an infinite deficit") {
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  CHECK(compute_D(net, "A", "B") == infinite_deficit());
  CHECK(compute_E(net, "A", "B") == infinite_deficit());
}

TEST_CASE("deficit is the minimum over witnesses") {
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  net.add_edge_witness("A", "B", {at("A", 1.0), at("B", 4.0), ""});
  net.add_edge_witness("A", "B", {at("A", 2.0), at("B", 4.0), ""});
  CHECK(compute_D(net, "A", "B") == doctest::Approx(2.0));
}

TEST_CASE("chain infimum takes the cheaper two-step route") {
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  net.add_node(prim("C"));
  net.set_direct_D("A", "B", 1.0);
  net.set_direct_D("B", "C", -2.0);
  net.set_direct_D("A", "C", 5.0);
  CHECK(compute_E(net, "A", "C") == doctest::Approx(-1.0));
  // The one-step value stays at 5; the chain value dominates it from below.
  CHECK(compute_D(net, "A", "C") == doctest::Approx(5.0));
  CHECK(compute_E(net, "A", "C") <= compute_D(net, "A", "C"));
}

TEST_CASE("mutual negative edges raise a certified cycle error") {
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  net.set_direct_D("A", "B", -1.0);
  net.set_direct_D("B", "A", -1.0);
  try {
    compute_E(net, "A", "B");
    FAIL("expected NegativeCycleError");
  } catch (const NegativeCycleError& e) {
    REQUIRE(!e.cycle.empty());
    // The certificate must sum below zero when traced through the D table.
    double total = 0.0;
    for (std::size_t i = 0; i < e.cycle.size(); ++i)
      total += compute_D(net, e.cycle[i], e.cycle[(i + 1) % e.cycle.size()]);
    CHECK(total < 0.0);
  }
}

TEST_CASE("negative cycle off the route does not poison an unrelated pair") {
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  net.add_node(prim("X"));
  net.add_node(prim("Y"));
  net.set_direct_D("A", "B", 2.0);
  net.set_direct_D("X", "Y", -1.0);
  net.set_direct_D("Y", "X", -1.0);
  CHECK(compute_E(net, "A", "B") == doctest::Approx(2.0));
}

TEST_CASE("with no catalysts the stabilized value equals the chain value") {
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  net.set_direct_D("A", "B", 1.25);
  CHECK(compute_F(net, "A", "B") == doctest::Approx(compute_E(net, "A", "B")));
}

TEST_CASE("a catalyst opens a cheaper chain") {
  ReactionNetwork net;
  net.add_node(prim("G"));
  net.add_node(prim("Gp"));
  net.add_node(prim("K"));
  SpaceNode gk = prim("GxK");
  gk.factors = {{1.0, "G"}, {1.0, "K"}};
  gk.primitive = false;
  SpaceNode gpk = prim("GpxK");
  gpk.factors = {{1.0, "Gp"}, {1.0, "K"}};
  gpk.primitive = false;
  net.add_node(gk);
  net.add_node(gpk);
  net.set_direct_D("G", "Gp", 5.0);
  net.set_direct_D("GxK", "GpxK", 2.0);
  net.add_catalyst("K");
  CHECK(compute_E(net, "G", "Gp") == doctest::Approx(5.0));
  CHECK(compute_F(net, "G", "Gp") == doctest::Approx(2.0));
}

TEST_CASE("stabilized value vanishes at equal arguments") {
  ReactionNetwork net;
  net.add_node(prim("G"));
  net.add_node(prim("Gp"));
  net.set_direct_D("G", "Gp", 1.0);
  CHECK(compute_F(net, "G", "G") == 0.0);
  CHECK(compute_F(net, "Gp", "Gp") == 0.0);
}

TEST_CASE("entropy-consistent witnesses satisfy all structural properties") {
  // Witness jumps all read off one additive entropy with zero offsets.
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  net.add_node(prim("C"));
  net.add_edge_witness("A", "B", {at("A", 1.0), at("B", 1.0), ""});
  net.add_edge_witness("B", "A", {at("B", 2.0), at("A", 2.0), ""});
  net.add_edge_witness("B", "C", {at("B", 0.5), at("C", 0.5), ""});
  net.add_edge_witness("C", "B", {at("C", 3.0), at("B", 3.0), ""});
  Report rep = check_F_properties(net, {{"A", "B"}, {"B", "C"}, {"A", "C"}});
  for (const auto& r : rep.results) {
    INFO(r.check << ": " << r.witness);
    CHECK(r.verdict == Verdict::Pass);
  }
}

TEST_CASE("planted triangle violation is flagged with catalyst-gated routes") {
  // Catalyst products exist only for the (A,B) and (B,C) legs, so those legs
  // are free while the direct A->C edge stays expensive.
  ReactionNetwork net;
  for (const char* id : {"A", "B", "C", "K1", "K2"}) net.add_node(prim(id));
  auto product = [&](const std::string& id, const std::string& a, const std::string& b) {
    SpaceNode p = prim(id);
    p.factors = {{1.0, a}, {1.0, b}};
    p.primitive = false;
    net.add_node(p);
  };
  product("AxK1", "A", "K1");
  product("BxK1", "B", "K1");
  product("BxK2", "B", "K2");
  product("CxK2", "C", "K2");
  net.set_direct_D("AxK1", "BxK1", 0.0);
  net.set_direct_D("BxK2", "CxK2", 0.0);
  net.set_direct_D("A", "C", 5.0);
  net.add_catalyst("K1");
  net.add_catalyst("K2");
  REQUIRE(compute_F(net, "A", "B") == doctest::Approx(0.0));
  REQUIRE(compute_F(net, "B", "C") == doctest::Approx(0.0));
  REQUIRE(compute_F(net, "A", "C") == doctest::Approx(5.0));
  Report rep = check_F_properties(net, {{"A", "B"}, {"B", "C"}, {"A", "C"}});
  CHECK(rep.find("F-triangle")->verdict == Verdict::Fail);
}

TEST_CASE("doubling both spaces doubles the stabilized value") {
  ReactionNetwork net;
  net.add_node(prim("G"));
  net.add_node(prim("Gp"));
  SpaceNode g2 = prim("2G");
  g2.factors = {{2.0, "G"}};
  g2.primitive = false;
  SpaceNode gp2 = prim("2Gp");
  gp2.factors = {{2.0, "Gp"}};
  gp2.primitive = false;
  net.add_node(g2);
  net.add_node(gp2);
  net.set_direct_D("G", "Gp", 1.5);
  net.set_direct_D("2G", "2Gp", 3.0);
  Report rep = check_F_properties(net, {{"G", "Gp"}});
  CHECK(rep.find("F-scaling")->verdict == Verdict::Pass);
  CHECK(compute_F(net, "2G", "2Gp") == doctest::Approx(2.0 * compute_F(net, "G", "Gp")).epsilon(1e-12));
}

TEST_CASE("entropy criterion decides accessibility across two spaces") {
  // True accessibility: S_g(X) + offset <= S_g'(Y), with the offset realized
  // as the cheapest witness jump.
  const double offset = 0.75;
  ReactionNetwork net;
  net.add_node(prim("g"));
  net.add_node(prim("gp"));
  net.set_direct_D("g", "gp", offset);
  auto relation = [&](const StateRef& x, const StateRef& y) {
    return x.coords[0] + offset <= y.coords[0] ? Comparability::Precedes
                                               : Comparability::NotPrecedes;
  };
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> c(0.0, 4.0);
  std::vector<std::pair<StateRef, StateRef>> sample;
  for (int i = 0; i < 100; ++i) sample.push_back({at("g", c(rng)), at("gp", c(rng))});
  Report rep = check_theorem6(net, "g", "gp", relation, sample, 1e-9);
  INFO(rep.find("theorem6")->witness);
  CHECK(rep.find("theorem6")->verdict == Verdict::Pass);
}

TEST_CASE("exact-boundary pairs are excluded from the strict counts") {
  ReactionNetwork net;
  net.add_node(prim("g"));
  net.add_node(prim("gp"));
  net.set_direct_D("g", "gp", 1.0);
  auto relation = [](const StateRef&, const StateRef&) { return Comparability::Precedes; };
  std::vector<std::pair<StateRef, StateRef>> sample = {{at("g", 1.0), at("gp", 2.0)}};
  Report rep = check_theorem6(net, "g", "gp", relation, sample, 1e-9);
  CHECK(rep.find("theorem6")->verdict == Verdict::Pass);
  CHECK(rep.find("theorem6-boundary") != nullptr);
}

TEST_CASE("unconnected spaces make the criterion vacuous") {
  ReactionNetwork net;
  net.add_node(prim("g"));
  net.add_node(prim("gp"));
  auto never = [](const StateRef&, const StateRef&) { return Comparability::NotPrecedes; };
  auto always = [](const StateRef&, const StateRef&) { return Comparability::Precedes; };
  std::vector<std::pair<StateRef, StateRef>> sample = {{at("g", 1.0), at("gp", 9.0)}};
  CHECK(check_theorem6(net, "g", "gp", never, sample, 1e-9).all_passed());
  CHECK(check_theorem6(net, "g", "gp", always, sample, 1e-9).has_failure());
}

namespace {

// Elements E1, E2 with a compound C and the product node P = 1*E1 x 1*E2.
ReactionNetwork element_network(double f_cp, double f_pc) {
  ReactionNetwork net;
  SpaceNode e1 = prim("E1");
  e1.element = true;
  e1.composition = {1.0, 0.0};
  SpaceNode e2 = prim("E2");
  e2.element = true;
  e2.composition = {0.0, 1.0};
  SpaceNode c = prim("C");
  c.composition = {1.0, 1.0};
  SpaceNode p = prim("P");
  p.factors = {{1.0, "E1"}, {1.0, "E2"}};
  p.primitive = false;
  p.composition = {1.0, 1.0};
  net.add_node(e1);
  net.add_node(e2);
  net.add_node(c);
  net.add_node(p);
  net.set_direct_D("C", "P", f_cp);
  net.set_direct_D("P", "C", f_pc);
  return net;
}

}  // namespace

TEST_CASE("saturated gaps pin the compound constant uniquely") {
  ReactionNetwork net = element_network(3.0, -3.0);
  CHECK(net.element_product_for("C") == std::optional<std::string>{"P"});
  CalibrationSolution sol = solve_constants(net);
  REQUIRE(sol.status == CalibrationSolution::Status::Feasible);
  CHECK(sol.B.at("C") == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.B.at("E1") == 0.0);
  CHECK(sol.B.at("E2") == 0.0);
  CHECK(sol.intervals.at("C").first == doctest::Approx(3.0));
  CHECK(sol.intervals.at("C").second == doctest::Approx(3.0));
}

TEST_CASE("slack gap resolves to the interval midpoint") {
  ReactionNetwork net = element_network(3.0, -2.0);
  CalibrationSolution sol = solve_constants(net);
  REQUIRE(sol.status == CalibrationSolution::Status::Feasible);
  CHECK(sol.intervals.at("C").first == doctest::Approx(2.0));
  CHECK(sol.intervals.at("C").second == doctest::Approx(3.0));
  CHECK(sol.B.at("C") == doctest::Approx(2.5));
}

TEST_CASE("a disconnected node is reported free and set to zero") {
  ReactionNetwork net = element_network(3.0, -3.0);
  net.add_node(prim("LONE"));
  CalibrationSolution sol = solve_constants(net);
  REQUIRE(sol.status == CalibrationSolution::Status::UnboundedDegreesOfFreedom);
  REQUIRE(sol.free_nodes == std::vector<std::string>{"LONE"});
  CHECK(sol.B.at("LONE") == 0.0);
  CHECK(sol.B.at("C") == doctest::Approx(3.0));
}

TEST_CASE("an inconsistent deficit table yields an infeasibility certificate") {
  ReactionNetwork net = element_network(-3.0, 2.0);  // forces C <= -3 and C >= -2
  CalibrationSolution sol = solve_constants(net);
  CHECK(sol.status == CalibrationSolution::Status::Infeasible);
  CHECK(!sol.violating_cycle.empty());
}

TEST_CASE("witnesses from one zero-offset entropy leave all constants at zero") {
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  net.add_edge_witness("A", "B", {at("A", 2.0), at("B", 2.0), ""});
  net.add_edge_witness("B", "A", {at("B", 1.0), at("A", 1.0), ""});
  CalibrationSolution sol = solve_constants(net);
  CHECK(sol.B.at("A") == 0.0);
  CHECK(sol.B.at("B") == 0.0);
}

TEST_CASE("the three deficit notions are pointwise ordered") {
  ReactionNetwork net;
  net.add_node(prim("A"));
  net.add_node(prim("B"));
  net.add_node(prim("C"));
  net.add_node(prim("K"));
  auto product = [&](const std::string& id, const std::string& a) {
    SpaceNode p = prim(id);
    p.factors = {{1.0, a}, {1.0, "K"}};
    p.primitive = false;
    net.add_node(p);
  };
  product("AxK", "A");
  product("BxK", "B");
  product("CxK", "C");
  net.set_direct_D("A", "B", 2.0);
  net.set_direct_D("B", "C", 1.0);
  net.set_direct_D("A", "C", 4.0);
  net.set_direct_D("AxK", "CxK", 2.5);
  net.add_catalyst("K");
  for (const char* u : {"A", "B", "C"})
    for (const char* w : {"A", "B", "C"}) {
      if (std::string(u) == w) continue;
      double d = compute_D(net, u, w);
      double e = compute_E(net, u, w);
      double f = compute_F(net, u, w);
      INFO(u << "->" << w);
      CHECK(e <= d + 1e-12);
      CHECK(f <= e + 1e-12);
    }
  CHECK(compute_F(net, "A", "C") == doctest::Approx(2.5));
}

TEST_CASE("calibrators in two ideal gases match a unit entropy difference") {
  SimpleSystemModel g1 = make_ideal_gas(1.0, "one");
  SimpleSystemModel g2 = make_ideal_gas(1.0, "two");
  auto S1 = [&](const StatePoint& p) { return g1.entropy(p); };
  auto S2 = [&](const StatePoint& p) { return g2.entropy(p); };
  CalibratorQuad q = find_calibrators(g1, S1, g2, S2, 1.0, 1e-10);
  CHECK(!q.degenerate);
  CHECK(S1(q.x1) - S1(q.x0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(S2(q.y1) - S2(q.y0) == doctest::Approx(1.0).epsilon(1e-8));
  // Closed form: a unit jump at fixed volume means U1/U0 = exp(2/3).
  CHECK(q.x1.U / q.x0.U == doctest::Approx(std::exp(2.0 / 3.0)).epsilon(1e-8));
}

TEST_CASE("zero target collapses the calibrators and is flagged") {
  SimpleSystemModel g1 = make_ideal_gas(1.0, "one");
  SimpleSystemModel g2 = make_ideal_gas(1.0, "two");
  auto S1 = [&](const StatePoint& p) { return g1.entropy(p); };
  auto S2 = [&](const StatePoint& p) { return g2.entropy(p); };
  CalibratorQuad q = find_calibrators(g1, S1, g2, S2, 0.0, 1e-10);
  CHECK(q.degenerate);
  CHECK(q.x0.U == q.x1.U);
  CHECK(q.y0.U == q.y1.U);
}

TEST_CASE("calibrators across ideal gas and van der Waals agree") {
  SimpleSystemModel gas = make_ideal_gas();
  SimpleSystemModel vdw = make_van_der_waals();
  auto S1 = [&](const StatePoint& p) { return gas.entropy(p); };
  auto S2 = numeric_entropy(vdw, StatePoint{5.0, {2.0}});
  CalibratorQuad q = find_calibrators(gas, S1, vdw, S2, 0.5, 1e-10);
  double d1 = S1(q.x1) - S1(q.x0);
  double d2 = S2(q.y1) - S2(q.y0);
  CHECK(d1 == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(d2 == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-6));
}

TEST_CASE("an out-of-range target is rejected") {
  SimpleSystemModel g1 = make_ideal_gas(1.0, "one");
  auto S1 = [&](const StatePoint& p) { return g1.entropy(p); };
  CHECK_THROWS_AS(find_calibrators(g1, S1, g1, S1, 1e6, 1e-10), std::range_error);
}
