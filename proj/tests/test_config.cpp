#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "thermo/config.hpp"

using namespace thermo;

TEST_CASE("sections, comments and repeated keys parse in order") {
  ConfigDoc doc = parse_config(
      "# header comment\n"
      "[system.gas]\n"
      "kind = ideal-gas   # trailing comment\n"
      "amount = 2.0\n"
      "[catalysts]\n"
      "id = K1\n"
      "id = K2\n");
  REQUIRE(doc.sections.size() == 2);
  CHECK(*doc.find("system.gas")->get("kind") == "ideal-gas");
  CHECK(doc.find("catalysts")->get_all("id") == std::vector<std::string>{"K1", "K2"});
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_config("[ok]\nx = 1\nbroken line\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_config("key = before any section\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[unterminated\n"), ParseError);
}

TEST_CASE("system sections build models with domain overrides") {
  ConfigDoc doc = parse_config(
      "[system.main]\n"
      "kind = ideal-gas\n"
      "amount = 2.0\n"
      "domain.u = 0.5 20\n"
      "domain.v = 0.5 20\n"
      "[system.fluid]\n"
      "kind = van-der-waals\n");
  auto models = load_systems(doc);
  REQUIRE(models.size() == 2);
  CHECK(models[0].name.label == "main");
  CHECK(models[0].amount == 2.0);
  CHECK(models[0].u_bounds[0] == 0.5);
  CHECK(models[0].u_bounds[1] == 20.0);
  CHECK(models[1].name.label == "fluid");
  CHECK_THROWS_AS(load_systems(parse_config("[system.x]\nkind = nonsense\n")), ParseError);
}

TEST_CASE("network sections build nodes, edges and catalysts") {
  ConfigDoc doc = parse_config(
      "[node.A]\n"
      "[node.B]\n"
      "entropy = coord 1.0\n"
      "[edge.A.B]\n"
      "witness = 1.0 -> 3.0\n"
      "witness = 0.5 -> 3.5\n"
      "[edge.B.A]\n"
      "D = -2.5\n");
  ReactionNetwork net = load_network(doc);
  // Second witness: S'(3.5) = 3.5 + 1 = 4.5 minus S(0.5) = 0.5 gives 4; the
  // first gives 3.
  CHECK(compute_D(net, "A", "B") == doctest::Approx(3.0));
  CHECK(compute_D(net, "B", "A") == doctest::Approx(-2.5));
}

TEST_CASE("factor lists build product nodes usable as catalysts") {
  ConfigDoc doc = parse_config(
      "[node.G]\n"
      "[node.Gp]\n"
      "[node.K]\n"
      "[node.GxK]\n"
      "factors = 1*G + 1*K\n"
      "[node.GpxK]\n"
      "factors = 1*Gp + 1*K\n"
      "[edge.G.Gp]\n"
      "D = 5\n"
      "[edge.GxK.GpxK]\n"
      "D = 2\n"
      "[catalysts]\n"
      "id = K\n");
  ReactionNetwork net = load_network(doc);
  CHECK(compute_F(net, "G", "Gp") == doctest::Approx(2.0));
}

TEST_CASE("relation files produce a closed exhaustive relation") {
  FiniteRelation rel = load_relation(
      "# a three-state chain\n"
      "@denominator 2\n"
      "@exhaustive\n"
      "1*A -> 1*B\n"
      "1*B -> 1*C\n");
  REQUIRE(rel.closed());
  auto one = [&](const std::string& s) {
    return GridCompound::single(rel.state_index(StateRef::named({"rel"}, s)));
  };
  CHECK(rel.query(one("A"), one("C")) == Comparability::Precedes);
  CHECK(rel.query(one("C"), one("A")) == Comparability::NotPrecedes);
}

TEST_CASE("fractional scales set the grid denominator automatically") {
  FiniteRelation rel = load_relation("1/2*A + 1/2*B -> 1*C\n");
  CHECK(rel.options().max_denominator == 2);
  auto idx = [&](const std::string& s) { return rel.state_index(StateRef::named({"rel"}, s)); };
  GridCompound mix = GridCompound::make({{Rational(1, 2), idx("A")}, {Rational(1, 2), idx("B")}});
  CHECK(rel.query(mix, GridCompound::single(idx("C"))) == Comparability::Precedes);
}

TEST_CASE("remove directives plant closure holes") {
  FiniteRelation rel = load_relation(
      "@exhaustive\n"
      "1*A -> 1*B\n"
      "1*B -> 1*C\n"
      "@remove 1*A -> 1*C\n");
  auto one = [&](const std::string& s) {
    return GridCompound::single(rel.state_index(StateRef::named({"rel"}, s)));
  };
  CHECK(rel.query(one("A"), one("C")) == Comparability::NotPrecedes);
  CHECK(rel.query(one("A"), one("B")) == Comparability::Precedes);
}

TEST_CASE("malformed relation lines are rejected with positions") {
  CHECK_THROWS_AS(load_relation("1*A 1*B\n"), ParseError);
  CHECK_THROWS_AS(load_relation("@bogus\n"), ParseError);
  CHECK_THROWS_AS(load_relation("x/y*A -> 1*B\n"), ParseError);
}

TEST_CASE("csv output is deterministic with a metadata header") {
  CsvMeta meta{"0.1.0", fnv1a_hash("config body"), 42};
  auto render = [&]() {
    std::ostringstream os;
    write_csv(os, meta, {"check", "verdict", "witness"},
              {{"a", "Pass", ""}, {"b", "Fail", "x, y"}});
    return os.str();
  };
  std::string a = render(), b = render();
  CHECK(a == b);
  CHECK(a.find("# seed: 42") != std::string::npos);
  CHECK(a.find("# config-hash: ") != std::string::npos);
  // Commas inside a witness cell must not add columns.
  CHECK(a.find("x; y") != std::string::npos);
}

TEST_CASE("reals round-trip through the 17-digit format") {
  double x = std::atan(1.0) * 4;
  CHECK(std::stod(format_real(x)) == x);
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("the content hash is stable and content-sensitive") {
  CHECK(fnv1a_hash("abc") == fnv1a_hash("abc"));
  CHECK(fnv1a_hash("abc") != fnv1a_hash("abd"));
}
