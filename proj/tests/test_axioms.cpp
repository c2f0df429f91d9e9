#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "thermo/axiom_checks.hpp"
#include "thermo/finite_relation.hpp"

using namespace thermo;

namespace {

std::vector<StateRef> named_states(std::initializer_list<const char*> names) {
  std::vector<StateRef> out;
  for (const char* n : names) out.push_back(StateRef::named({"G"}, n));
  return out;
}

GridCompound g(int s, Rational t = Rational(1)) { return GridCompound::single(s, t); }

AnalyticEntropyOracle gas_oracle() {
  AnalyticEntropyOracle oracle;
  oracle.register_space({"gas"}, [](const StateRef& s) {
    return 1.5 * std::log(s.coords[0]) + std::log(s.coords[1]);
  });
  return oracle;
}

std::vector<CompoundState> random_gas_compounds(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(1.0, 4.0);
  std::vector<CompoundState> out;
  for (int i = 0; i < count; ++i)
    out.push_back(CompoundState::single(StateRef::at({"gas"}, {c(rng), c(rng)})));
  return out;
}

}  // namespace

TEST_CASE("closure of a single fact passes the order axioms") {
  FiniteRelation rel(named_states({"X", "Y"}), uniform_scale_grid(1, Rational(2)));
  rel.add_fact(g(0), g(1));
  rel.close();
  Report rep = check_axioms(rel);
  for (const char* ax : {"A1", "A2", "A3", "A4", "A5"}) {
    auto* r = rep.find(ax);
    REQUIRE(r != nullptr);
    CHECK(r->verdict == Verdict::Pass);
  }
}

TEST_CASE("transitive closure passes A2") {
  FiniteRelation rel(named_states({"X", "Y", "Z"}), uniform_scale_grid(2, Rational(2)));
  rel.add_fact(g(0), g(1));
  rel.add_fact(g(1), g(2));
  rel.close();
  Report rep = check_axioms(rel);
  CHECK(rep.find("A2")->verdict == Verdict::Pass);
  CHECK(!rep.has_failure());
}

TEST_CASE("analytic backend passes all six axioms on random compounds") {
  AnalyticEntropyOracle oracle = gas_oracle();
  Report rep = check_axioms(oracle, random_gas_compounds(50, 1));
  for (const auto& r : rep.results) {
    INFO(r.check << ": " << r.witness);
    CHECK(r.verdict == Verdict::Pass);
  }
}

TEST_CASE("planted transitivity hole is flagged") {
  FiniteRelation rel(named_states({"X", "Y", "Z"}), uniform_scale_grid(1, Rational(2)));
  rel.add_fact(g(0), g(1));
  rel.add_fact(g(1), g(2));
  rel.close();
  rel.remove_fact(g(0), g(2));
  Report rep = check_axioms(rel);
  CHECK(rep.find("A2")->verdict == Verdict::Fail);
  CHECK(!rep.find("A2")->witness.empty());
}

TEST_CASE("planted scaling hole is flagged") {
  FiniteRelation rel(named_states({"X", "Y"}), uniform_scale_grid(2, Rational(2)));
  rel.add_fact(g(0), g(1));
  rel.close();
  rel.remove_fact(g(0, Rational(1, 2)), g(1, Rational(1, 2)));
  Report rep = check_axioms(rel);
  CHECK((rep.find("A3")->verdict == Verdict::Fail || rep.find("A4")->verdict == Verdict::Fail));
}

TEST_CASE("cancellation holds algebraically on analytic backends") {
  AnalyticEntropyOracle oracle = gas_oracle();
  Report rep = check_cancellation(oracle, random_gas_compounds(30, 2));
  CHECK(rep.all_passed());
}

TEST_CASE("cancellation passes when the conclusion is a base fact") {
  FiniteRelation rel(named_states({"X", "Y", "Z"}), uniform_scale_grid(1, Rational(3)));
  rel.add_fact(g(0), g(1));
  rel.close();
  // (X, Z) -> (Y, Z) is in the closure by composition; X -> Y is a base fact.
  Report rep = check_cancellation(rel);
  CHECK(rep.all_passed());
}

TEST_CASE("asserted context fact without its cancellation consequence fails") {
  FiniteRelation::Options opt;
  opt.exhaustive = true;
  FiniteRelation rel(named_states({"X", "Y", "Z", "W"}), uniform_scale_grid(1, Rational(2)), opt);
  rel.add_fact(g(0).composed_with(g(2)), g(1).composed_with(g(2)));
  rel.close();
  REQUIRE(rel.query(g(0), g(1)) == Comparability::NotPrecedes);
  Report rep = check_cancellation(rel);
  CHECK(rep.has_failure());
  CHECK(!rep.results[0].witness.empty());
}

TEST_CASE("without the exhaustive marker the same relation is inconclusive") {
  FiniteRelation rel(named_states({"X", "Y", "Z", "W"}), uniform_scale_grid(1, Rational(2)));
  rel.add_fact(g(0).composed_with(g(2)), g(1).composed_with(g(2)));
  rel.close();
  Report rep = check_cancellation(rel);
  CHECK(!rep.has_failure());
  CHECK(rep.has_inconclusive());
}

TEST_CASE("comparability is total on analytic backends") {
  AnalyticEntropyOracle oracle = gas_oracle();
  Report rep = check_CH(oracle, {"gas"}, random_gas_compounds(30, 3));
  CHECK(rep.all_passed());
}

TEST_CASE("two disjoint chains fail comparability with a cross pair") {
  FiniteRelation::Options opt;
  opt.exhaustive = true;
  FiniteRelation rel(named_states({"A", "B", "C", "D"}), uniform_scale_grid(1, Rational(2)), opt);
  rel.add_fact(g(0), g(1));
  rel.add_fact(g(2), g(3));
  rel.close();
  Report rep = check_CH(rel);
  CHECK(rep.has_failure());
  CHECK(!rep.results[0].witness.empty());
}

TEST_CASE("saturated relation: premise and conclusion of the density lemma fail together") {
  FiniteRelation::Options opt;
  opt.exhaustive = true;
  FiniteRelation rel(named_states({"X", "Y"}), uniform_scale_grid(1, Rational(2)), opt);
  rel.add_fact(g(0), g(1));
  rel.add_fact(g(1), g(0));
  rel.close();
  FiniteClosureOracle oracle(rel);
  std::vector<CompoundState> states = {
      CompoundState::single(StateRef::named({"G"}, "X")),
      CompoundState::single(StateRef::named({"G"}, "Y")),
  };
  std::map<std::string, std::vector<CompoundState>> nbhd;
  nbhd[states[0].str()] = states;
  nbhd[states[1].str()] = states;
  Report rep = check_lemma1(oracle, states, nbhd);
  CHECK(rep.find("lemma1-premise")->verdict == Verdict::Fail);
  CHECK(rep.find("lemma1-conclusion")->verdict == Verdict::Fail);
  CHECK(rep.find("lemma1")->verdict == Verdict::Pass);  // implication is vacuous
}

TEST_CASE("single-state space: density lemma vacuously passes") {
  AnalyticEntropyOracle oracle = gas_oracle();
  std::vector<CompoundState> states = {CompoundState::single(StateRef::at({"gas"}, {2.0, 2.0}))};
  std::map<std::string, std::vector<CompoundState>> nbhd;
  nbhd[states[0].str()] = states;
  Report rep = check_lemma1(oracle, states, nbhd);
  CHECK(rep.find("lemma1-premise")->verdict == Verdict::Fail);
  CHECK(rep.find("lemma1")->verdict == Verdict::Pass);
}

TEST_CASE("analytic backend: both halves of the density lemma hold on a grid") {
  AnalyticEntropyOracle oracle = gas_oracle();
  std::vector<CompoundState> states;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      states.push_back(CompoundState::single(StateRef::at({"gas"}, {1.0 + i, 1.0 + j})));
  std::map<std::string, std::vector<CompoundState>> nbhd;
  for (const auto& s : states) {
    double u = s.parts()[0].state.coords[0];
    double v = s.parts()[0].state.coords[1];
    nbhd[s.str()] = {CompoundState::single(StateRef::at({"gas"}, {u * 0.99, v})),
                     CompoundState::single(StateRef::at({"gas"}, {u * 1.01, v}))};
  }
  // Extra successor candidate (no neighborhood of its own) so the top corner
  // of the grid also has a strictly accessible state.
  states.push_back(CompoundState::single(StateRef::at({"gas"}, {9.0, 9.0})));
  Report rep = check_lemma1(oracle, states, nbhd);
  CHECK(rep.find("lemma1-premise")->verdict == Verdict::Pass);
  CHECK(rep.find("lemma1-conclusion")->verdict == Verdict::Pass);
  CHECK(rep.find("lemma1")->verdict == Verdict::Pass);
}
