#ifndef THERMO_FINITE_RELATION_HPP
#define THERMO_FINITE_RELATION_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "thermo/compound.hpp"
#include "thermo/oracle.hpp"
#include "thermo/rational.hpp"

namespace thermo {

// Compound state over a finite state set with exact rational scales.
// Canonical: parts sorted by state index, equal states merged.
struct GridCompound {
  std::vector<std::pair<Rational, int>> parts;  // (scale, state index)

  static GridCompound single(int state, Rational scale = Rational(1));
  static GridCompound make(std::vector<std::pair<Rational, int>> parts);

  GridCompound composed_with(const GridCompound& o) const;
  GridCompound scaled(const Rational& t) const;
  Rational total_scale() const;
  std::string key() const;

  bool operator==(const GridCompound& o) const { return parts == o.parts; }
};

// Accessibility facts over a finite state set, restricted to a rational scale
// grid with bounded denominator. The closure is computed over the universe of
// all compounds with at most two distinct parts whose scales stay on the grid;
// splitting/recombination holds by canonical form, while reflexivity,
// transitivity, consistency and scaling are applied as rewrite rules until a
// fixpoint. Pairs outside the closure answer Unknown (or NotPrecedes when the
// relation is declared exhaustive).
class FiniteRelation {
 public:
  struct Options {
    int max_denominator = 16;
    // Largest total scale admitted for a universe compound, as a rational
    // bound; compounds heavier than this are not tracked.
    Rational max_mass = Rational(2);
    bool exhaustive = false;
  };

  FiniteRelation(std::vector<StateRef> states, std::vector<Rational> scale_grid);
  FiniteRelation(std::vector<StateRef> states, std::vector<Rational> scale_grid, Options options);
  ~FiniteRelation();
  FiniteRelation(const FiniteRelation& o);
  FiniteRelation& operator=(const FiniteRelation&) = delete;

  const std::vector<StateRef>& states() const { return states_; }
  const std::vector<Rational>& scale_grid() const { return scale_grid_; }
  const Options& options() const { return options_; }
  bool exhaustive() const { return options_.exhaustive; }

  int state_index(const StateRef& s) const;

  void add_fact(const GridCompound& lhs, const GridCompound& rhs);
  // Converts double scales to grid rationals; throws if a scale is off-grid.
  void add_fact(const CompoundState& lhs, const CompoundState& rhs);

  void close();
  bool closed() const { return closed_; }
  std::size_t fact_count() const;
  std::size_t universe_size() const { return universe_.size(); }

  // Three-valued query; requires close() to have run.
  Comparability query(const GridCompound& lhs, const GridCompound& rhs) const;
  Comparability query(const CompoundState& lhs, const CompoundState& rhs) const;

  // True when the pair is a recorded fact (Precedes only).
  bool holds(const GridCompound& lhs, const GridCompound& rhs) const {
    return query(lhs, rhs) == Comparability::Precedes;
  }

  std::optional<GridCompound> to_grid(const CompoundState& c) const;
  std::optional<int> universe_id(const GridCompound& c) const;
  const std::vector<GridCompound>& universe() const { return universe_; }
  const std::vector<std::pair<GridCompound, GridCompound>>& base_facts() const {
    return base_facts_;
  }
  // All closure facts as universe-id pairs, sorted; excludes reflexive pairs.
  std::vector<std::pair<int, int>> nontrivial_facts() const;

  // Removes a single derived fact after closure without re-closing; used to
  // plant axiom violations in tests and corpus sweeps.
  void remove_fact(const GridCompound& lhs, const GridCompound& rhs);

  std::optional<Rational> to_grid_scale(double x) const;

 private:
  struct Impl;

  void build_universe();
  void add_closure_fact(int a, int b, std::vector<std::pair<int, int>>& worklist);

  std::vector<StateRef> states_;
  std::vector<Rational> scale_grid_;
  Options options_;

  std::vector<GridCompound> universe_;
  std::unique_ptr<Impl> impl_;

  std::vector<std::pair<GridCompound, GridCompound>> base_facts_;
  std::vector<std::set<int>> succ_;
  std::vector<std::set<int>> pred_;
  bool closed_ = false;
};

// AccessOracle view of a closed FiniteRelation.
class FiniteClosureOracle : public AccessOracle {
 public:
  explicit FiniteClosureOracle(const FiniteRelation& rel) : AccessOracle(0.0), rel_(rel) {}

  Comparability precedes(const CompoundState& a, const CompoundState& b) const override {
    return rel_.query(a, b);
  }

  const FiniteRelation& relation() const { return rel_; }

 private:
  const FiniteRelation& rel_;
};

// Scale grid {1/d, 2/d, ..., up to max_mass} for denominator d.
std::vector<Rational> uniform_scale_grid(int denominator, const Rational& max_mass = Rational(1));

}  // namespace thermo

#endif
