#include "thermo/axiom_checks.hpp"

#include <algorithm>
#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace thermo {

namespace {

// Lowers a verdict: Fail dominates Inconclusive dominates Pass.
void worsen(Verdict& v, Verdict w) {
  if (w == Verdict::Fail) v = Verdict::Fail;
  else if (w == Verdict::Inconclusive && v == Verdict::Pass) v = Verdict::Inconclusive;
}

std::string pair_str(const CompoundState& a, const CompoundState& b) {
  return "[" + a.str() + "] vs [" + b.str() + "]";
}

// Caps quadratic/cubic sample loops to keep checks bounded.
std::size_t capped(std::size_t n, std::size_t cap) { return std::min(n, cap); }

}  // namespace

Report check_axioms(const AccessOracle& oracle, const std::vector<CompoundState>& sample) {
  Report rep;
  const std::size_t n = sample.size();

  {  // A1: reflexivity
    Verdict v = Verdict::Pass;
    std::string w;
    for (const auto& c : sample) {
      Comparability q = oracle.precedes(c, c);
      if (q == Comparability::NotPrecedes) {
        v = Verdict::Fail;
        w = "not reflexive at " + c.str();
        break;
      }
      if (q == Comparability::Unknown) worsen(v, Verdict::Inconclusive);
    }
    rep.add("A1", v, w);
  }

  {  // A2: transitivity on sampled triples
    Verdict v = Verdict::Pass;
    std::string w;
    const std::size_t m = capped(n, 20);
    for (std::size_t i = 0; i < m && v != Verdict::Fail; ++i)
      for (std::size_t j = 0; j < m && v != Verdict::Fail; ++j)
        for (std::size_t k = 0; k < m; ++k) {
          if (!oracle.precedes_strict(sample[i], sample[j])) continue;
          if (!oracle.precedes_strict(sample[j], sample[k])) continue;
          Comparability q = oracle.precedes(sample[i], sample[k]);
          if (q == Comparability::NotPrecedes) {
            v = Verdict::Fail;
            w = "chain broken: " + pair_str(sample[i], sample[k]) + " via " + sample[j].str();
            break;
          }
          if (q == Comparability::Unknown) worsen(v, Verdict::Inconclusive);
        }
    rep.add("A2", v, w);
  }

  {  // A3: consistency of composition
    Verdict v = Verdict::Pass;
    std::string w;
    const std::size_t m = capped(n, 16);
    for (std::size_t i = 0; i < m && v != Verdict::Fail; ++i)
      for (std::size_t j = 0; j < m && v != Verdict::Fail; ++j)
        for (std::size_t k = 0; k < m && v != Verdict::Fail; ++k)
          for (std::size_t l = 0; l < m; ++l) {
            if (!oracle.precedes_strict(sample[i], sample[j])) break;
            if (!oracle.precedes_strict(sample[k], sample[l])) continue;
            CompoundState lhs = compose(sample[i], sample[k]);
            CompoundState rhs = compose(sample[j], sample[l]);
            Comparability q = oracle.precedes(lhs, rhs);
            if (q == Comparability::NotPrecedes) {
              v = Verdict::Fail;
              w = "composition broken: " + pair_str(lhs, rhs);
              break;
            }
            if (q == Comparability::Unknown) worsen(v, Verdict::Inconclusive);
          }
    rep.add("A3", v, w);
  }

  {  // A4: scaling invariance
    Verdict v = Verdict::Pass;
    std::string w;
    const double lambdas[] = {0.5, 0.75, 2.0};
    const std::size_t m = capped(n, 24);
    for (std::size_t i = 0; i < m && v != Verdict::Fail; ++i)
      for (std::size_t j = 0; j < m && v != Verdict::Fail; ++j) {
        if (!oracle.precedes_strict(sample[i], sample[j])) continue;
        for (double t : lambdas) {
          Comparability q = oracle.precedes(scale(t, sample[i]), scale(t, sample[j]));
          if (q == Comparability::NotPrecedes) {
            std::ostringstream os;
            os << "scaling by " << t << " broke " << pair_str(sample[i], sample[j]);
            v = Verdict::Fail;
            w = os.str();
            break;
          }
          if (q == Comparability::Unknown) worsen(v, Verdict::Inconclusive);
        }
      }
    rep.add("A4", v, w);
  }

  {  // A5: splitting and recombination
    Verdict v = Verdict::Pass;
    std::string w;
    for (const auto& c : sample) {
      CompoundState split = compose(scale(0.5, c), scale(0.5, c));
      Comparability fwd = oracle.precedes(c, split);
      Comparability bwd = oracle.precedes(split, c);
      if (fwd == Comparability::NotPrecedes || bwd == Comparability::NotPrecedes) {
        v = Verdict::Fail;
        w = "split not equivalent at " + c.str();
        break;
      }
      if (fwd == Comparability::Unknown || bwd == Comparability::Unknown)
        worsen(v, Verdict::Inconclusive);
    }
    rep.add("A5", v, w);
  }

  {  // A6: stability under vanishing context, tested at depths 1..8
    Verdict v = Verdict::Pass;
    std::string w;
    const std::size_t m = capped(n, 10);
    for (std::size_t i = 0; i < m && v != Verdict::Fail; ++i)
      for (std::size_t j = 0; j < m && v != Verdict::Fail; ++j)
        for (std::size_t k = 0; k < m && v != Verdict::Fail; ++k)
          for (std::size_t l = 0; l < m; ++l) {
            bool premise = true;
            bool unknown = false;
            double eps = 1.0;
            for (int d = 1; d <= 8; ++d) {
              eps *= 0.5;
              CompoundState lhs = compose(sample[i], scale(eps, sample[k]));
              CompoundState rhs = compose(sample[j], scale(eps, sample[l]));
              Comparability q = oracle.precedes(lhs, rhs);
              if (q == Comparability::Unknown) unknown = true;
              if (q != Comparability::Precedes) {
                premise = false;
                break;
              }
            }
            if (!premise) continue;
            Comparability q = oracle.precedes(sample[i], sample[j]);
            if (unknown || q == Comparability::Unknown) {
              worsen(v, Verdict::Inconclusive);
              continue;
            }
            if (q == Comparability::NotPrecedes) {
              v = Verdict::Fail;
              w = "not stable to grid depth 8: " + pair_str(sample[i], sample[j]);
              break;
            }
          }
    rep.add("A6", v, w);
  }

  return rep;
}

Report check_axioms(const FiniteRelation& rel) {
  Report rep;
  const auto& uni = rel.universe();
  const int U = static_cast<int>(uni.size());
  auto facts = rel.nontrivial_facts();

  std::vector<std::set<int>> succ(U);
  for (auto [a, b] : facts) succ[a].insert(b);
  // Flat adjacency for the hot loops below.
  std::vector<char> adj(static_cast<std::size_t>(U) * U, 0);
  for (auto [a, b] : facts) adj[static_cast<std::size_t>(a) * U + b] = 1;

  auto present = [&](int a, int b) {
    return a == b || adj[static_cast<std::size_t>(a) * U + b] != 0;
  };
  auto gc_str = [&](int id) { return uni[id].key(); };

  {  // A1: every universe element reaches itself
    Verdict v = Verdict::Pass;
    std::string w;
    for (int a = 0; a < U; ++a) {
      if (rel.query(uni[a], uni[a]) != Comparability::Precedes) {
        v = Verdict::Fail;
        w = "not reflexive at " + gc_str(a);
        break;
      }
    }
    rep.add("A1", v, w);
  }

  {  // A2: the table is transitively closed
    Verdict v = Verdict::Pass;
    std::string w;
    for (auto [a, b] : facts) {
      for (int c : succ[b]) {
        if (!present(a, c)) {
          v = Verdict::Fail;
          w = "missing consequence " + gc_str(a) + " -> " + gc_str(c) + " via " + gc_str(b);
          break;
        }
      }
      if (v == Verdict::Fail) break;
    }
    rep.add("A2", v, w);
  }

  {  // A3: facts compose whenever the composition stays in the universe
    Verdict v = Verdict::Pass;
    std::string w;
    // Composition table (-1 = composite leaves the universe), computed once;
    // the fact-pair scan below is quadratic in the fact count and must not
    // rebuild canonical keys per pair.
    std::vector<int> comp(static_cast<std::size_t>(U) * U, -1);
    for (int a = 0; a < U; ++a)
      for (int c = a; c < U; ++c) {
        auto id = rel.universe_id(uni[a].composed_with(uni[c]));
        int value = id ? *id : -1;
        comp[static_cast<std::size_t>(a) * U + c] = value;
        comp[static_cast<std::size_t>(c) * U + a] = value;
      }
    auto compose_id = [&](int a, int c) { return comp[static_cast<std::size_t>(a) * U + c]; };

    for (std::size_t i = 0; i < facts.size() && v != Verdict::Fail; ++i)
      for (std::size_t j = i; j < facts.size(); ++j) {
        auto [a, b] = facts[i];
        auto [c, d] = facts[j];
        int lhs = compose_id(a, c);
        int rhs = compose_id(b, d);
        if (lhs < 0 || rhs < 0) continue;
        if (!present(lhs, rhs)) {
          v = Verdict::Fail;
          w = "missing composite " + gc_str(lhs) + " -> " + gc_str(rhs);
          break;
        }
      }
    // Context case: compose a fact with an untouched bystander.
    for (std::size_t i = 0; i < facts.size() && v != Verdict::Fail; ++i)
      for (int u = 0; u < U; ++u) {
        auto [a, b] = facts[i];
        int lhs = compose_id(a, u);
        int rhs = compose_id(b, u);
        if (lhs < 0 || rhs < 0) continue;
        if (!present(lhs, rhs)) {
          v = Verdict::Fail;
          w = "missing context composite " + gc_str(lhs) + " -> " + gc_str(rhs);
          break;
        }
      }
    rep.add("A3", v, w);
  }

  {  // A4: facts scale along the grid
    Verdict v = Verdict::Pass;
    std::string w;
    for (auto [a, b] : facts) {
      for (const Rational& t : rel.scale_grid()) {
        auto lhs = rel.universe_id(uni[a].scaled(t));
        auto rhs = rel.universe_id(uni[b].scaled(t));
        if (!lhs || !rhs) continue;
        if (!present(*lhs, *rhs)) {
          v = Verdict::Fail;
          w = "missing scaled fact (" + t.str() + ") " + gc_str(*lhs) + " -> " + gc_str(*rhs);
          break;
        }
      }
      if (v == Verdict::Fail) break;
    }
    rep.add("A4", v, w);
  }

  // A5: splitting/recombination is an identity of the canonical representation.
  rep.add("A5", Verdict::Pass, "");

  {  // A6: contexts of weight 1/2^d, d up to the grid's reach
    Verdict v = Verdict::Pass;
    std::string w;
    std::vector<Rational> eps;
    for (const Rational& t : rel.scale_grid()) {
      Rational r = t;
      // keep only scales of the form 1/2^d
      bool pow2 = (r.num() == 1);
      std::int64_t den = r.den();
      while (pow2 && den > 1) {
        if (den % 2 != 0) pow2 = false;
        den /= 2;
      }
      if (pow2 && r < Rational(1)) eps.push_back(r);
    }
    std::sort(eps.begin(), eps.end(), [](const Rational& a, const Rational& b) { return b < a; });
    const int S = static_cast<int>(rel.states().size());
    if (!eps.empty()) {
      for (int x = 0; x < S && v == Verdict::Pass; ++x)
        for (int y = 0; y < S && v == Verdict::Pass; ++y) {
          GridCompound gx = GridCompound::single(x);
          GridCompound gy = GridCompound::single(y);
          if (rel.query(gx, gy) == Comparability::Precedes) continue;
          for (int z0 = 0; z0 < S && v == Verdict::Pass; ++z0)
            for (int z1 = 0; z1 < S; ++z1) {
              bool premise = true;
              for (const Rational& e : eps) {
                GridCompound lhs = gx.composed_with(GridCompound::single(z0, e));
                GridCompound rhs = gy.composed_with(GridCompound::single(z1, e));
                if (rel.query(lhs, rhs) != Comparability::Precedes) {
                  premise = false;
                  break;
                }
              }
              if (!premise) continue;
              // Premise held at every representable depth but the plain pair
              // is absent from the closure.
              if (rel.exhaustive()) {
                v = Verdict::Fail;
                w = "stable contexts but " + gx.key() + " -> " + gy.key() + " absent";
              } else {
                worsen(v, Verdict::Inconclusive);
                if (w.empty()) w = "undecided at grid depth: " + gx.key() + " -> " + gy.key();
              }
              break;
            }
        }
    }
    rep.add("A6", v, w);
  }

  return rep;
}

Report check_cancellation(const AccessOracle& oracle, const std::vector<CompoundState>& triples_flat) {
  Report rep;
  Verdict v = Verdict::Pass;
  std::string w;
  for (std::size_t i = 0; i + 2 < triples_flat.size(); i += 3) {
    const CompoundState& x = triples_flat[i];
    const CompoundState& y = triples_flat[i + 1];
    const CompoundState& z = triples_flat[i + 2];
    if (!oracle.precedes_strict(compose(x, z), compose(y, z))) continue;
    Comparability q = oracle.precedes(x, y);
    if (q == Comparability::NotPrecedes) {
      v = Verdict::Fail;
      w = "cancellation broken: " + pair_str(x, y) + " with context " + z.str();
      break;
    }
    if (q == Comparability::Unknown) worsen(v, Verdict::Inconclusive);
  }
  rep.add("cancellation", v, w);
  return rep;
}

Report check_cancellation(const FiniteRelation& rel) {
  Report rep;
  Verdict v = Verdict::Pass;
  std::string w;
  const auto& uni = rel.universe();
  for (auto [a, b] : rel.nontrivial_facts()) {
    const GridCompound& l = uni[a];
    const GridCompound& r = uni[b];
    for (const auto& pl : l.parts) {
      for (const auto& pr : r.parts) {
        if (!(pl.first == pr.first) || pl.second != pr.second) continue;
        // Drop the shared part from both sides.
        GridCompound lc, rc;
        bool dropped = false;
        for (const auto& p : l.parts) {
          if (!dropped && p.first == pl.first && p.second == pl.second) {
            dropped = true;
            continue;
          }
          lc.parts.push_back(p);
        }
        dropped = false;
        for (const auto& p : r.parts) {
          if (!dropped && p.first == pr.first && p.second == pr.second) {
            dropped = true;
            continue;
          }
          rc.parts.push_back(p);
        }
        if (lc.parts.empty() || rc.parts.empty()) continue;
        Comparability q = rel.query(lc, rc);
        if (q == Comparability::Precedes) continue;
        if (rel.exhaustive()) {
          v = Verdict::Fail;
          w = "cancel " + uni[a].key() + " -> " + uni[b].key() + " to " + lc.key() + " -> " +
              rc.key() + ": conclusion absent";
        } else {
          worsen(v, Verdict::Inconclusive);
          if (w.empty()) w = "conclusion undecided: " + lc.key() + " -> " + rc.key();
        }
      }
      if (v == Verdict::Fail) break;
    }
    if (v == Verdict::Fail) break;
  }
  rep.add("cancellation", v, w);
  return rep;
}

Report check_CH(const AccessOracle& oracle, const SpaceId& space,
                const std::vector<CompoundState>& sample) {
  Report rep;
  Verdict v = Verdict::Pass;
  std::string w;
  for (std::size_t i = 0; i < sample.size() && v != Verdict::Fail; ++i)
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      Comparability fwd = oracle.precedes(sample[i], sample[j]);
      Comparability bwd = oracle.precedes(sample[j], sample[i]);
      if (fwd == Comparability::Precedes || bwd == Comparability::Precedes) continue;
      if (fwd == Comparability::Unknown || bwd == Comparability::Unknown) {
        worsen(v, Verdict::Inconclusive);
        if (w.empty()) w = "undecided pair " + pair_str(sample[i], sample[j]);
        continue;
      }
      v = Verdict::Fail;
      w = "incomparable pair " + pair_str(sample[i], sample[j]);
      break;
    }
  rep.add("CH[" + space.label + "]", v, w);
  return rep;
}

Report check_CH(const FiniteRelation& rel) {
  Report rep;
  Verdict v = Verdict::Pass;
  std::string w;
  const auto& uni = rel.universe();
  for (std::size_t i = 0; i < uni.size() && v != Verdict::Fail; ++i)
    for (std::size_t j = i + 1; j < uni.size(); ++j) {
      if (!(uni[i].total_scale() == uni[j].total_scale())) continue;
      Comparability fwd = rel.query(uni[i], uni[j]);
      Comparability bwd = rel.query(uni[j], uni[i]);
      if (fwd == Comparability::Precedes || bwd == Comparability::Precedes) continue;
      if (fwd == Comparability::Unknown || bwd == Comparability::Unknown) {
        worsen(v, Verdict::Inconclusive);
        if (w.empty()) w = "undecided pair " + uni[i].key() + " | " + uni[j].key();
        continue;
      }
      v = Verdict::Fail;
      w = "incomparable pair " + uni[i].key() + " | " + uni[j].key();
      break;
    }
  rep.add("CH", v, w);
  return rep;
}

Report check_lemma1(const AccessOracle& oracle, const std::vector<CompoundState>& model_states,
                    const std::map<std::string, std::vector<CompoundState>>& neighborhoods) {
  Report rep;
  // (a): every state with a supplied neighborhood has a strict successor
  // among the model states (which may include extra successor candidates).
  bool a_holds = !model_states.empty();
  std::string a_witness;
  for (const auto& x : model_states) {
    if (!neighborhoods.empty() && neighborhoods.find(x.str()) == neighborhoods.end()) continue;
    bool found = false;
    for (const auto& y : model_states) {
      if (oracle.strictly_precedes(x, y)) {
        found = true;
        break;
      }
    }
    if (!found) {
      a_holds = false;
      a_witness = "no strict successor for " + x.str();
      break;
    }
  }
  rep.add("lemma1-premise", a_holds ? Verdict::Pass : Verdict::Fail, a_witness);

  // (b): every supplied neighborhood contains a point not accessible from its
  // center.
  bool b_holds = true;
  std::string b_witness;
  for (const auto& x : model_states) {
    auto it = neighborhoods.find(x.str());
    if (it == neighborhoods.end()) continue;
    bool found = false;
    for (const auto& z : it->second) {
      if (oracle.precedes(x, z) == Comparability::NotPrecedes) {
        found = true;
        break;
      }
    }
    if (!found) {
      b_holds = false;
      b_witness = "every sampled neighbor accessible from " + x.str();
      break;
    }
  }
  rep.add("lemma1-conclusion", b_holds ? Verdict::Pass : Verdict::Fail, b_witness);

  // The lemma itself: (a) implies (b).
  if (a_holds && !b_holds) {
    rep.add("lemma1", Verdict::Fail, b_witness);
  } else {
    rep.add("lemma1", Verdict::Pass, a_holds ? "" : "vacuous: premise fails");
  }
  return rep;
}

}  // namespace thermo
