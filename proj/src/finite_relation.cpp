#include "thermo/finite_relation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace thermo {

GridCompound GridCompound::single(int state, Rational scale) {
  GridCompound c;
  c.parts.push_back({scale, state});
  return c;
}

GridCompound GridCompound::make(std::vector<std::pair<Rational, int>> parts) {
  GridCompound c;
  c.parts = std::move(parts);
  std::sort(c.parts.begin(), c.parts.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  std::vector<std::pair<Rational, int>> merged;
  for (const auto& p : c.parts) {
    if (!(p.first > Rational(0))) throw std::domain_error("GridCompound: scale must be positive");
    if (!merged.empty() && merged.back().second == p.second) {
      merged.back().first = merged.back().first + p.first;
    } else {
      merged.push_back(p);
    }
  }
  c.parts = std::move(merged);
  return c;
}

GridCompound GridCompound::composed_with(const GridCompound& o) const {
  std::vector<std::pair<Rational, int>> parts = this->parts;
  parts.insert(parts.end(), o.parts.begin(), o.parts.end());
  return make(std::move(parts));
}

GridCompound GridCompound::scaled(const Rational& t) const {
  GridCompound c = *this;
  for (auto& p : c.parts) p.first = p.first * t;
  return c;
}

Rational GridCompound::total_scale() const {
  Rational t(0);
  for (const auto& p : parts) t = t + p.first;
  return t;
}

std::string GridCompound::key() const {
  std::ostringstream os;
  for (const auto& p : parts) os << p.first.str() << "*" << p.second << ";";
  return os.str();
}

std::vector<Rational> uniform_scale_grid(int denominator, const Rational& max_mass) {
  std::vector<Rational> grid;
  for (std::int64_t k = 1; Rational(k, denominator) <= max_mass; ++k) {
    grid.push_back(Rational(k, denominator));
  }
  return grid;
}

namespace {

// Universe compound in packed form: up to two (state, numerator) parts, scales
// expressed as multiples of 1/L. nparts in {1,2}; parts sorted by state.
struct Packed {
  int s[2] = {-1, -1};
  std::int64_t k[2] = {0, 0};
  int nparts = 0;
  std::uint64_t mask = 0;
  std::int64_t total = 0;

  std::uint64_t code() const {
    // States and numerators are small by construction.
    std::uint64_t c = static_cast<std::uint64_t>(nparts);
    for (int i = 0; i < 2; ++i) {
      c = (c << 10) | static_cast<std::uint64_t>(s[i] + 1);
      c = (c << 20) | static_cast<std::uint64_t>(k[i]);
    }
    return c;
  }
};

}  // namespace

struct FiniteRelation::Impl {
  std::int64_t lcm = 1;
  std::int64_t max_mass_num = 0;  // max_mass in units of 1/L
  std::vector<Packed> packed;
  std::unordered_map<std::uint64_t, int> by_code;
  std::vector<std::vector<int>> scale_table;  // [universe id][grid index] -> id or -1
  std::vector<std::pair<std::int64_t, std::int64_t>> grid_frac;  // grid scale as (p, q)

  int lookup(const Packed& p) const {
    auto it = by_code.find(p.code());
    return it == by_code.end() ? -1 : it->second;
  }

  // Merge of two packed compounds; -1 when not representable (over two parts
  // or over the mass cap).
  int compose(int a, int b) const {
    const Packed& pa = packed[a];
    const Packed& pb = packed[b];
    if (pa.total + pb.total > max_mass_num) return -1;
    Packed r;
    int ia = 0, ib = 0;
    while (ia < pa.nparts || ib < pb.nparts) {
      int state;
      std::int64_t num = 0;
      if (ia < pa.nparts && ib < pb.nparts && pa.s[ia] == pb.s[ib]) {
        state = pa.s[ia];
        num = pa.k[ia++] + pb.k[ib++];
      } else if (ib >= pb.nparts || (ia < pa.nparts && pa.s[ia] < pb.s[ib])) {
        state = pa.s[ia];
        num = pa.k[ia++];
      } else {
        state = pb.s[ib];
        num = pb.k[ib++];
      }
      if (r.nparts >= 2) return -1;
      r.s[r.nparts] = state;
      r.k[r.nparts] = num;
      ++r.nparts;
    }
    r.total = pa.total + pb.total;
    return lookup(r);
  }
};

int FiniteRelation::state_index(const StateRef& s) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == s) return static_cast<int>(i);
  throw std::invalid_argument("FiniteRelation: unregistered state " + s.str());
}

FiniteRelation::FiniteRelation(std::vector<StateRef> states, std::vector<Rational> scale_grid)
    : FiniteRelation(std::move(states), std::move(scale_grid), Options{}) {}

FiniteRelation::FiniteRelation(std::vector<StateRef> states, std::vector<Rational> scale_grid,
                               Options options)
    : states_(std::move(states)), scale_grid_(std::move(scale_grid)), options_(options) {
  if (states_.empty()) throw std::invalid_argument("FiniteRelation: empty state set");
  if (scale_grid_.empty()) throw std::invalid_argument("FiniteRelation: empty scale grid");
  for (const auto& r : scale_grid_) {
    if (!(r > Rational(0))) throw std::domain_error("FiniteRelation: non-positive grid scale");
    if (r.den() > options_.max_denominator)
      throw std::invalid_argument("FiniteRelation: grid denominator exceeds bound");
  }
  build_universe();
}

FiniteRelation::~FiniteRelation() = default;
FiniteRelation::FiniteRelation(const FiniteRelation& o)
    : states_(o.states_),
      scale_grid_(o.scale_grid_),
      options_(o.options_),
      universe_(o.universe_),
      impl_(new Impl(*o.impl_)),
      base_facts_(o.base_facts_),
      succ_(o.succ_),
      pred_(o.pred_),
      closed_(o.closed_) {}

void FiniteRelation::build_universe() {
  impl_.reset(new Impl);
  std::int64_t lcm = 1;
  for (const auto& r : scale_grid_) lcm = std::lcm(lcm, r.den());
  impl_->lcm = lcm;
  impl_->max_mass_num = static_cast<std::int64_t>(std::llround(options_.max_mass.to_double() * lcm));
  for (const auto& r : scale_grid_) impl_->grid_frac.emplace_back(r.num(), r.den());

  universe_.clear();
  const int n = static_cast<int>(states_.size());
  auto add = [&](Packed p) {
    p.mask = 0;
    p.total = 0;
    for (int i = 0; i < p.nparts; ++i) {
      p.mask |= (std::uint64_t{1} << p.s[i]);
      p.total += p.k[i];
    }
    if (impl_->by_code.count(p.code())) return;
    int id = static_cast<int>(impl_->packed.size());
    impl_->packed.push_back(p);
    impl_->by_code.emplace(p.code(), id);
    GridCompound g;
    for (int i = 0; i < p.nparts; ++i) g.parts.emplace_back(Rational(p.k[i], lcm), p.s[i]);
    universe_.push_back(std::move(g));
  };

  for (int s = 0; s < n; ++s) {
    for (std::int64_t k = 1; k <= impl_->max_mass_num; ++k) {
      Packed p;
      p.s[0] = s;
      p.k[0] = k;
      p.nparts = 1;
      add(p);
    }
  }
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      for (std::int64_t ks = 1; ks < impl_->max_mass_num; ++ks) {
        for (std::int64_t kt = 1; ks + kt <= impl_->max_mass_num; ++kt) {
          Packed p;
          p.s[0] = s;
          p.k[0] = ks;
          p.s[1] = t;
          p.k[1] = kt;
          p.nparts = 2;
          add(p);
        }
      }
    }
  }

  // Scaling table for the A4 rule.
  impl_->scale_table.assign(universe_.size(), std::vector<int>(scale_grid_.size(), -1));
  for (std::size_t u = 0; u < universe_.size(); ++u) {
    const Packed& p = impl_->packed[u];
    for (std::size_t gi = 0; gi < impl_->grid_frac.size(); ++gi) {
      auto [pn, pd] = impl_->grid_frac[gi];
      Packed q = p;
      bool ok = true;
      for (int i = 0; i < q.nparts; ++i) {
        std::int64_t num = q.k[i] * pn;
        if (num % pd != 0) {
          ok = false;
          break;
        }
        q.k[i] = num / pd;
      }
      if (!ok) continue;
      q.total = 0;
      for (int i = 0; i < q.nparts; ++i) q.total += q.k[i];
      if (q.total > impl_->max_mass_num) continue;
      impl_->scale_table[u][gi] = impl_->lookup(q);
    }
  }

  succ_.assign(universe_.size(), {});
  pred_.assign(universe_.size(), {});
  for (std::size_t u = 0; u < universe_.size(); ++u) {
    succ_[u].insert(static_cast<int>(u));
    pred_[u].insert(static_cast<int>(u));
  }
  closed_ = false;
}

std::optional<int> FiniteRelation::universe_id(const GridCompound& c) const {
  Packed p;
  for (const auto& [scale, state] : c.parts) {
    if (impl_->lcm % scale.den() != 0) return std::nullopt;
    if (p.nparts >= 2) return std::nullopt;
    p.s[p.nparts] = state;
    p.k[p.nparts] = scale.num() * (impl_->lcm / scale.den());
    ++p.nparts;
  }
  if (p.nparts == 0) return std::nullopt;
  int id = impl_->lookup(p);
  if (id < 0) return std::nullopt;
  return id;
}

std::optional<Rational> FiniteRelation::to_grid_scale(double x) const {
  double scaled = x * static_cast<double>(impl_->lcm);
  double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-9 * impl_->lcm) return std::nullopt;
  if (rounded < 0.5) return std::nullopt;
  return Rational(static_cast<std::int64_t>(rounded), impl_->lcm);
}

std::optional<GridCompound> FiniteRelation::to_grid(const CompoundState& c) const {
  std::vector<std::pair<Rational, int>> parts;
  for (const auto& p : c.parts()) {
    auto q = to_grid_scale(p.scale);
    if (!q) return std::nullopt;
    int idx = -1;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i] == p.state) {
        idx = static_cast<int>(i);
        break;
      }
    }
    if (idx < 0) return std::nullopt;
    parts.emplace_back(*q, idx);
  }
  return GridCompound::make(std::move(parts));
}

void FiniteRelation::add_fact(const GridCompound& lhs, const GridCompound& rhs) {
  if (closed_) throw std::logic_error("FiniteRelation: add_fact after close");
  if (!universe_id(lhs) || !universe_id(rhs))
    throw std::invalid_argument("FiniteRelation: fact outside tracked universe");
  base_facts_.emplace_back(lhs, rhs);
}

void FiniteRelation::add_fact(const CompoundState& lhs, const CompoundState& rhs) {
  auto l = to_grid(lhs);
  auto r = to_grid(rhs);
  if (!l || !r) throw std::invalid_argument("FiniteRelation: fact not representable on grid");
  add_fact(*l, *r);
}

void FiniteRelation::add_closure_fact(int a, int b, std::vector<std::pair<int, int>>& worklist) {
  if (succ_[a].count(b)) return;
  succ_[a].insert(b);
  pred_[b].insert(a);
  worklist.emplace_back(a, b);
}

void FiniteRelation::close() {
  if (closed_) return;
  std::vector<std::pair<int, int>> worklist;
  std::vector<std::pair<int, int>> nonreflexive;

  for (const auto& [l, r] : base_facts_) {
    add_closure_fact(*universe_id(l), *universe_id(r), worklist);
  }

  while (!worklist.empty()) {
    auto [a, b] = worklist.back();
    worklist.pop_back();
    if (a == b) continue;
    const Packed& pa = impl_->packed[a];
    const Packed& pb = impl_->packed[b];

    // A2: chain through existing facts.
    {
      std::vector<int> bs(succ_[b].begin(), succ_[b].end());
      for (int c : bs) add_closure_fact(a, c, worklist);
      std::vector<int> as(pred_[a].begin(), pred_[a].end());
      for (int c : as) add_closure_fact(c, b, worklist);
    }

    // A4: scale by each grid element when both sides stay tracked.
    for (std::size_t gi = 0; gi < scale_grid_.size(); ++gi) {
      int la = impl_->scale_table[a][gi];
      int lb = impl_->scale_table[b][gi];
      if (la >= 0 && lb >= 0) add_closure_fact(la, lb, worklist);
    }

    // A3 against every known nonreflexive fact, both orders.
    for (const auto& [c, d] : nonreflexive) {
      int l = impl_->compose(a, c);
      if (l < 0) continue;
      int r = impl_->compose(b, d);
      if (r >= 0) add_closure_fact(l, r, worklist);
    }
    // A3 against reflexive facts: add any tracked context compound.
    for (std::size_t u = 0; u < universe_.size(); ++u) {
      const Packed& pu = impl_->packed[u];
      // Quick rejects before the merge: combined support must stay two states.
      if (std::popcount(pa.mask | pu.mask) > 2 || std::popcount(pb.mask | pu.mask) > 2) continue;
      if (pa.total + pu.total > impl_->max_mass_num || pb.total + pu.total > impl_->max_mass_num)
        continue;
      int l = impl_->compose(a, static_cast<int>(u));
      if (l < 0) continue;
      int r = impl_->compose(b, static_cast<int>(u));
      if (r >= 0) add_closure_fact(l, r, worklist);
    }

    nonreflexive.emplace_back(a, b);
  }
  closed_ = true;
}

std::size_t FiniteRelation::fact_count() const {
  std::size_t n = 0;
  for (const auto& s : succ_) n += s.size();
  return n;
}

std::vector<std::pair<int, int>> FiniteRelation::nontrivial_facts() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t a = 0; a < succ_.size(); ++a)
    for (int b : succ_[a])
      if (static_cast<int>(a) != b) out.emplace_back(static_cast<int>(a), b);
  std::sort(out.begin(), out.end());
  return out;
}

Comparability FiniteRelation::query(const GridCompound& lhs, const GridCompound& rhs) const {
  if (!closed_) throw std::logic_error("FiniteRelation: query before close");
  auto a = universe_id(lhs);
  auto b = universe_id(rhs);
  if (!a || !b) return Comparability::Unknown;
  if (succ_[*a].count(*b)) return Comparability::Precedes;
  return options_.exhaustive ? Comparability::NotPrecedes : Comparability::Unknown;
}

Comparability FiniteRelation::query(const CompoundState& lhs, const CompoundState& rhs) const {
  auto l = to_grid(lhs);
  auto r = to_grid(rhs);
  if (!l || !r) return Comparability::Unknown;
  return query(*l, *r);
}

void FiniteRelation::remove_fact(const GridCompound& lhs, const GridCompound& rhs) {
  if (!closed_) throw std::logic_error("FiniteRelation: remove_fact before close");
  auto a = universe_id(lhs);
  auto b = universe_id(rhs);
  if (!a || !b || *a == *b) return;
  succ_[*a].erase(*b);
  pred_[*b].erase(*a);
}

}  // namespace thermo
