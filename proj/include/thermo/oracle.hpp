#ifndef THERMO_ORACLE_HPP
#define THERMO_ORACLE_HPP

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "thermo/compound.hpp"

namespace thermo {

enum class Comparability { Precedes, NotPrecedes, Unknown };

inline const char* to_string(Comparability c) {
  switch (c) {
    case Comparability::Precedes: return "Precedes";
    case Comparability::NotPrecedes: return "NotPrecedes";
    default: return "Unknown";
  }
}

// Three-valued accessibility backend. precedes(a, b) answers whether b is
// adiabatically accessible from a. Unknown is reserved for finite-closure
// backends, where absence from the closure is not evidence of inaccessibility.
class AccessOracle {
 public:
  explicit AccessOracle(double tolerance = 1e-12) : tolerance_(tolerance) {}
  virtual ~AccessOracle() = default;

  virtual Comparability precedes(const CompoundState& a, const CompoundState& b) const = 0;

  double tolerance() const { return tolerance_; }

  bool precedes_strict(const CompoundState& a, const CompoundState& b) const {
    return precedes(a, b) == Comparability::Precedes;
  }
  bool equivalent(const CompoundState& a, const CompoundState& b) const {
    return precedes_strict(a, b) && precedes_strict(b, a);
  }
  bool strictly_precedes(const CompoundState& a, const CompoundState& b) const {
    return precedes_strict(a, b) && precedes(b, a) == Comparability::NotPrecedes;
  }
  bool comparable(const CompoundState& a, const CompoundState& b) const {
    return precedes_strict(a, b) || precedes_strict(b, a);
  }

 private:
  double tolerance_;
};

using EntropyFn = std::function<double(const StateRef&)>;

// Total backend induced by closed-form entropies, one per space. A compound
// query is answered by comparing entropy sums, provided the total scale in
// each space matches on both sides; otherwise the states are incomparable.
class AnalyticEntropyOracle : public AccessOracle {
 public:
  explicit AnalyticEntropyOracle(double tolerance = 1e-12) : AccessOracle(tolerance) {}

  void register_space(const SpaceId& space, EntropyFn entropy) {
    entropies_[space.label] = std::move(entropy);
  }

  double entropy(const StateRef& s) const {
    auto it = entropies_.find(s.space.label);
    if (it == entropies_.end())
      throw std::invalid_argument("AnalyticEntropyOracle: unregistered space " + s.space.label);
    return it->second(s);
  }

  double compound_entropy(const CompoundState& a) const {
    double sum = 0.0;
    for (const auto& p : a.parts()) sum += p.scale * entropy(p.state);
    return sum;
  }

  Comparability precedes(const CompoundState& a, const CompoundState& b) const override {
    if (!masses_match(a, b)) return Comparability::NotPrecedes;
    double sa = compound_entropy(a);
    double sb = compound_entropy(b);
    return sa <= sb + tolerance() ? Comparability::Precedes : Comparability::NotPrecedes;
  }

 private:
  static bool masses_match(const CompoundState& a, const CompoundState& b) {
    std::map<std::string, double> mass;
    for (const auto& p : a.parts()) mass[p.state.space.label] += p.scale;
    for (const auto& p : b.parts()) mass[p.state.space.label] -= p.scale;
    for (const auto& [space, m] : mass) {
      (void)space;
      if (std::abs(m) > 1e-9) return false;
    }
    return true;
  }

  std::map<std::string, EntropyFn> entropies_;
};

}  // namespace thermo

#endif
