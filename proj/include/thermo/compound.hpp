#ifndef THERMO_COMPOUND_HPP
#define THERMO_COMPOUND_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermo {

// Identifier of a state space.
struct SpaceId {
  std::string label;

  bool operator==(const SpaceId& o) const { return label == o.label; }
  bool operator!=(const SpaceId& o) const { return label != o.label; }
  bool operator<(const SpaceId& o) const { return label < o.label; }
};

// A state in some registered space. Continuous states carry coordinates
// (energy first, then work coordinates); states of finite models carry a
// label instead.
struct StateRef {
  SpaceId space;
  std::vector<double> coords;
  std::string label;

  static StateRef named(SpaceId space, std::string name) {
    StateRef s;
    s.space = std::move(space);
    s.label = std::move(name);
    return s;
  }
  static StateRef at(SpaceId space, std::vector<double> coords) {
    StateRef s;
    s.space = std::move(space);
    s.coords = std::move(coords);
    return s;
  }

  bool operator==(const StateRef& o) const {
    return space == o.space && label == o.label && coords == o.coords;
  }
  bool operator<(const StateRef& o) const {
    if (space != o.space) return space < o.space;
    if (label != o.label) return label < o.label;
    return coords < o.coords;
  }

  std::string str() const {
    std::ostringstream os;
    os << space.label << ":";
    if (!label.empty()) {
      os << label;
    } else {
      os << "(";
      for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ",";
        os << coords[i];
      }
      os << ")";
    }
    return os.str();
  }
};

// A multiset of scaled states. Canonical form: parts sorted by state, equal
// states merged by summing scales. Splitting and recombination (a state equals
// any regrouping of its scaled copies) is thereby an identity of the
// representation rather than a rewrite rule.
class CompoundState {
 public:
  struct Part {
    double scale;
    StateRef state;
  };

  CompoundState() = default;
  explicit CompoundState(std::vector<Part> parts) : parts_(std::move(parts)) {
    for (const Part& p : parts_) {
      if (!(p.scale > 0.0)) throw std::domain_error("CompoundState: scale must be positive");
    }
    canonicalize();
  }

  static CompoundState single(StateRef s, double scale = 1.0) {
    return CompoundState({Part{scale, std::move(s)}});
  }

  const std::vector<Part>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  double total_scale() const {
    double t = 0.0;
    for (const Part& p : parts_) t += p.scale;
    return t;
  }

  bool operator==(const CompoundState& o) const {
    if (parts_.size() != o.parts_.size()) return false;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (!(parts_[i].state == o.parts_[i].state)) return false;
      if (std::abs(parts_[i].scale - o.parts_[i].scale) > 1e-12) return false;
    }
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) os << " + ";
      os << parts_[i].scale << "*" << parts_[i].state.str();
    }
    return os.str();
  }

 private:
  void canonicalize() {
    std::sort(parts_.begin(), parts_.end(),
              [](const Part& a, const Part& b) { return a.state < b.state; });
    std::vector<Part> merged;
    for (const Part& p : parts_) {
      if (!merged.empty() && merged.back().state == p.state) {
        merged.back().scale += p.scale;
      } else {
        merged.push_back(p);
      }
    }
    parts_ = std::move(merged);
  }

  std::vector<Part> parts_;
};

inline CompoundState compose(const CompoundState& a, const CompoundState& b) {
  std::vector<CompoundState::Part> parts = a.parts();
  parts.insert(parts.end(), b.parts().begin(), b.parts().end());
  return CompoundState(std::move(parts));
}

inline CompoundState scale(double t, const CompoundState& a) {
  if (!(t > 0.0)) throw std::domain_error("scale: factor must be positive");
  std::vector<CompoundState::Part> parts = a.parts();
  for (auto& p : parts) p.scale *= t;
  return CompoundState(std::move(parts));
}

}  // namespace thermo

#endif
