#ifndef THERMO_CALIBRATION_HPP
#define THERMO_CALIBRATION_HPP

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thermo/compound.hpp"
#include "thermo/oracle.hpp"
#include "thermo/report.hpp"
#include "thermo/simple_system.hpp"

namespace thermo {

// A state space in a reaction network. Product nodes list their factors and
// take the scaled sum of factor entropies and compositions.
struct SpaceNode {
  SpaceId id;
  std::vector<double> composition;  // amount of each chemical element
  EntropyFn entropy;                // may be empty for nodes used via direct values
  bool primitive = true;
  bool element = false;
  std::vector<std::pair<double, std::string>> factors;  // (lambda, factor id)
};

struct ProcessWitness {
  StateRef from;
  StateRef to;
  std::string note;
};

struct EdgeData {
  std::vector<ProcessWitness> witnesses;
  std::optional<double> direct_D;
};

class ReactionNetwork {
 public:
  void add_node(SpaceNode n);
  void add_edge_witness(const std::string& from, const std::string& to, ProcessWitness w);
  void set_direct_D(const std::string& from, const std::string& to, double d);
  void add_catalyst(std::string id);

  bool has_node(const std::string& id) const;
  const SpaceNode& node(const std::string& id) const;
  const std::vector<SpaceNode>& nodes() const { return nodes_; }
  const std::map<std::pair<std::string, std::string>, EdgeData>& edges() const { return edges_; }
  const std::vector<std::string>& catalysts() const { return catalysts_; }

  // Entropy of a state in the node's space, resolving product nodes through
  // their factors is not attempted: each node carries its own entropy.
  double entropy_at(const std::string& id, const StateRef& s) const;

  // Node whose factor list matches the given multiset, if any.
  std::optional<std::string> find_product(std::vector<std::pair<double, std::string>> factors) const;

  // Product of the element spaces matching the node's composition, if present.
  std::optional<std::string> element_product_for(const std::string& id) const;

 private:
  std::vector<SpaceNode> nodes_;
  std::map<std::string, std::size_t> index_;
  std::map<std::pair<std::string, std::string>, EdgeData> edges_;
  std::vector<std::string> catalysts_;
};

// Infeasibility certificate: a cycle of node ids whose edge values sum below
// zero.
struct NegativeCycleError : std::runtime_error {
  explicit NegativeCycleError(std::vector<std::string> c)
      : std::runtime_error("negative cycle in the entropy-deficit graph"), cycle(std::move(c)) {}
  std::vector<std::string> cycle;
};

inline double infinite_deficit() { return std::numeric_limits<double>::infinity(); }

// Smallest one-step entropy deficit over the supplied witnesses (or the
// direct value); +infinity when no edge exists.
double compute_D(const ReactionNetwork& net, const std::string& g, const std::string& g_prime);

// Smallest deficit over chains, i.e. shortest path in the D-weighted graph
// (negative weights allowed). Throws NegativeCycleError when a negative cycle
// lies on some g -> g' route.
double compute_E(const ReactionNetwork& net, const std::string& g, const std::string& g_prime);

// Minimum of E over the configured catalysts (including none); a catalyst is
// usable only when both product nodes exist in the network.
double compute_F(const ReactionNetwork& net, const std::string& g, const std::string& g_prime);

// Identity at equal arguments, scaling, subadditivity over products,
// translation invariance under catalysts, triangle inequality, and the
// antisymmetric bound -F(g',g) <= F(g,g').
Report check_F_properties(const ReactionNetwork& net,
                          const std::vector<std::pair<std::string, std::string>>& sample_pairs);

// Equivalence  X precedes Y  <=>  S_g(X) + F(g,g') <= S_g'(Y)  on sampled
// cross-space pairs; ties within tol are excluded from the strict counts.
Report check_theorem6(const ReactionNetwork& net, const std::string& g, const std::string& g_prime,
                      const std::function<Comparability(const StateRef&, const StateRef&)>& relation,
                      const std::vector<std::pair<StateRef, StateRef>>& sample, double tol);

struct CalibrationSolution {
  enum class Status { Feasible, Infeasible, UnboundedDegreesOfFreedom };
  Status status = Status::Feasible;
  std::map<std::string, double> B;  // primitive nodes (elements pinned to 0)
  // Feasible interval per non-element primitive node; equal endpoints when
  // the constraints saturate.
  std::map<std::string, std::pair<double, double>> intervals;
  // Per ordered pair: (-F(g',g), F(g,g')), the allowed range of B(g)-B(g').
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> gaps;
  std::vector<std::string> free_nodes;  // unconstrained, reported and set to 0
  std::vector<std::string> violating_cycle;  // certificate when infeasible
};

// Solves -F(g',g) <= B(g) - B(g') <= F(g,g') over the primitive nodes with
// element constants pinned to zero, by shortest-path feasibility on the
// difference-constraint graph; slack is resolved to the interval midpoint.
CalibrationSolution solve_constants(const ReactionNetwork& net);

struct CalibratorQuad {
  StatePoint x0, x1;  // in the first model
  StatePoint y0, y1;  // in the second model
  bool degenerate = false;
};

// States with equal entropy difference target_delta in both models, found by
// root search along the energy ray through each model's base point. Throws
// std::range_error when the target is outside a model's reachable range.
CalibratorQuad find_calibrators(const SimpleSystemModel& m1,
                                const std::function<double(const StatePoint&)>& S1,
                                const SimpleSystemModel& m2,
                                const std::function<double(const StatePoint&)>& S2,
                                double target_delta, double tol);

}  // namespace thermo

#endif
