#ifndef THERMO_ENTROPY_HPP
#define THERMO_ENTROPY_HPP

#include <map>
#include <optional>
#include <vector>

#include "thermo/compound.hpp"
#include "thermo/finite_relation.hpp"
#include "thermo/oracle.hpp"
#include "thermo/rational.hpp"
#include "thermo/report.hpp"

namespace thermo {

// Entropy values on a space, normalized to 0 at x0 and 1 at x1, where x0
// strictly precedes x1 under the oracle used to build the chart.
struct EntropyChart {
  SpaceId space;
  StateRef x0;
  StateRef x1;
  std::map<StateRef, double> values;
  double tolerance = 1e-9;
};

// Largest lambda such that the mixture ((1-lambda) x0, lambda x1) still
// precedes x, located by bisection over [-8, 9]. Out-of-strip values use the
// signed-part convention: a negative share of a state on one side moves to the
// other side with positive sign.
// Throws std::invalid_argument when x0 does not strictly precede x1,
// std::range_error when the supremum leaves [-8, 9], and std::runtime_error
// when the oracle answers Unknown on a probed pair.
double construct_entropy(const AccessOracle& oracle, const StateRef& x0, const StateRef& x1,
                         const StateRef& x, double tol);

// Largest lambda such that (gamma_ref_point, lambda z1) precedes
// (x, lambda z0), with (z0, z1) a strictly ordered pair in a common reference
// space. Additive across compositions and extensive in the scale of x's space
// by construction. Same error contract as construct_entropy.
double construct_calibrated_entropy(const AccessOracle& oracle, const StateRef& gamma_ref_point,
                                    const StateRef& z0, const StateRef& z1, const StateRef& x,
                                    double tol);

// Affine change of reference pair: a chart value lambda relative to (x0, x1)
// becomes mu relative to a new pair whose members sit at chart values lambda0
// and lambda1. Returns (mu, mu_prime); the second component applies the primed
// branch of the map to the same input. Throws std::domain_error when
// 1 - lambda0 + lambda0*lambda1 vanishes (degenerate reference pair).
std::pair<double, double> rebase(double lambda, double lambda0, double lambda1);

// Checks monotonicity on comparable pairs, additivity on compounds,
// extensivity on scaled copies, and strict increase on strictly ordered pairs
// for a value map over single states.
Report verify_entropy_principle(const std::map<StateRef, double>& S, const AccessOracle& oracle,
                                const std::vector<StateRef>& sample, double tol);

// Least-squares fit S_b ~ a*S_a + B over the common sample, with a > 0
// required and the residual reported as the maximum absolute deviation.
// Throws std::invalid_argument on degenerate (constant) input or a <= 0.
struct AffineFit {
  double a = 1.0;
  double B = 0.0;
  double residual = 0.0;
};
AffineFit affine_fit(const std::map<StateRef, double>& S_a, const std::map<StateRef, double>& S_b,
                     const std::vector<StateRef>& sample);

// Exact entropy on a finite closure: the largest grid fraction lambda in
// [0, 1] with ((1-lambda) x0, lambda x1) preceding state x. Requires x0
// strictly below x1 and comparability of every probed mixture with x
// (decidable both ways); returns nullopt when the closure cannot certify
// those requirements. States are universe indices of the relation's base set.
std::optional<Rational> grid_entropy(const FiniteRelation& rel, int x0, int x1, int x);

}  // namespace thermo

#endif
