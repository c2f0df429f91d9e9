#ifndef THERMO_AXIOM_CHECKS_HPP
#define THERMO_AXIOM_CHECKS_HPP

#include <map>
#include <vector>

#include "thermo/compound.hpp"
#include "thermo/finite_relation.hpp"
#include "thermo/oracle.hpp"
#include "thermo/report.hpp"

namespace thermo {

// Checks the six order axioms (reflexivity, transitivity, consistency of
// composition, scaling invariance, splitting/recombination, stability) on a
// sample of compound states drawn from the backend. Each axiom yields one
// CheckResult ("A1".."A6"); Unknown comparabilities downgrade a verdict to
// Inconclusive, never to Pass.
Report check_axioms(const AccessOracle& oracle, const std::vector<CompoundState>& sample);

// Same checks, run structurally over the whole closure table of a finite
// relation. Catches planted holes (e.g. a removed transitivity consequence).
Report check_axioms(const FiniteRelation& rel);

// Cancellation: (X,Z) precedes (Y,Z) implies X precedes Y, on sampled triples
// of single states. For finite backends a missing conclusion is Inconclusive
// unless the relation is declared exhaustive, in which case it is a failure.
Report check_cancellation(const AccessOracle& oracle, const std::vector<CompoundState>& triples_flat);
Report check_cancellation(const FiniteRelation& rel);

// Comparability of every sampled pair within one space (and its scaled
// products). Reports the first incomparable pair.
Report check_CH(const AccessOracle& oracle, const SpaceId& space,
                const std::vector<CompoundState>& sample);
Report check_CH(const FiniteRelation& rel);

// If every sampled state has a strictly accessible successor, then every
// supplied neighborhood must contain a point that is not accessible from its
// center. Neighborhoods map each sampled state to candidate nearby states.
Report check_lemma1(const AccessOracle& oracle, const std::vector<CompoundState>& model_states,
                    const std::map<std::string, std::vector<CompoundState>>& neighborhoods);

}  // namespace thermo

#endif
