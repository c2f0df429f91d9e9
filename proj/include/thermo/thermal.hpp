#ifndef THERMO_THERMAL_HPP
#define THERMO_THERMAL_HPP

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "thermo/report.hpp"
#include "thermo/simple_system.hpp"

namespace thermo {

using EntropyPointFn = std::function<double(const StatePoint&)>;

// State of the joined system: pooled energy plus both sets of work
// coordinates.
struct ThermalJoinPoint {
  double U = 0.0;
  std::vector<double> V1;
  std::vector<double> V2;
};

// Pair of simple systems sharing energy through a thermal contact. Stored
// canonically with the lexicographically smaller space label on the left.
struct JoinedSystemModel {
  SimpleSystemModel left;
  SimpleSystemModel right;
};

JoinedSystemModel make_joined(SimpleSystemModel a, SimpleSystemModel b);

// Pooling the energies: (U1 + U2, V1, V2).
ThermalJoinPoint thermal_join(const StatePoint& x, const StatePoint& y);

struct SplitResult {
  StatePoint x;
  StatePoint y;
  double total_entropy = 0.0;
  double maximizer_energy = 0.0;
  // Set when the energy profile failed the concavity scan and the maximizer
  // came from a grid scan instead of golden-section search alone.
  bool grid_fallback = false;
};

// Splits the pooled energy to maximize S1(W, V1) + S2(U - W, V2) over W.
// Golden-section search on the feasible window (valid for concave profiles),
// with a grid-scan fallback, flagged, when the profile is not concave.
// Throws std::domain_error when the energy window is empty.
SplitResult thermal_split(const ThermalJoinPoint& joined, const SimpleSystemModel& left,
                          const SimpleSystemModel& right, const EntropyPointFn& S1,
                          const EntropyPointFn& S2, double tol = 1e-10);

// A state bound to its model and entropy, the unit of the equilibrium checks.
struct ThermalState {
  const SimpleSystemModel* model = nullptr;
  EntropyPointFn S;
  StatePoint x;
  // Set when the state owns its model (e.g. scaled copies); `model` then
  // points into this storage.
  std::shared_ptr<const SimpleSystemModel> owned;
};

// Scaled copy: coordinates, bounds and entropy all scale by t; temperature is
// unchanged.
ThermalState scale_thermal(const ThermalState& a, double t);

// True when the temperature brackets of the two states overlap, with slack
// 1e-6 max(T).
bool in_thermal_equilibrium(const ThermalState& a, const ThermalState& b, double tol = 0.0);

// Transitivity of the equilibrium relation on sampled triples, plus symmetry
// and invariance under scaling of either member.
Report check_zeroth_law(const std::vector<std::array<ThermalState, 3>>& triples);
// Same, with an injected equilibrium predicate (used to demonstrate that a
// non-transitive predicate is flagged).
Report check_zeroth_law(const std::function<bool(const ThermalState&, const ThermalState&)>& equil,
                        const std::vector<std::array<ThermalState, 3>>& triples);

// Searches an isotherm below x's temperature for two mutually equilibrated
// states strictly on opposite sides of the adiabat through x.
Report check_transversality(const SimpleSystemModel& model, const EntropyPointFn& S,
                            const StatePoint& x, std::array<double, 2> v_scan_range,
                            int scan_points = 16, double t_factor = 0.9);

// After equilibrating two states at different temperatures: the hotter side
// must not gain energy, the colder side must not lose it, and the final
// temperature must lie between the two initial ones.
// Throws std::invalid_argument when the temperatures are equal within 1e-9.
Report check_energy_flow(const ThermalState& a, const ThermalState& b);

struct CarnotResult {
  bool allowed = false;
  double eta = 0.0;
  double eta_carnot = 0.0;
};

// Heat-engine bound: allowed iff q1/t1 + q0/t0 <= 0 (with 1e-12 slack);
// efficiency (q1+q0)/q1 against 1 - t0/t1. Throws std::invalid_argument when
// t1 <= t0, t0 <= 0, or q1 == 0.
CarnotResult carnot_check(double q1, double t1, double q0, double t0);

struct ReservoirStep {
  SimpleSystemModel model;
  EntropyPointFn S;
  StatePoint start;
  double Q = 0.0;  // energy withdrawn from the reservoir
};

struct AuditRow {
  int step = 0;
  double Q = 0.0;
  double T_end = 0.0;
  double dS_bound = 0.0;  // -Q / T_end
  double dS_exact = 0.0;
};

struct AuditResult {
  Report report;
  std::vector<AuditRow> rows;
  double total_dS = 0.0;  // reservoirs plus machine
};

// Each reservoir's exact entropy change against the convexity bound taken at
// the end-of-process temperature, plus the cyclic total.
// Throws std::domain_error when a reservoir is driven out of its domain.
AuditResult reservoir_cycle_audit(const std::vector<ReservoirStep>& steps,
                                  double machine_entropy_change);

}  // namespace thermo

#endif
