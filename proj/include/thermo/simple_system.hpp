#ifndef THERMO_SIMPLE_SYSTEM_HPP
#define THERMO_SIMPLE_SYSTEM_HPP

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "thermo/compound.hpp"
#include "thermo/oracle.hpp"
#include "thermo/report.hpp"

namespace thermo {

// A point of a simple system: energy plus work coordinates.
struct StatePoint {
  double U = 0.0;
  std::vector<double> V;
};

// Convex (U, V)-domain with pressure functions. The optional closed-form
// entropy makes compound comparisons answerable; the optional caloric
// temperature T(U, V) lets entropy be reconstructed by path quadrature.
struct SimpleSystemModel {
  SpaceId name;
  int n = 1;  // number of work coordinates
  std::array<double, 2> u_bounds{0.0, 1.0};
  std::vector<std::array<double, 2>> v_bounds;
  std::function<bool(const StatePoint&)> region;  // optional extra convex predicate
  std::function<std::vector<double>(const StatePoint&)> pressure;
  double lipschitz_hint = 1.0;
  std::function<double(const StatePoint&)> entropy;              // optional
  std::function<double(const StatePoint&)> caloric_temperature;  // optional
  double amount = 1.0;

  // Open-domain membership with a relative boundary margin of 1e-6 of the
  // box size in each coordinate.
  bool contains(const StatePoint& x) const;
  // Distance from x to the nearest box face, in units of that face's box size.
  double boundary_gap(const StatePoint& x) const;

  StateRef ref(const StatePoint& x) const;
  StatePoint state(const StateRef& r) const;
};

// Solution curve of the adiabat equation du/dV_j = -P_j(u, V) along a straight
// segment in work-coordinate space.
struct AdiabatCurve {
  StatePoint seed;
  std::vector<std::pair<std::vector<double>, double>> samples;  // (V, u)
  double step = 0.0;

  double final_u() const { return samples.back().second; }
};

// Fourth-order integration along the straight path from x.V to v_target,
// refined until two successive step halvings agree to 1e-8 at the endpoint.
// Throws std::domain_error when the path leaves the model domain.
AdiabatCurve integrate_adiabat(const SimpleSystemModel& model, const StatePoint& x,
                               const std::vector<double>& v_target);

enum class SectorVerdict { Precedes, Equivalent, Succeeds };

// Compares y.U with the adiabat through x at y's work coordinates:
// above the adiabat means x strictly precedes y, on it (within
// max(1e-9, 1e-6 |y.U|)) adiabatic equivalence, below means y strictly
// precedes x.
SectorVerdict forward_sector_contains(const SimpleSystemModel& model, const StatePoint& x,
                                      const StatePoint& y);

// Oracle over the model's space: single-state queries of equal scale are
// answered geometrically; compound queries fall back to the closed-form
// entropy when present and are Unknown otherwise.
std::unique_ptr<AccessOracle> oracle_from_model(const SimpleSystemModel& model);

struct TemperatureBracket {
  double t_minus = 0.0;
  double t_plus = 0.0;
};

// Inverse energy-derivative of entropy at fixed work coordinates. The bracket
// comes from the one-sided differences. Throws std::domain_error when the
// resulting temperature is not positive.
std::pair<double, TemperatureBracket> temperature(const SimpleSystemModel& model,
                                                  const std::function<double(const StatePoint&)>& entropy,
                                                  const StatePoint& x, double h);

// Secant inequality (1-t) S(X) + t S(Y) <= S((1-t)X + tY) at t in
// {1/4, 1/2, 3/4}, within 1e-10.
Report check_concavity(const std::function<double(const StatePoint&)>& entropy,
                       const SimpleSystemModel& model,
                       const std::vector<std::pair<StatePoint, StatePoint>>& secants);

// dS/dV_j against P_j / T, within 1e-4 relative; stencils shrink near the
// boundary and such samples are flagged with a wider tolerance.
Report check_pressure_entropy_identity(const SimpleSystemModel& model,
                                       const std::function<double(const StatePoint&)>& entropy,
                                       const std::vector<StatePoint>& sample, double h);

// Monatomic ideal gas: P = 2U/(3V), S = amount (3/2 ln(U/amount) + ln(V/amount)).
SimpleSystemModel make_ideal_gas(double amount = 1.0, std::string label = "ideal-gas");

// Van der Waals fluid in reduced units: P = 8T/(3V-1) - 3/V^2 with the caloric
// closure T = (U + 3/V)/4. Entropy is not supplied in closed form; use
// numeric_entropy.
SimpleSystemModel make_van_der_waals(std::string label = "van-der-waals");

// Entropy by path quadrature of (dU + sum_j P_j dV_j)/T from a reference
// point, using the model's caloric temperature. Returns the closed-form
// entropy directly when the model has one and no reference is forced.
std::function<double(const StatePoint&)> numeric_entropy(const SimpleSystemModel& model,
                                                         StatePoint ref_point,
                                                         double ref_value = 0.0);

}  // namespace thermo

#endif
