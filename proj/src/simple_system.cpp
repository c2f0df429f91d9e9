#include "thermo/simple_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>

namespace thermo {

namespace {

constexpr double kBoundaryMargin = 1e-6;  // relative to box size per coordinate
constexpr int kBaseSteps = 1024;
constexpr int kMaxSteps = 1 << 18;
constexpr double kRefineTol = 1e-8;

double sector_tolerance(double y_u) { return std::max(1e-9, 1e-6 * std::abs(y_u)); }

}  // namespace

bool SimpleSystemModel::contains(const StatePoint& x) const {
  if (static_cast<int>(x.V.size()) != n) return false;
  double mu = kBoundaryMargin * (u_bounds[1] - u_bounds[0]);
  if (x.U <= u_bounds[0] + mu || x.U >= u_bounds[1] - mu) return false;
  for (int j = 0; j < n; ++j) {
    double mv = kBoundaryMargin * (v_bounds[j][1] - v_bounds[j][0]);
    if (x.V[j] <= v_bounds[j][0] + mv || x.V[j] >= v_bounds[j][1] - mv) return false;
  }
  return !region || region(x);
}

double SimpleSystemModel::boundary_gap(const StatePoint& x) const {
  double gap = std::min(x.U - u_bounds[0], u_bounds[1] - x.U) / (u_bounds[1] - u_bounds[0]);
  for (int j = 0; j < n; ++j) {
    double size = v_bounds[j][1] - v_bounds[j][0];
    gap = std::min(gap, std::min(x.V[j] - v_bounds[j][0], v_bounds[j][1] - x.V[j]) / size);
  }
  return gap;
}

StateRef SimpleSystemModel::ref(const StatePoint& x) const {
  std::vector<double> coords;
  coords.push_back(x.U);
  coords.insert(coords.end(), x.V.begin(), x.V.end());
  return StateRef::at(name, std::move(coords));
}

StatePoint SimpleSystemModel::state(const StateRef& r) const {
  if (r.space != name || static_cast<int>(r.coords.size()) != n + 1)
    throw std::invalid_argument("SimpleSystemModel: state not in this space");
  StatePoint x;
  x.U = r.coords[0];
  x.V.assign(r.coords.begin() + 1, r.coords.end());
  return x;
}

namespace {

// One full integration pass with the given number of steps; returns the final
// energy. Samples are appended when `record` is non-null.
double integrate_once(const SimpleSystemModel& model, const StatePoint& x,
                      const std::vector<double>& v_target, int steps,
                      std::vector<std::pair<std::vector<double>, double>>* record) {
  const int n = model.n;
  std::vector<double> dv(n);
  for (int j = 0; j < n; ++j) dv[j] = v_target[j] - x.V[j];

  auto v_at = [&](double s) {
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = x.V[j] + s * dv[j];
    return v;
  };
  auto slope = [&](double s, double u) {
    StatePoint p{u, v_at(s)};
    if (!model.contains(p)) {
      std::ostringstream os;
      os << "integrate_adiabat: path left the domain of " << model.name.label << " at U=" << u;
      throw std::domain_error(os.str());
    }
    std::vector<double> press = model.pressure(p);
    double du = 0.0;
    for (int j = 0; j < n; ++j) du -= press[j] * dv[j];
    return du;
  };

  double h = 1.0 / steps;
  double u = x.U;
  if (record) record->push_back({x.V, u});
  const int record_every = std::max(1, steps / kBaseSteps);
  for (int i = 0; i < steps; ++i) {
    double s = i * h;
    double k1 = slope(s, u);
    double k2 = slope(s + 0.5 * h, u + 0.5 * h * k1);
    double k3 = slope(s + 0.5 * h, u + 0.5 * h * k2);
    double k4 = slope(s + h, u + h * k3);
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (record && ((i + 1) % record_every == 0 || i + 1 == steps))
      record->push_back({v_at(s + h), u});
  }
  return u;
}

}  // namespace

AdiabatCurve integrate_adiabat(const SimpleSystemModel& model, const StatePoint& x,
                               const std::vector<double>& v_target) {
  if (!model.contains(x)) throw std::domain_error("integrate_adiabat: seed outside domain");
  if (static_cast<int>(v_target.size()) != model.n)
    throw std::invalid_argument("integrate_adiabat: wrong target dimension");

  double path_len = 0.0;
  for (int j = 0; j < model.n; ++j)
    path_len += (v_target[j] - x.V[j]) * (v_target[j] - x.V[j]);
  path_len = std::sqrt(path_len);

  AdiabatCurve curve;
  curve.seed = x;
  if (path_len == 0.0) {
    curve.samples.push_back({x.V, x.U});
    curve.step = 0.0;
    return curve;
  }

  int steps = kBaseSteps;
  double prev = integrate_once(model, x, v_target, steps, nullptr);
  while (steps < kMaxSteps) {
    double next = integrate_once(model, x, v_target, steps * 2, nullptr);
    if (std::abs(next - prev) <= kRefineTol) break;
    prev = next;
    steps *= 2;
  }
  integrate_once(model, x, v_target, steps, &curve.samples);
  curve.step = path_len / steps;
  return curve;
}

SectorVerdict forward_sector_contains(const SimpleSystemModel& model, const StatePoint& x,
                                      const StatePoint& y) {
  if (!model.contains(x) || !model.contains(y))
    throw std::domain_error("forward_sector_contains: state outside domain");
  double u = integrate_adiabat(model, x, y.V).final_u();
  double tol = sector_tolerance(y.U);
  if (std::abs(y.U - u) <= tol) return SectorVerdict::Equivalent;
  return y.U > u ? SectorVerdict::Precedes : SectorVerdict::Succeeds;
}

namespace {

class GeometricOracle : public AccessOracle {
 public:
  explicit GeometricOracle(SimpleSystemModel model)
      : AccessOracle(1e-12), model_(std::move(model)) {}

  Comparability precedes(const CompoundState& a, const CompoundState& b) const override {
    for (const auto& p : a.parts())
      if (!(p.state.space == model_.name)) return Comparability::Unknown;
    for (const auto& p : b.parts())
      if (!(p.state.space == model_.name)) return Comparability::Unknown;

    if (a.parts().size() == 1 && b.parts().size() == 1) {
      double ta = a.parts()[0].scale;
      double tb = b.parts()[0].scale;
      if (std::abs(ta - tb) > 1e-9) return Comparability::NotPrecedes;
      // A scaled copy tX has coordinates (tU, tV); comparing tX with tY is
      // the same geometric question as X with Y.
      StatePoint xa = model_.state(a.parts()[0].state);
      StatePoint xb = model_.state(b.parts()[0].state);
      SectorVerdict v = forward_sector_contains(model_, xa, xb);
      return v == SectorVerdict::Succeeds ? Comparability::NotPrecedes : Comparability::Precedes;
    }

    if (!model_.entropy) return Comparability::Unknown;
    double mass_a = 0.0, mass_b = 0.0, sa = 0.0, sb = 0.0;
    for (const auto& p : a.parts()) {
      mass_a += p.scale;
      sa += p.scale * model_.entropy(model_.state(p.state));
    }
    for (const auto& p : b.parts()) {
      mass_b += p.scale;
      sb += p.scale * model_.entropy(model_.state(p.state));
    }
    if (std::abs(mass_a - mass_b) > 1e-9) return Comparability::NotPrecedes;
    return sa <= sb + tolerance() ? Comparability::Precedes : Comparability::NotPrecedes;
  }

 private:
  SimpleSystemModel model_;
};

}  // namespace

std::unique_ptr<AccessOracle> oracle_from_model(const SimpleSystemModel& model) {
  return std::make_unique<GeometricOracle>(model);
}

std::pair<double, TemperatureBracket> temperature(const SimpleSystemModel& model,
                                                  const std::function<double(const StatePoint&)>& entropy,
                                                  const StatePoint& x, double h) {
  StatePoint up = x, dn = x;
  up.U += h;
  dn.U -= h;
  if (!model.contains(up) || !model.contains(dn))
    throw std::domain_error("temperature: stencil leaves domain");
  double s0 = entropy(x);
  double fwd = (entropy(up) - s0) / h;
  double bwd = (s0 - entropy(dn)) / h;
  double central = 0.5 * (fwd + bwd);
  if (central <= 0.0 || fwd <= 0.0 || bwd <= 0.0)
    throw std::domain_error("temperature: non-positive temperature (orientation violated)");
  TemperatureBracket br{1.0 / bwd, 1.0 / fwd};
  if (br.t_minus > br.t_plus + 1e-9 * std::abs(br.t_plus))
    throw std::domain_error("temperature: bracket inverted (entropy not concave here)");
  return {1.0 / central, br};
}

Report check_concavity(const std::function<double(const StatePoint&)>& entropy,
                       const SimpleSystemModel& model,
                       const std::vector<std::pair<StatePoint, StatePoint>>& secants) {
  Report rep;
  Verdict v = Verdict::Pass;
  std::string w;
  const double lambdas[] = {0.25, 0.5, 0.75};
  for (const auto& [x, y] : secants) {
    if (!model.contains(x) || !model.contains(y)) continue;
    for (double t : lambdas) {
      StatePoint mid;
      mid.U = (1.0 - t) * x.U + t * y.U;
      mid.V.resize(x.V.size());
      for (std::size_t j = 0; j < x.V.size(); ++j) mid.V[j] = (1.0 - t) * x.V[j] + t * y.V[j];
      if (!model.contains(mid)) continue;
      double lhs = (1.0 - t) * entropy(x) + t * entropy(y);
      double rhs = entropy(mid);
      if (lhs > rhs + 1e-10) {
        v = Verdict::Fail;
        std::ostringstream os;
        os << "secant above graph at t=" << t << " between U=" << x.U << " and U=" << y.U;
        w = os.str();
        break;
      }
    }
    if (v == Verdict::Fail) break;
  }
  rep.add("concavity", v, w);
  return rep;
}

Report check_pressure_entropy_identity(const SimpleSystemModel& model,
                                       const std::function<double(const StatePoint&)>& entropy,
                                       const std::vector<StatePoint>& sample, double h) {
  Report rep;
  Verdict v = Verdict::Pass;
  std::string w;
  bool shrunk_any = false;
  for (const StatePoint& x : sample) {
    if (!model.contains(x)) continue;
    // Shrink the stencil near the boundary; flag the wider tolerance.
    double gap = model.boundary_gap(x);
    double h_eff = h;
    double tol = 1e-4;
    double box = std::min(model.u_bounds[1] - model.u_bounds[0],
                          model.v_bounds[0][1] - model.v_bounds[0][0]);
    if (gap * box < 2.0 * h) {
      h_eff = 0.25 * gap * box;
      tol = 1e-3;
      shrunk_any = true;
    }
    auto [T, br] = temperature(model, entropy, x, h_eff);
    (void)br;
    std::vector<double> press = model.pressure(x);
    for (int j = 0; j < model.n; ++j) {
      StatePoint up = x, dn = x;
      up.V[j] += h_eff;
      dn.V[j] -= h_eff;
      double ds = (entropy(up) - entropy(dn)) / (2.0 * h_eff);
      double expect = press[j] / T;
      double denom = std::max(std::abs(expect), 1e-12);
      if (std::abs(ds - expect) / denom > tol) {
        v = Verdict::Fail;
        std::ostringstream os;
        os << "dS/dV[" << j << "]=" << ds << " vs P/T=" << expect << " at U=" << x.U;
        w = os.str();
        break;
      }
    }
    if (v == Verdict::Fail) break;
  }
  rep.add("pressure-entropy", v, w);
  if (shrunk_any) rep.add("pressure-entropy-stencil", Verdict::Pass, "boundary stencil shrunk; tolerance widened to 1e-3");
  return rep;
}

SimpleSystemModel make_ideal_gas(double amount, std::string label) {
  if (!(amount > 0.0)) throw std::domain_error("make_ideal_gas: amount must be positive");
  SimpleSystemModel m;
  m.name = {std::move(label)};
  m.n = 1;
  m.u_bounds = {1e-3, 1e3};
  m.v_bounds = {{1e-3, 1e3}};
  m.pressure = [](const StatePoint& x) {
    return std::vector<double>{2.0 * x.U / (3.0 * x.V[0])};
  };
  m.lipschitz_hint = 1.0;
  m.amount = amount;
  m.entropy = [amount](const StatePoint& x) {
    return amount * (1.5 * std::log(x.U / amount) + std::log(x.V[0] / amount));
  };
  m.caloric_temperature = [amount](const StatePoint& x) { return 2.0 * x.U / (3.0 * amount); };
  return m;
}

SimpleSystemModel make_van_der_waals(std::string label) {
  SimpleSystemModel m;
  m.name = {std::move(label)};
  m.n = 1;
  m.u_bounds = {0.1, 50.0};
  m.v_bounds = {{0.45, 20.0}};
  const double c = 4.0;  // reduced heat capacity of the caloric closure
  m.caloric_temperature = [c](const StatePoint& x) { return (x.U + 3.0 / x.V[0]) / c; };
  m.pressure = [m_t = m.caloric_temperature](const StatePoint& x) {
    double t = m_t(x);
    double v = x.V[0];
    return std::vector<double>{8.0 * t / (3.0 * v - 1.0) - 3.0 / (v * v)};
  };
  m.lipschitz_hint = 10.0;
  m.amount = 1.0;
  return m;
}

std::function<double(const StatePoint&)> numeric_entropy(const SimpleSystemModel& model,
                                                         StatePoint ref_point, double ref_value) {
  if (!model.contains(ref_point))
    throw std::domain_error("numeric_entropy: reference point outside domain");
  if (!model.caloric_temperature)
    throw std::invalid_argument("numeric_entropy: model has no caloric temperature");
  SimpleSystemModel m = model;
  return [m, ref_point, ref_value](const StatePoint& x) {
    const int n = m.n;
    double dU = x.U - ref_point.U;
    std::vector<double> dV(n);
    for (int j = 0; j < n; ++j) dV[j] = x.V[j] - ref_point.V[j];
    auto integrand = [&](double s) {
      StatePoint p;
      p.U = ref_point.U + s * dU;
      p.V.resize(n);
      for (int j = 0; j < n; ++j) p.V[j] = ref_point.V[j] + s * dV[j];
      double T = m.caloric_temperature(p);
      std::vector<double> press = m.pressure(p);
      double val = dU / T;
      for (int j = 0; j < n; ++j) val += press[j] * dV[j] / T;
      return val;
    };
    // Composite Simpson with refinement.
    auto simpson = [&](int steps) {
      double h = 1.0 / steps;
      double sum = integrand(0.0) + integrand(1.0);
      for (int i = 1; i < steps; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
      return sum * h / 3.0;
    };
    int steps = 64;
    double prev = simpson(steps);
    while (steps < (1 << 16)) {
      steps *= 2;
      double next = simpson(steps);
      if (std::abs(next - prev) <= 1e-10) {
        prev = next;
        break;
      }
      prev = next;
    }
    return ref_value + prev;
  };
}

}  // namespace thermo
