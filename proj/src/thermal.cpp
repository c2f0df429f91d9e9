#include "thermo/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace thermo {

namespace {

constexpr double kMargin = 2e-6;  // relative window shrink, keeps slices open

double temperature_of(const ThermalState& s) {
  double h = 1e-6 * std::max(1.0, std::abs(s.x.U));
  return temperature(*s.model, s.S, s.x, h).first;
}

TemperatureBracket bracket_of(const ThermalState& s) {
  double h = 1e-6 * std::max(1.0, std::abs(s.x.U));
  return temperature(*s.model, s.S, s.x, h).second;
}

}  // namespace

JoinedSystemModel make_joined(SimpleSystemModel a, SimpleSystemModel b) {
  if (b.name.label < a.name.label) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

ThermalJoinPoint thermal_join(const StatePoint& x, const StatePoint& y) {
  return {x.U + y.U, x.V, y.V};
}

SplitResult thermal_split(const ThermalJoinPoint& joined, const SimpleSystemModel& left,
                          const SimpleSystemModel& right, const EntropyPointFn& S1,
                          const EntropyPointFn& S2, double tol) {
  const double U = joined.U;
  double lo = std::max(left.u_bounds[0], U - right.u_bounds[1]);
  double hi = std::min(left.u_bounds[1], U - right.u_bounds[0]);
  double span = hi - lo;
  if (!(span > 0.0)) throw std::domain_error("thermal_split: empty energy window");
  lo += kMargin * span;
  hi -= kMargin * span;

  auto f = [&](double W) {
    StatePoint a{W, joined.V1};
    StatePoint b{U - W, joined.V2};
    return S1(a) + S2(b);
  };

  // Concavity scan of the profile; a violated second difference triggers the
  // grid fallback.
  const int kScan = 128;
  std::vector<double> vals(kScan + 1);
  for (int i = 0; i <= kScan; ++i) vals[i] = f(lo + (hi - lo) * i / kScan);
  bool concave = true;
  double scale = 0.0;
  for (double v : vals) scale = std::max(scale, std::abs(v));
  for (int i = 1; i < kScan; ++i)
    if (vals[i - 1] + vals[i + 1] - 2.0 * vals[i] > 1e-9 * std::max(1.0, scale)) {
      concave = false;
      break;
    }

  double a = lo, b = hi;
  if (!concave) {
    // Grid scan: restrict the search to the best cell's neighborhood.
    int best = 0;
    for (int i = 1; i <= kScan; ++i)
      if (vals[i] > vals[best]) best = i;
    a = lo + (hi - lo) * std::max(0, best - 1) / kScan;
    b = lo + (hi - lo) * std::min(kScan, best + 1) / kScan;
  }

  // Golden-section maximization.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  double window_tol = tol * std::max(1.0, std::abs(U));
  while (b - a > window_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  double W = 0.5 * (a + b);
  // One parabolic refinement through the midpoint and the window edges.
  {
    double h = std::max(1e-9, 0.5 * (b - a));
    double fm = f(W), fl = f(W - h), fr = f(W + h);
    double denom = fl - 2.0 * fm + fr;
    if (denom < -1e-300) {
      double shift = 0.5 * h * (fl - fr) / denom;
      if (std::abs(shift) <= h) {
        double Wp = W + shift;
        if (f(Wp) >= fm) W = Wp;
      }
    }
  }

  SplitResult res;
  res.maximizer_energy = W;
  res.x = StatePoint{W, joined.V1};
  res.y = StatePoint{U - W, joined.V2};
  res.total_entropy = f(W);
  res.grid_fallback = !concave;
  return res;
}

ThermalState scale_thermal(const ThermalState& a, double t) {
  if (!(t > 0.0)) throw std::domain_error("scale_thermal: factor must be positive");
  ThermalState out;
  auto model = std::make_shared<SimpleSystemModel>(*a.model);
  model->u_bounds = {a.model->u_bounds[0] * t, a.model->u_bounds[1] * t};
  for (auto& vb : model->v_bounds) vb = {vb[0] * t, vb[1] * t};
  model->amount = a.model->amount * t;
  SimpleSystemModel base = *a.model;
  model->pressure = [base, t](const StatePoint& x) {
    StatePoint d{x.U / t, x.V};
    for (auto& v : d.V) v /= t;
    return base.pressure(d);
  };
  model->region = nullptr;
  model->entropy = nullptr;
  model->caloric_temperature = nullptr;
  // Keep the scaled model alive inside the entropy closure.
  EntropyPointFn base_S = a.S;
  out.S = [base_S, t, model](const StatePoint& x) {
    StatePoint d{x.U / t, x.V};
    for (auto& v : d.V) v /= t;
    return t * base_S(d);
  };
  out.owned = model;
  out.model = model.get();
  out.x.U = a.x.U * t;
  out.x.V = a.x.V;
  for (auto& v : out.x.V) v *= t;
  return out;
}

bool in_thermal_equilibrium(const ThermalState& a, const ThermalState& b, double tol) {
  TemperatureBracket ba = bracket_of(a);
  TemperatureBracket bb = bracket_of(b);
  double slack = tol + 1e-6 * std::max({ba.t_plus, bb.t_plus});
  return ba.t_minus - slack <= bb.t_plus && bb.t_minus - slack <= ba.t_plus;
}

namespace {

Report zeroth_law_impl(const std::function<bool(const ThermalState&, const ThermalState&)>& equil,
                       const std::vector<std::array<ThermalState, 3>>& triples,
                       bool check_scaling) {
  Report rep;
  Verdict vt = Verdict::Pass, vs = Verdict::Pass, vsc = Verdict::Pass;
  std::string wt, ws, wsc;
  int idx = 0;
  for (const auto& [x, y, z] : triples) {
    ++idx;
    if (equil(x, z) && equil(z, y) && !equil(x, y)) {
      vt = Verdict::Fail;
      std::ostringstream os;
      os << "triple " << idx << ": X~Z and Z~Y but not X~Y";
      wt = os.str();
    }
    if (equil(x, y) != equil(y, x)) {
      vs = Verdict::Fail;
      ws = "asymmetric pair in triple " + std::to_string(idx);
    }
    if (check_scaling && equil(x, y)) {
      ThermalState x2 = scale_thermal(x, 2.0);
      ThermalState y3 = scale_thermal(y, 3.0);
      if (!equil(x2, y3)) {
        vsc = Verdict::Fail;
        wsc = "scaling broke equilibrium in triple " + std::to_string(idx);
      }
    }
  }
  rep.add("zeroth-law-transitive", vt, wt);
  rep.add("zeroth-law-symmetric", vs, ws);
  if (check_scaling) rep.add("zeroth-law-scaling", vsc, wsc);
  return rep;
}

}  // namespace

Report check_zeroth_law(const std::vector<std::array<ThermalState, 3>>& triples) {
  return zeroth_law_impl(
      [](const ThermalState& a, const ThermalState& b) { return in_thermal_equilibrium(a, b); },
      triples, true);
}

Report check_zeroth_law(const std::function<bool(const ThermalState&, const ThermalState&)>& equil,
                        const std::vector<std::array<ThermalState, 3>>& triples) {
  return zeroth_law_impl(equil, triples, false);
}

Report check_transversality(const SimpleSystemModel& model, const EntropyPointFn& S,
                            const StatePoint& x, std::array<double, 2> v_scan_range,
                            int scan_points, double t_factor) {
  Report rep;
  double h = 1e-6 * std::max(1.0, std::abs(x.U));
  double Tx = temperature(model, S, x, h).first;
  double T0 = t_factor * Tx;
  double Sx = S(x);

  // For each scanned work coordinate, find the energy on the target isotherm
  // by bisection (temperature is increasing in U for concave entropy).
  std::vector<StatePoint> isotherm;
  for (int i = 0; i < scan_points; ++i) {
    double v = scan_points == 1
                   ? v_scan_range[0]
                   : v_scan_range[0] + (v_scan_range[1] - v_scan_range[0]) * i / (scan_points - 1);
    double mu = 1e-6 * (model.u_bounds[1] - model.u_bounds[0]);
    double ulo = model.u_bounds[0] + 4.0 * mu;
    double uhi = model.u_bounds[1] - 4.0 * mu;
    auto temp_at = [&](double u) {
      StatePoint p{u, {v}};
      p.V.assign(x.V.size(), v);
      double hh = 1e-6 * std::max(1.0, std::abs(u));
      return temperature(model, S, p, hh).first;
    };
    if (temp_at(ulo) > T0 || temp_at(uhi) < T0) continue;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (ulo + uhi);
      if (temp_at(mid) < T0)
        ulo = mid;
      else
        uhi = mid;
    }
    StatePoint p{0.5 * (ulo + uhi), {}};
    p.V.assign(x.V.size(), v);
    isotherm.push_back(p);
  }

  const StatePoint* below = nullptr;
  const StatePoint* above = nullptr;
  for (const auto& p : isotherm) {
    if (S(p) < Sx && (!below || S(p) > S(*below))) below = &p;
    if (S(p) > Sx && (!above || S(p) < S(*above))) above = &p;
  }
  if (below && above) {
    std::ostringstream os;
    os << "isotherm T=" << T0 << ": S=" << S(*below) << " < " << Sx << " < " << S(*above);
    rep.add("transversality", Verdict::Pass, os.str());
  } else {
    std::ostringstream os;
    os << "isotherm T=" << T0 << " scanned " << isotherm.size()
       << " states, no straddling pair";
    rep.add("transversality", Verdict::Fail, os.str());
  }
  return rep;
}

Report check_energy_flow(const ThermalState& a, const ThermalState& b) {
  double Ta = temperature_of(a);
  double Tb = temperature_of(b);
  if (std::abs(Ta - Tb) <= 1e-9)
    throw std::invalid_argument("check_energy_flow: temperatures are equal");
  const ThermalState& hot = Ta > Tb ? a : b;
  const ThermalState& cold = Ta > Tb ? b : a;

  ThermalJoinPoint joined = thermal_join(hot.x, cold.x);
  SplitResult split = thermal_split(joined, *hot.model, *cold.model, hot.S, cold.S);

  Report rep;
  double tol = 1e-9 * std::max(1.0, std::abs(joined.U));
  {
    bool ok = split.x.U <= hot.x.U + tol;
    rep.add("hot-energy-nonincreasing", ok ? Verdict::Pass : Verdict::Fail,
            ok ? "" : "hot side gained energy");
  }
  {
    bool ok = split.y.U >= cold.x.U - tol;
    rep.add("cold-energy-nondecreasing", ok ? Verdict::Pass : Verdict::Fail,
            ok ? "" : "cold side lost energy");
  }
  {
    ThermalState hs{hot.model, hot.S, split.x};
    ThermalState cs{cold.model, cold.S, split.y};
    double Th = temperature_of(hs);
    double Tc = temperature_of(cs);
    double Thot = std::max(Ta, Tb), Tcold = std::min(Ta, Tb);
    double slack = 1e-4 * Thot;
    bool ok = Th <= Thot + slack && Th >= Tcold - slack && Tc <= Thot + slack &&
              Tc >= Tcold - slack;
    std::ostringstream os;
    os << "T*=" << 0.5 * (Th + Tc) << " between " << Tcold << " and " << Thot;
    rep.add("middle-temperature", ok ? Verdict::Pass : Verdict::Fail, os.str());
  }
  return rep;
}

CarnotResult carnot_check(double q1, double t1, double q0, double t0) {
  if (!(t0 > 0.0) || !(t1 > t0)) throw std::invalid_argument("carnot_check: need t1 > t0 > 0");
  if (q1 == 0.0) throw std::invalid_argument("carnot_check: q1 must be nonzero");
  CarnotResult res;
  res.allowed = q1 / t1 + q0 / t0 <= 1e-12;
  res.eta = (q1 + q0) / q1;
  res.eta_carnot = 1.0 - t0 / t1;
  return res;
}

AuditResult reservoir_cycle_audit(const std::vector<ReservoirStep>& steps,
                                  double machine_entropy_change) {
  AuditResult out;
  double total = machine_entropy_change;
  int idx = 0;
  Verdict vb = Verdict::Pass;
  std::string wb;
  for (const ReservoirStep& st : steps) {
    ++idx;
    StatePoint end = st.start;
    end.U -= st.Q;
    if (!st.model.contains(end))
      throw std::domain_error("reservoir_cycle_audit: reservoir driven out of its domain");
    double h = 1e-6 * std::max(1.0, std::abs(end.U));
    double T_end = temperature(st.model, st.S, end, h).first;
    double dS_exact = st.S(end) - st.S(st.start);
    double dS_bound = -st.Q / T_end;
    AuditRow row{idx, st.Q, T_end, dS_bound, dS_exact};
    out.rows.push_back(row);
    total += dS_exact;
    if (dS_exact < dS_bound - 1e-10 * std::max(1.0, std::abs(dS_bound))) {
      vb = Verdict::Fail;
      wb = "step " + std::to_string(idx) + ": exact entropy change below the convexity bound";
    }
  }
  out.report.add("reservoir-bound", vb, wb);
  out.total_dS = total;
  bool cyclic_ok = total >= -1e-8;
  out.report.add("cycle-total", cyclic_ok ? Verdict::Pass : Verdict::Fail,
                 cyclic_ok ? "" : "total entropy change negative: " + std::to_string(total));
  return out;
}

}  // namespace thermo
