#include "thermo/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace thermo {

namespace {

constexpr double kLambdaLo = -8.0;
constexpr double kLambdaHi = 9.0;
constexpr int kBisectionCap = 128;
// Scale shares below this are treated as absent when forming mixtures.
constexpr double kShareEps = 1e-15;

bool answer(const AccessOracle& oracle, const CompoundState& a, const CompoundState& b) {
  Comparability q = oracle.precedes(a, b);
  if (q == Comparability::Unknown)
    throw std::runtime_error("entropy construction: oracle undecided on " + a.str() + " vs " +
                             b.str());
  return q == Comparability::Precedes;
}

double bisect_sup(const std::function<bool(double)>& pred, double tol) {
  if (!pred(kLambdaLo))
    throw std::range_error("entropy construction: supremum below search interval");
  if (pred(kLambdaHi))
    throw std::range_error("entropy construction: supremum above search interval");
  double lo = kLambdaLo, hi = kLambdaHi;
  for (int it = 0; it < kBisectionCap; ++it) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    double mid = 0.5 * (lo + hi);
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo <= tol) return 0.5 * (lo + hi);
  throw std::runtime_error("entropy construction: bisection did not converge");
}

}  // namespace

double construct_entropy(const AccessOracle& oracle, const StateRef& x0, const StateRef& x1,
                         const StateRef& x, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("construct_entropy: tolerance must be positive");
  CompoundState c0 = CompoundState::single(x0);
  CompoundState c1 = CompoundState::single(x1);
  CompoundState cx = CompoundState::single(x);
  if (!oracle.strictly_precedes(c0, c1))
    throw std::invalid_argument("construct_entropy: reference pair not strictly ordered");

  auto pred = [&](double lam) {
    if (lam < kShareEps) {
      // Negative share of x1 on the left becomes a positive share on the
      // right: (1-lam) x0 vs (x, (-lam) x1).
      if (lam > -kShareEps) return answer(oracle, c0, cx);
      return answer(oracle, CompoundState::single(x0, 1.0 - lam),
                    compose(cx, CompoundState::single(x1, -lam)));
    }
    if (lam > 1.0 - kShareEps) {
      if (lam < 1.0 + kShareEps) return answer(oracle, c1, cx);
      return answer(oracle, CompoundState::single(x1, lam),
                    compose(cx, CompoundState::single(x0, lam - 1.0)));
    }
    return answer(oracle,
                  compose(CompoundState::single(x0, 1.0 - lam), CompoundState::single(x1, lam)),
                  cx);
  };
  return bisect_sup(pred, tol);
}

double construct_calibrated_entropy(const AccessOracle& oracle, const StateRef& gamma_ref_point,
                                    const StateRef& z0, const StateRef& z1, const StateRef& x,
                                    double tol) {
  if (tol <= 0.0)
    throw std::invalid_argument("construct_calibrated_entropy: tolerance must be positive");
  CompoundState cz0 = CompoundState::single(z0);
  CompoundState cz1 = CompoundState::single(z1);
  if (!oracle.strictly_precedes(cz0, cz1))
    throw std::invalid_argument("construct_calibrated_entropy: reference pair not strictly ordered");
  CompoundState cref = CompoundState::single(gamma_ref_point);
  CompoundState cx = CompoundState::single(x);

  auto pred = [&](double lam) {
    if (lam > kShareEps)
      return answer(oracle, compose(cref, CompoundState::single(z1, lam)),
                    compose(cx, CompoundState::single(z0, lam)));
    if (lam < -kShareEps)
      return answer(oracle, compose(cref, CompoundState::single(z0, -lam)),
                    compose(cx, CompoundState::single(z1, -lam)));
    return answer(oracle, cref, cx);
  };
  return bisect_sup(pred, tol);
}

std::pair<double, double> rebase(double lambda, double lambda0, double lambda1) {
  double denom = 1.0 - lambda0 + lambda0 * lambda1;
  if (std::abs(denom) < 1e-300)
    throw std::domain_error("rebase: degenerate reference pair (zero denominator)");
  double mu = lambda * lambda1 / denom;
  double mu_prime = (lambda * (1.0 - lambda0) + lambda0 * lambda1) / denom;
  return {mu, mu_prime};
}

Report verify_entropy_principle(const std::map<StateRef, double>& S, const AccessOracle& oracle,
                                const std::vector<StateRef>& sample, double tol) {
  Report rep;
  auto value = [&](const StateRef& s) {
    auto it = S.find(s);
    if (it == S.end())
      throw std::invalid_argument("verify_entropy_principle: no value for " + s.str());
    return it->second;
  };
  auto single = [](const StateRef& s, double t = 1.0) { return CompoundState::single(s, t); };

  {  // Monotonicity on comparable pairs.
    Verdict v = Verdict::Pass;
    std::string w;
    for (std::size_t i = 0; i < sample.size() && v != Verdict::Fail; ++i)
      for (std::size_t j = 0; j < sample.size(); ++j) {
        Comparability q = oracle.precedes(single(sample[i]), single(sample[j]));
        if (q == Comparability::Unknown) continue;
        if (q != Comparability::Precedes) continue;
        if (value(sample[i]) > value(sample[j]) + tol) {
          v = Verdict::Fail;
          w = "order reversed: " + sample[i].str() + " -> " + sample[j].str();
          break;
        }
      }
    rep.add("monotone", v, w);
  }

  {  // Additivity on compound pairs.
    Verdict v = Verdict::Pass;
    std::string w;
    const std::size_t m = std::min<std::size_t>(sample.size(), 12);
    for (std::size_t i = 0; i < m && v != Verdict::Fail; ++i)
      for (std::size_t j = 0; j < m && v != Verdict::Fail; ++j)
        for (std::size_t k = 0; k < m && v != Verdict::Fail; ++k)
          for (std::size_t l = 0; l < m; ++l) {
            CompoundState lhs = compose(single(sample[i]), single(sample[j]));
            CompoundState rhs = compose(single(sample[k]), single(sample[l]));
            if (oracle.precedes(lhs, rhs) != Comparability::Precedes) continue;
            double sl = value(sample[i]) + value(sample[j]);
            double sr = value(sample[k]) + value(sample[l]);
            if (sl > sr + tol) {
              v = Verdict::Fail;
              w = "compound order reversed: " + lhs.str() + " -> " + rhs.str();
              break;
            }
          }
    rep.add("additive", v, w);
  }

  {  // Extensivity: scaling preserves the comparison against scaled values.
    Verdict v = Verdict::Pass;
    std::string w;
    const double t = 2.0;
    for (std::size_t i = 0; i < sample.size() && v != Verdict::Fail; ++i)
      for (std::size_t j = 0; j < sample.size(); ++j) {
        Comparability q = oracle.precedes(single(sample[i], t), single(sample[j], t));
        if (q == Comparability::Unknown) continue;
        bool by_value = t * value(sample[i]) <= t * value(sample[j]) + t * tol;
        if (q == Comparability::Precedes && !by_value) {
          v = Verdict::Fail;
          w = "scaled order reversed: " + sample[i].str() + " -> " + sample[j].str();
          break;
        }
      }
    rep.add("extensive", v, w);
  }

  {  // Strict increase on strictly ordered pairs.
    Verdict v = Verdict::Pass;
    std::string w;
    for (std::size_t i = 0; i < sample.size() && v != Verdict::Fail; ++i)
      for (std::size_t j = 0; j < sample.size(); ++j) {
        if (!oracle.strictly_precedes(single(sample[i]), single(sample[j]))) continue;
        if (value(sample[j]) - value(sample[i]) <= tol) {
          v = Verdict::Fail;
          w = "no strict increase: " + sample[i].str() + " -> " + sample[j].str();
          break;
        }
      }
    rep.add("strict-increase", v, w);
  }

  return rep;
}

AffineFit affine_fit(const std::map<StateRef, double>& S_a, const std::map<StateRef, double>& S_b,
                     const std::vector<StateRef>& sample) {
  std::vector<std::pair<double, double>> pts;
  for (const StateRef& s : sample) {
    auto ia = S_a.find(s);
    auto ib = S_b.find(s);
    if (ia != S_a.end() && ib != S_b.end()) pts.push_back({ia->second, ib->second});
  }
  if (pts.size() < 2) throw std::invalid_argument("affine_fit: need at least two common points");

  double ma = 0.0, mb = 0.0;
  for (auto [a, b] : pts) {
    ma += a;
    mb += b;
  }
  ma /= static_cast<double>(pts.size());
  mb /= static_cast<double>(pts.size());
  double var = 0.0, cov = 0.0;
  for (auto [a, b] : pts) {
    var += (a - ma) * (a - ma);
    cov += (a - ma) * (b - mb);
  }
  if (var < 1e-300) throw std::invalid_argument("affine_fit: degenerate (constant) input");
  AffineFit fit;
  fit.a = cov / var;
  if (fit.a <= 0.0) throw std::invalid_argument("affine_fit: fitted slope not positive");
  fit.B = mb - fit.a * ma;
  fit.residual = 0.0;
  for (auto [a, b] : pts)
    fit.residual = std::max(fit.residual, std::abs(fit.a * a + fit.B - b));
  return fit;
}

std::optional<Rational> grid_entropy(const FiniteRelation& rel, int x0, int x1, int x) {
  GridCompound g0 = GridCompound::single(x0);
  GridCompound g1 = GridCompound::single(x1);
  GridCompound gx = GridCompound::single(x);

  // The reference pair must be certifiably strict.
  if (rel.query(g0, g1) != Comparability::Precedes) return std::nullopt;
  if (rel.query(g1, g0) != Comparability::NotPrecedes) return std::nullopt;

  std::int64_t L = 1;
  for (const Rational& t : rel.scale_grid()) L = std::lcm(L, t.den());

  std::optional<Rational> best;
  for (std::int64_t k = 0; k <= L; ++k) {
    Rational lam(k, L);
    GridCompound mix;
    if (k == 0)
      mix = g0;
    else if (k == L)
      mix = g1;
    else
      mix = GridCompound::make({{Rational(L - k, L), x0}, {lam, x1}});
    if (k != 0 && k != L && !rel.universe_id(mix)) return std::nullopt;

    Comparability fwd = rel.query(mix, gx);
    Comparability bwd = rel.query(gx, mix);
    // Every probed mixture must be comparable with x, both directions
    // decided; otherwise the construction is not certified.
    if (fwd == Comparability::Unknown || bwd == Comparability::Unknown) return std::nullopt;
    if (fwd == Comparability::NotPrecedes && bwd == Comparability::NotPrecedes)
      return std::nullopt;
    if (fwd == Comparability::Precedes) {
      if (!best || *best < lam) best = lam;
    }
  }
  return best;
}

}  // namespace thermo
