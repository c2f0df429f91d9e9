#include "thermo/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace thermo {

namespace {

constexpr double kPropTol = 1e-9;

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ReactionNetwork::add_node(SpaceNode n) {
  if (index_.count(n.id.label))
    throw std::invalid_argument("ReactionNetwork: duplicate node " + n.id.label);
  index_[n.id.label] = nodes_.size();
  nodes_.push_back(std::move(n));
}

void ReactionNetwork::add_edge_witness(const std::string& from, const std::string& to,
                                       ProcessWitness w) {
  if (!has_node(from) || !has_node(to))
    throw std::invalid_argument("ReactionNetwork: edge endpoint not registered");
  edges_[{from, to}].witnesses.push_back(std::move(w));
}

void ReactionNetwork::set_direct_D(const std::string& from, const std::string& to, double d) {
  if (!has_node(from) || !has_node(to))
    throw std::invalid_argument("ReactionNetwork: edge endpoint not registered");
  edges_[{from, to}].direct_D = d;
}

void ReactionNetwork::add_catalyst(std::string id) {
  if (!has_node(id)) throw std::invalid_argument("ReactionNetwork: catalyst not registered");
  catalysts_.push_back(std::move(id));
}

bool ReactionNetwork::has_node(const std::string& id) const { return index_.count(id) > 0; }

const SpaceNode& ReactionNetwork::node(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::invalid_argument("ReactionNetwork: unknown node " + id);
  return nodes_[it->second];
}

double ReactionNetwork::entropy_at(const std::string& id, const StateRef& s) const {
  const SpaceNode& n = node(id);
  if (!n.entropy) throw std::invalid_argument("ReactionNetwork: node has no entropy: " + id);
  return n.entropy(s);
}

std::optional<std::string> ReactionNetwork::find_product(
    std::vector<std::pair<double, std::string>> factors) const {
  auto norm = [](std::vector<std::pair<double, std::string>> f) {
    std::sort(f.begin(), f.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return f;
  };
  auto want = norm(std::move(factors));
  for (const SpaceNode& n : nodes_) {
    if (n.factors.empty()) continue;
    auto have = norm(n.factors);
    if (have.size() != want.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < have.size(); ++i)
      if (have[i].second != want[i].second || std::abs(have[i].first - want[i].first) > 1e-12) {
        ok = false;
        break;
      }
    if (ok) return n.id.label;
  }
  return std::nullopt;
}

std::optional<std::string> ReactionNetwork::element_product_for(const std::string& id) const {
  const SpaceNode& n = node(id);
  std::vector<const SpaceNode*> elements;
  for (const SpaceNode& e : nodes_)
    if (e.element) elements.push_back(&e);
  // Element k must have a composition that is the k-th unit vector.
  std::vector<std::pair<double, std::string>> factors;
  for (std::size_t k = 0; k < n.composition.size(); ++k) {
    double amount = n.composition[k];
    if (amount == 0.0) continue;
    const SpaceNode* match = nullptr;
    for (const SpaceNode* e : elements) {
      if (k < e->composition.size() && e->composition[k] > 0.0) {
        bool unit = true;
        for (std::size_t j = 0; j < e->composition.size(); ++j)
          if (j != k && e->composition[j] != 0.0) unit = false;
        if (unit) {
          match = e;
          break;
        }
      }
    }
    if (!match) return std::nullopt;
    factors.push_back({amount / match->composition[k], match->id.label});
  }
  if (factors.size() == 1 && std::abs(factors[0].first - 1.0) < 1e-12)
    return factors[0].second;
  return find_product(std::move(factors));
}

double compute_D(const ReactionNetwork& net, const std::string& g, const std::string& g_prime) {
  auto it = net.edges().find({g, g_prime});
  if (it == net.edges().end()) return infinite_deficit();
  const EdgeData& e = it->second;
  double best = infinite_deficit();
  if (e.direct_D) best = *e.direct_D;
  for (const ProcessWitness& w : e.witnesses) {
    double jump = net.entropy_at(g_prime, w.to) - net.entropy_at(g, w.from);
    best = std::min(best, jump);
  }
  return best;
}

namespace {

// Bellman-Ford over the finite-D graph. Returns distances from `source`;
// nodes influenced by a negative cycle are flagged and the cycle recorded.
struct ShortestPaths {
  std::map<std::string, double> dist;
  std::set<std::string> tainted;  // downstream of a negative cycle
  std::vector<std::string> cycle;
};

ShortestPaths shortest_paths(const ReactionNetwork& net, const std::string& source) {
  std::vector<std::string> ids;
  for (const SpaceNode& n : net.nodes()) ids.push_back(n.id.label);
  std::vector<std::tuple<std::string, std::string, double>> arcs;
  for (const auto& [key, edge] : net.edges()) {
    (void)edge;
    double d = compute_D(net, key.first, key.second);
    if (finite(d)) arcs.push_back({key.first, key.second, d});
  }

  ShortestPaths sp;
  std::map<std::string, std::string> parent;
  const double inf = infinite_deficit();
  for (const auto& id : ids) sp.dist[id] = inf;
  sp.dist[source] = 0.0;
  for (std::size_t round = 0; round + 1 < ids.size() || ids.size() == 1; ++round) {
    bool changed = false;
    for (const auto& [u, v, w] : arcs) {
      if (sp.dist[u] < inf && sp.dist[u] + w < sp.dist[v] - 1e-15) {
        sp.dist[v] = sp.dist[u] + w;
        parent[v] = u;
        changed = true;
      }
    }
    if (!changed) break;
    if (ids.size() == 1) break;
  }
  // Extra pass: any further relaxation marks a negative cycle.
  std::vector<std::string> seeds;
  for (const auto& [u, v, w] : arcs)
    if (sp.dist[u] < inf && sp.dist[u] + w < sp.dist[v] - 1e-12) {
      seeds.push_back(v);
      if (sp.cycle.empty()) {
        // Walk back |V| steps to land inside the cycle, then collect it.
        std::string cur = v;
        for (std::size_t i = 0; i < ids.size(); ++i) cur = parent.at(cur);
        std::vector<std::string> cyc{cur};
        for (std::string p = parent.at(cur); p != cur; p = parent.at(p)) cyc.push_back(p);
        std::reverse(cyc.begin(), cyc.end());
        sp.cycle = cyc;
      }
    }
  // Propagate taint downstream.
  std::queue<std::string> q;
  for (const auto& s : seeds)
    if (sp.tainted.insert(s).second) q.push(s);
  while (!q.empty()) {
    std::string u = q.front();
    q.pop();
    for (const auto& [a, b, w] : arcs) {
      (void)w;
      if (a == u && sp.tainted.insert(b).second) q.push(b);
    }
  }
  return sp;
}

}  // namespace

double compute_E(const ReactionNetwork& net, const std::string& g, const std::string& g_prime) {
  if (!net.has_node(g) || !net.has_node(g_prime))
    throw std::invalid_argument("compute_E: unknown node");
  if (g == g_prime) {
    // The empty chain is admissible, but a reachable negative cycle still
    // makes the infimum unbounded.
    ShortestPaths sp = shortest_paths(net, g);
    if (sp.tainted.count(g)) throw NegativeCycleError(sp.cycle);
    return std::min(0.0, sp.dist.count(g) ? sp.dist[g] : 0.0);
  }
  ShortestPaths sp = shortest_paths(net, g);
  if (sp.tainted.count(g_prime)) throw NegativeCycleError(sp.cycle);
  return sp.dist[g_prime];
}

double compute_F(const ReactionNetwork& net, const std::string& g, const std::string& g_prime) {
  double best = compute_E(net, g, g_prime);
  for (const std::string& c : net.catalysts()) {
    auto pg = net.find_product({{1.0, g}, {1.0, c}});
    auto pgp = net.find_product({{1.0, g_prime}, {1.0, c}});
    if (!pg || !pgp) continue;
    best = std::min(best, compute_E(net, *pg, *pgp));
  }
  return best;
}

Report check_F_properties(const ReactionNetwork& net,
                          const std::vector<std::pair<std::string, std::string>>& sample_pairs) {
  Report rep;
  std::set<std::string> id_set;
  for (const auto& [a, b] : sample_pairs) {
    id_set.insert(a);
    id_set.insert(b);
  }
  std::vector<std::string> ids(id_set.begin(), id_set.end());

  {  // identity at equal arguments
    Verdict v = Verdict::Pass;
    std::string w;
    for (const auto& id : ids) {
      double f = compute_F(net, id, id);
      if (std::abs(f) > kPropTol) {
        v = Verdict::Fail;
        w = "F(" + id + "," + id + ") = " + std::to_string(f);
        break;
      }
    }
    rep.add("F-identity", v, w);
  }

  {  // scaling: F(t g, t g') = t F(g, g') for registered scaled nodes
    Verdict v = Verdict::Pass;
    std::string w;
    for (const auto& [a, b] : sample_pairs) {
      for (const SpaceNode& n : net.nodes()) {
        if (n.factors.size() != 1 || n.factors[0].second != a) continue;
        double t = n.factors[0].first;
        auto sb = net.find_product({{t, b}});
        if (!sb) continue;
        double lhs = compute_F(net, n.id.label, *sb);
        double rhs = compute_F(net, a, b);
        if (finite(lhs) != finite(rhs)) continue;
        if (finite(lhs) && std::abs(lhs - t * rhs) > 1e-12 * std::max(1.0, std::abs(rhs))) {
          v = Verdict::Fail;
          std::ostringstream os;
          os << "F(t*" << a << ",t*" << b << ")=" << lhs << " vs t*F=" << t * rhs;
          w = os.str();
        }
      }
    }
    rep.add("F-scaling", v, w);
  }

  {  // subadditivity over products
    Verdict v = Verdict::Pass;
    std::string w;
    for (const auto& [a1, b1] : sample_pairs)
      for (const auto& [a2, b2] : sample_pairs) {
        auto pa = net.find_product({{1.0, a1}, {1.0, a2}});
        auto pb = net.find_product({{1.0, b1}, {1.0, b2}});
        if (!pa || !pb) continue;
        double lhs = compute_F(net, *pa, *pb);
        double rhs = compute_F(net, a1, b1) + compute_F(net, a2, b2);
        if (!finite(rhs)) continue;
        if (lhs > rhs + kPropTol) {
          v = Verdict::Fail;
          w = "F(" + *pa + "," + *pb + ") exceeds the sum of the factor values";
        }
      }
    rep.add("F-subadditive", v, w);
  }

  {  // translation invariance under the configured catalysts
    Verdict v = Verdict::Pass;
    std::string w;
    for (const auto& [a, b] : sample_pairs)
      for (const std::string& c : net.catalysts()) {
        auto pa = net.find_product({{1.0, a}, {1.0, c}});
        auto pb = net.find_product({{1.0, b}, {1.0, c}});
        if (!pa || !pb) continue;
        double lhs = compute_F(net, *pa, *pb);
        double rhs = compute_F(net, a, b);
        if (finite(lhs) != finite(rhs) ||
            (finite(lhs) && std::abs(lhs - rhs) > kPropTol)) {
          v = Verdict::Fail;
          w = "catalyst " + c + " shifts F(" + a + "," + b + ")";
        }
      }
    rep.add("F-translation", v, w);
  }

  {  // triangle inequality
    Verdict v = Verdict::Pass;
    std::string w;
    for (const auto& a : ids)
      for (const auto& b : ids)
        for (const auto& c : ids) {
          double rhs = compute_F(net, a, b) + compute_F(net, b, c);
          if (!finite(rhs)) continue;
          if (compute_F(net, a, c) > rhs + kPropTol) {
            v = Verdict::Fail;
            w = "F(" + a + "," + c + ") > F(" + a + "," + b + ")+F(" + b + "," + c + ")";
          }
        }
    rep.add("F-triangle", v, w);
  }

  {  // -F(g',g) <= F(g,g')
    Verdict v = Verdict::Pass;
    std::string w;
    for (const auto& [a, b] : sample_pairs) {
      double fwd = compute_F(net, a, b);
      double bwd = compute_F(net, b, a);
      if (!finite(fwd) || !finite(bwd)) continue;
      if (-bwd > fwd + kPropTol) {
        v = Verdict::Fail;
        w = "-F(" + b + "," + a + ") > F(" + a + "," + b + ")";
      }
    }
    rep.add("F-antisymmetric-bound", v, w);
  }

  return rep;
}

Report check_theorem6(const ReactionNetwork& net, const std::string& g, const std::string& g_prime,
                      const std::function<Comparability(const StateRef&, const StateRef&)>& relation,
                      const std::vector<std::pair<StateRef, StateRef>>& sample, double tol) {
  Report rep;
  double F = compute_F(net, g, g_prime);
  Verdict v = Verdict::Pass;
  std::string w;
  int boundary = 0;

  if (!finite(F)) {
    // Unconnected spaces: no pair may be related.
    for (const auto& [x, y] : sample) {
      Comparability rel = relation(x, y);
      if (rel == Comparability::Precedes) {
        v = Verdict::Fail;
        w = "spaces unconnected but " + x.str() + " precedes " + y.str();
        break;
      }
    }
    rep.add("theorem6", v, w);
    return rep;
  }

  for (const auto& [x, y] : sample) {
    double margin = net.entropy_at(g_prime, y) - net.entropy_at(g, x) - F;
    if (std::abs(margin) <= tol) {
      ++boundary;
      continue;
    }
    bool by_entropy = margin > 0.0;
    Comparability rel = relation(x, y);
    if (rel == Comparability::Unknown) {
      if (v == Verdict::Pass) v = Verdict::Inconclusive;
      continue;
    }
    if ((rel == Comparability::Precedes) != by_entropy) {
      v = Verdict::Fail;
      std::ostringstream os;
      os << "mismatch at " << x.str() << " vs " << y.str() << " (margin " << margin << ")";
      w = os.str();
      break;
    }
  }
  rep.add("theorem6", v, w);
  if (boundary > 0)
    rep.add("theorem6-boundary", Verdict::Pass,
            std::to_string(boundary) + " pairs within tolerance of equality, excluded");
  return rep;
}

namespace {

// Linear expansion of a node's constant in terms of non-element primitive
// variables (elements are pinned to zero).
std::map<std::string, double> expand_node(const ReactionNetwork& net, const std::string& id,
                                          double coef) {
  const SpaceNode& n = net.node(id);
  std::map<std::string, double> out;
  if (n.factors.empty()) {
    if (!n.element) out[id] += coef;
    return out;
  }
  for (const auto& [lam, fid] : n.factors)
    for (const auto& [var, c] : expand_node(net, fid, coef * lam)) out[var] += c;
  return out;
}

}  // namespace

CalibrationSolution solve_constants(const ReactionNetwork& net) {
  CalibrationSolution sol;

  std::vector<std::string> vars;
  for (const SpaceNode& n : net.nodes())
    if (n.factors.empty() && !n.element) vars.push_back(n.id.label);
  std::map<std::string, int> var_index;
  for (std::size_t i = 0; i < vars.size(); ++i) var_index[vars[i]] = static_cast<int>(i) + 1;
  const int V = static_cast<int>(vars.size()) + 1;  // node 0 is the zero level

  // Collect constraints expand(u) - expand(w) <= F(u,w) over all node pairs.
  struct Arc {
    int from, to;
    double w;
    std::string label;
  };
  std::vector<Arc> arcs;
  std::vector<std::tuple<std::map<std::string, double>, double, std::string>> posthoc;

  std::vector<std::string> all_ids;
  for (const SpaceNode& n : net.nodes()) all_ids.push_back(n.id.label);
  for (const auto& u : all_ids)
    for (const auto& w_id : all_ids) {
      if (u == w_id) continue;
      double F, Fb;
      try {
        F = compute_F(net, u, w_id);
        Fb = compute_F(net, w_id, u);
      } catch (const NegativeCycleError& e) {
        sol.status = CalibrationSolution::Status::Infeasible;
        sol.violating_cycle = e.cycle;
        return sol;
      }
      if (!finite(F)) continue;
      sol.gaps[{u, w_id}].second = F;
      sol.gaps[{u, w_id}].first = finite(Fb) ? -Fb : -infinite_deficit();

      std::map<std::string, double> coef = expand_node(net, u, 1.0);
      for (const auto& [var, c] : expand_node(net, w_id, -1.0)) coef[var] += c;
      for (auto it = coef.begin(); it != coef.end();)
        it = std::abs(it->second) < 1e-12 ? coef.erase(it) : std::next(it);

      std::string label = u + "->" + w_id;
      if (coef.empty()) {
        if (0.0 > F + kPropTol) {
          sol.status = CalibrationSolution::Status::Infeasible;
          sol.violating_cycle = {u, w_id};
          return sol;
        }
        continue;
      }
      if (coef.size() == 1) {
        auto [var, c] = *coef.begin();
        if (std::abs(std::abs(c) - 1.0) > 1e-12) {
          posthoc.push_back({coef, F, label});
          continue;
        }
        if (c > 0)
          arcs.push_back({0, var_index[var], F, label});  // var <= F
        else
          arcs.push_back({var_index[var], 0, F, label});  // var >= -F
        continue;
      }
      if (coef.size() == 2) {
        auto it = coef.begin();
        auto [v1, c1] = *it;
        auto [v2, c2] = *std::next(it);
        if (std::abs(c1 - 1.0) < 1e-12 && std::abs(c2 + 1.0) < 1e-12) {
          arcs.push_back({var_index[v2], var_index[v1], F, label});
          continue;
        }
        if (std::abs(c1 + 1.0) < 1e-12 && std::abs(c2 - 1.0) < 1e-12) {
          arcs.push_back({var_index[v1], var_index[v2], F, label});
          continue;
        }
      }
      posthoc.push_back({coef, F, label});
    }

  const double inf = infinite_deficit();
  auto bellman_ford = [&](const std::vector<Arc>& graph, std::vector<double>& dist,
                          std::vector<int>& parent) -> std::vector<std::string> {
    dist.assign(V, inf);
    parent.assign(V, -1);
    dist[0] = 0.0;
    for (int round = 0; round < V; ++round) {
      bool changed = false;
      for (const Arc& a : graph)
        if (dist[a.from] < inf && dist[a.from] + a.w < dist[a.to] - 1e-15) {
          dist[a.to] = dist[a.from] + a.w;
          parent[a.to] = a.from;
          changed = true;
        }
      if (!changed) return {};
    }
    for (const Arc& a : graph)
      if (dist[a.from] < inf && dist[a.from] + a.w < dist[a.to] - 1e-12) {
        int cur = a.to;
        for (int i = 0; i < V; ++i) cur = parent[cur];
        std::vector<std::string> cyc;
        int start = cur;
        do {
          cyc.push_back(cur == 0 ? "<zero-level>" : vars[cur - 1]);
          cur = parent[cur];
        } while (cur != start);
        std::reverse(cyc.begin(), cyc.end());
        return cyc;
      }
    return {};
  };

  std::vector<double> upper, lower_neg;
  std::vector<int> parent;
  std::vector<std::string> cyc = bellman_ford(arcs, upper, parent);
  if (!cyc.empty()) {
    sol.status = CalibrationSolution::Status::Infeasible;
    sol.violating_cycle = cyc;
    return sol;
  }
  std::vector<Arc> rev;
  for (const Arc& a : arcs) rev.push_back({a.to, a.from, a.w, a.label});
  cyc = bellman_ford(rev, lower_neg, parent);
  if (!cyc.empty()) {
    sol.status = CalibrationSolution::Status::Infeasible;
    sol.violating_cycle = cyc;
    return sol;
  }

  bool any_free = false;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    double hi = upper[i + 1];
    double lo = lower_neg[i + 1] < inf ? -lower_neg[i + 1] : -inf;
    double b;
    if (finite(hi) && finite(lo))
      b = 0.5 * (lo + hi);
    else if (finite(hi))
      b = hi;
    else if (finite(lo))
      b = lo;
    else {
      b = 0.0;
      any_free = true;
      sol.free_nodes.push_back(vars[i]);
    }
    sol.B[vars[i]] = b;
    sol.intervals[vars[i]] = {lo, hi};
  }
  for (const SpaceNode& n : net.nodes())
    if (n.element) sol.B[n.id.label] = 0.0;

  // Constraints that did not fit the difference form are verified afterwards.
  for (const auto& [coef, F, label] : posthoc) {
    double lhs = 0.0;
    for (const auto& [var, c] : coef) lhs += c * sol.B[var];
    if (lhs > F + 1e-9) {
      sol.status = CalibrationSolution::Status::Infeasible;
      sol.violating_cycle = {label};
      return sol;
    }
  }

  sol.status = any_free ? CalibrationSolution::Status::UnboundedDegreesOfFreedom
                        : CalibrationSolution::Status::Feasible;
  return sol;
}

CalibratorQuad find_calibrators(const SimpleSystemModel& m1,
                                const std::function<double(const StatePoint&)>& S1,
                                const SimpleSystemModel& m2,
                                const std::function<double(const StatePoint&)>& S2,
                                double target_delta, double tol) {
  auto solve_on_ray = [&](const SimpleSystemModel& m,
                          const std::function<double(const StatePoint&)>& S, StatePoint& base,
                          StatePoint& moved) {
    double range = m.u_bounds[1] - m.u_bounds[0];
    double u_lo = m.u_bounds[0] + 1e-3 * range;
    double u_hi = m.u_bounds[1] - 1e-3 * range;
    std::vector<double> v;
    for (const auto& vb : m.v_bounds) v.push_back(std::sqrt(vb[0] * vb[1]));
    base = StatePoint{target_delta >= 0 ? u_lo : u_hi, v};
    if (std::abs(target_delta) <= tol) {
      moved = base;
      return;
    }
    double s_base = S(base);
    double target = s_base + target_delta;
    StatePoint probe_lo{u_lo, v}, probe_hi{u_hi, v};
    if (target < S(probe_lo) - tol || target > S(probe_hi) + tol)
      throw std::range_error("find_calibrators: target outside the entropy range on the ray");
    double a = u_lo, b = u_hi;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      if (S(StatePoint{mid, v}) < target)
        a = mid;
      else
        b = mid;
      if (b - a < 1e-15 * range) break;
    }
    moved = StatePoint{0.5 * (a + b), v};
  };

  CalibratorQuad quad;
  solve_on_ray(m1, S1, quad.x0, quad.x1);
  solve_on_ray(m2, S2, quad.y0, quad.y1);
  quad.degenerate = std::abs(target_delta) <= tol;
  return quad;
}

}  // namespace thermo
