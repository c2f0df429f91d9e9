// Command-line front end: loads model/network/relation configs, runs the
// library checks and constructions, and writes deterministic CSV reports.
//
// Exit codes: 0 = all checks passed, 1 = a check failed (or was inconclusive
// under --strict) or a computation was infeasible, 2 = usage or parse error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "thermo/axiom_checks.hpp"
#include "thermo/calibration.hpp"
#include "thermo/config.hpp"
#include "thermo/entropy.hpp"
#include "thermo/simple_system.hpp"
#include "thermo/thermal.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string config;
  std::string out = ".";
  double tol = 1e-9;
  std::uint64_t seed = 0;
  bool strict = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "input config file")->required();
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--tol", c.tol, "numeric tolerance");
  sub->add_option("--seed", c.seed, "sampling seed");
  sub->add_flag("--strict", c.strict, "treat inconclusive checks as failures");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool looks_like_sections(const std::string& text) {
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    return line[b] == '[';
  }
  return false;
}

std::ofstream open_output(const Common& c, const std::string& name) {
  std::filesystem::create_directories(c.out);
  std::filesystem::path p = std::filesystem::path(c.out) / name;
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

thermo::CsvMeta meta_for(const Common& c, const std::string& config_text) {
  return {kVersion, thermo::fnv1a_hash(config_text), c.seed};
}

int verdict_exit(const thermo::Report& rep, bool strict) {
  if (rep.has_failure()) return 1;
  if (strict && rep.has_inconclusive()) return 1;
  return 0;
}

std::vector<std::vector<std::string>> report_rows(const thermo::Report& rep) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : rep.results)
    rows.push_back({r.check, thermo::to_string(r.verdict), r.witness});
  return rows;
}

// Interior sample points of a one-work-coordinate model, reproducible from
// the seed. The window defaults to the `[entropy]` grid ranges when present;
// adiabats between sampled points must stay inside the model domain, which a
// full-domain sample cannot guarantee.
std::vector<thermo::StatePoint> sample_points(const thermo::SimpleSystemModel& m,
                                              const thermo::ConfigDoc& doc, std::uint64_t seed,
                                              int count) {
  auto window = [&](const std::string& key, double lo, double hi) {
    if (const thermo::ConfigSection* s = doc.find("entropy"))
      if (const std::string* v = s->get(key)) {
        std::istringstream is(*v);
        double a, b;
        if (is >> a >> b) return std::array<double, 2>{a, b};
      }
    return std::array<double, 2>{lo + 0.25 * (hi - lo), hi - 0.25 * (hi - lo)};
  };
  auto uw = window("grid.u", m.u_bounds[0], m.u_bounds[1]);
  auto vw = window("grid.v", m.v_bounds[0][0], m.v_bounds[0][1]);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> du(uw[0], uw[1]);
  std::uniform_real_distribution<double> dv(vw[0], vw[1]);
  std::vector<thermo::StatePoint> pts;
  for (int i = 0; i < count; ++i) pts.push_back({du(rng), {dv(rng)}});
  return pts;
}

int run_check_axioms(const Common& c) {
  std::string text = read_file(c.config);
  thermo::Report rep;
  if (looks_like_sections(text)) {
    thermo::ConfigDoc doc = thermo::parse_config(text);
    auto systems = thermo::load_systems(doc);
    if (systems.empty()) throw thermo::ParseError("config declares no systems", 1, 1);
    const thermo::SimpleSystemModel& m = systems.front();
    // The closed-form entropy answers every query directly; the geometric
    // oracle (which integrates an adiabat per comparison) is the fallback.
    std::unique_ptr<thermo::AccessOracle> oracle;
    if (m.entropy) {
      auto analytic = std::make_unique<thermo::AnalyticEntropyOracle>();
      analytic->register_space(m.name,
                               [&m](const thermo::StateRef& s) { return m.entropy(m.state(s)); });
      oracle = std::move(analytic);
    } else {
      oracle = thermo::oracle_from_model(m);
    }

    auto pts = sample_points(m, doc, c.seed, 40);
    std::vector<thermo::CompoundState> sample;
    for (int i = 0; i < 16; ++i) sample.push_back(thermo::CompoundState::single(m.ref(pts[i])));
    for (int i = 16; i < 24; ++i)
      sample.push_back(thermo::CompoundState(
          {{0.5, m.ref(pts[i])}, {0.5, m.ref(pts[39 - (i - 16)])}}));
    for (const auto& r : thermo::check_axioms(*oracle, sample).results) rep.add(r);
    for (const auto& r : thermo::check_CH(*oracle, m.name, sample).results) rep.add(r);
    std::vector<thermo::CompoundState> triples;
    for (int i = 0; i < 24; ++i) triples.push_back(thermo::CompoundState::single(m.ref(pts[i])));
    for (const auto& r : thermo::check_cancellation(*oracle, triples).results) rep.add(r);
  } else {
    thermo::FiniteRelation rel = thermo::load_relation(text);
    for (const auto& r : thermo::check_axioms(rel).results) rep.add(r);
    for (const auto& r : thermo::check_CH(rel).results) rep.add(r);
    for (const auto& r : thermo::check_cancellation(rel).results) rep.add(r);
  }
  auto os = open_output(c, "report.csv");
  thermo::write_csv(os, meta_for(c, text), {"check", "verdict", "witness"}, report_rows(rep));
  return verdict_exit(rep, c.strict);
}

int run_build_entropy(const Common& c) {
  std::string text = read_file(c.config);
  thermo::ConfigDoc doc = thermo::parse_config(text);
  auto systems = thermo::load_systems(doc);
  if (systems.empty()) throw thermo::ParseError("config declares no systems", 1, 1);
  const thermo::SimpleSystemModel& m = systems.front();
  auto oracle = thermo::oracle_from_model(m);

  auto axis = [&](const std::string& key, std::array<double, 3> def) {
    if (const thermo::ConfigSection* s = doc.find("entropy"))
      if (const std::string* v = s->get(key)) {
        std::istringstream is(*v);
        if (!(is >> def[0] >> def[1] >> def[2]))
          throw thermo::ParseError(key + " needs 'lo hi count'", s->line, 1);
      }
    return def;
  };
  auto point = [&](const std::string& key, thermo::StatePoint def) {
    if (const thermo::ConfigSection* s = doc.find("entropy"))
      if (const std::string* v = s->get(key)) {
        std::istringstream is(*v);
        if (!(is >> def.U >> def.V[0]))
          throw thermo::ParseError(key + " needs 'U V'", s->line, 1);
      }
    return def;
  };
  auto gu = axis("grid.u", {1.0, 4.0, 10.0});
  auto gv = axis("grid.v", {1.0, 4.0, 10.0});
  thermo::StatePoint p0 = point("x0", {gu[0], {gv[0]}});
  thermo::StatePoint p1 = point("x1", {gu[1], {gv[1]}});
  if (m.entropy && m.entropy(p0) > m.entropy(p1)) std::swap(p0, p1);
  thermo::StateRef x0 = m.ref(p0), x1 = m.ref(p1);

  std::map<thermo::StateRef, double> chart, analytic;
  std::vector<thermo::StateRef> refs;
  std::vector<std::vector<std::string>> rows;
  int nu = static_cast<int>(gu[2]), nv = static_cast<int>(gv[2]);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      double u = nu == 1 ? gu[0] : gu[0] + i * (gu[1] - gu[0]) / (nu - 1);
      double v = nv == 1 ? gv[0] : gv[0] + j * (gv[1] - gv[0]) / (nv - 1);
      thermo::StatePoint p{u, {v}};
      if (!m.contains(p)) {
        std::cerr << "grid point outside the model domain: U=" << u << " V=" << v << "\n";
        return 1;
      }
      double lambda = thermo::construct_entropy(*oracle, x0, x1, m.ref(p), c.tol);
      thermo::StateRef r = m.ref(p);
      refs.push_back(r);
      chart[r] = lambda;
      if (m.entropy) analytic[r] = m.entropy(p);
      rows.push_back({thermo::format_real(u), thermo::format_real(v),
                      thermo::format_real(lambda)});
    }
  auto os = open_output(c, "entropy.csv");
  thermo::write_csv(os, meta_for(c, text), {"U", "V", "lambda"}, rows);
  if (m.entropy && refs.size() >= 2) {
    thermo::AffineFit fit = thermo::affine_fit(chart, analytic, refs);
    os << "# affine-fit: a=" << thermo::format_real(fit.a)
       << " B=" << thermo::format_real(fit.B)
       << " residual=" << thermo::format_real(fit.residual) << "\n";
  }
  return 0;
}

int run_adiabat(const Common& c) {
  std::string text = read_file(c.config);
  thermo::ConfigDoc doc = thermo::parse_config(text);
  auto systems = thermo::load_systems(doc);
  if (systems.empty()) throw thermo::ParseError("config declares no systems", 1, 1);
  const thermo::SimpleSystemModel& m = systems.front();

  thermo::StatePoint seed{1.0, {1.0}};
  double target = 8.0;
  if (const thermo::ConfigSection* s = doc.find("adiabat")) {
    if (const std::string* v = s->get("seed")) {
      std::istringstream is(*v);
      if (!(is >> seed.U >> seed.V[0]))
        throw thermo::ParseError("seed needs 'U V'", s->line, 1);
    }
    if (const std::string* v = s->get("target")) {
      std::istringstream is(*v);
      if (!(is >> target)) throw thermo::ParseError("target needs a number", s->line, 1);
    }
  }
  thermo::AdiabatCurve curve = thermo::integrate_adiabat(m, seed, {target});
  std::vector<std::vector<std::string>> rows;
  for (const auto& [v, u] : curve.samples)
    rows.push_back({thermo::format_real(v[0]), thermo::format_real(u)});
  auto os = open_output(c, "adiabat.csv");
  thermo::write_csv(os, meta_for(c, text), {"V", "u"}, rows);
  return 0;
}

int run_split(const Common& c) {
  std::string text = read_file(c.config);
  thermo::ConfigDoc doc = thermo::parse_config(text);
  auto systems = thermo::load_systems(doc);
  if (systems.empty()) throw thermo::ParseError("config declares no systems", 1, 1);
  const thermo::SimpleSystemModel& left = systems.front();
  const thermo::SimpleSystemModel& right = systems.size() > 1 ? systems[1] : systems.front();

  double U = left.u_bounds[0] + right.u_bounds[0] + 1.0, v1 = 1.0, v2 = 1.0;
  if (const thermo::ConfigSection* s = doc.find("split")) {
    if (const std::string* v = s->get("u")) U = std::stod(*v);
    if (const std::string* v = s->get("v1")) v1 = std::stod(*v);
    if (const std::string* v = s->get("v2")) v2 = std::stod(*v);
  }
  auto S1 = [&](const thermo::StatePoint& p) { return left.entropy(p); };
  auto S2 = [&](const thermo::StatePoint& p) { return right.entropy(p); };
  thermo::ThermalJoinPoint joined{U, {v1}, {v2}};
  thermo::SplitResult r = thermo::thermal_split(joined, left, right, S1, S2);

  double wlo = std::max(left.u_bounds[0], U - right.u_bounds[1]);
  double whi = std::min(left.u_bounds[1], U - right.u_bounds[0]);
  double margin = 1e-4 * (whi - wlo);
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < 128; ++i) {
    double w = (wlo + margin) + i * (whi - wlo - 2 * margin) / 127;
    rows.push_back({thermo::format_real(w),
                    thermo::format_real(S1({w, {v1}}) + S2({U - w, {v2}}))});
  }
  auto os = open_output(c, "split.csv");
  thermo::write_csv(os, meta_for(c, text), {"W", "S_total"}, rows);
  os << "# maximizer: W=" << thermo::format_real(r.maximizer_energy)
     << " S_total=" << thermo::format_real(r.total_entropy)
     << (r.grid_fallback ? " (grid fallback)" : "") << "\n";
  return 0;
}

int run_carnot(const Common& c) {
  std::string text = read_file(c.config);
  thermo::ConfigDoc doc = thermo::parse_config(text);
  const thermo::ConfigSection* s = doc.find("carnot");
  if (!s) throw thermo::ParseError("config has no [carnot] section", 1, 1);
  auto val = [&](const std::string& key) {
    const std::string* v = s->get(key);
    if (!v) throw thermo::ParseError("[carnot] is missing '" + key + "'", s->line, 1);
    return std::stod(*v);
  };
  double q1 = val("q1"), t1 = val("t1"), q0 = val("q0"), t0 = val("t0");
  thermo::CarnotResult r = thermo::carnot_check(q1, t1, q0, t0);
  auto os = open_output(c, "carnot.csv");
  thermo::write_csv(os, meta_for(c, text),
                    {"q1", "t1", "q0", "t0", "allowed", "eta", "eta_carnot"},
                    {{thermo::format_real(q1), thermo::format_real(t1), thermo::format_real(q0),
                      thermo::format_real(t0), r.allowed ? "true" : "false",
                      thermo::format_real(r.eta), thermo::format_real(r.eta_carnot)}});
  return r.allowed ? 0 : 1;
}

int run_calibrate(const Common& c) {
  std::string text = read_file(c.config);
  thermo::ConfigDoc doc = thermo::parse_config(text);
  thermo::ReactionNetwork net = thermo::load_network(doc);

  auto fmt_ext = [](double x) {
    if (std::isinf(x)) return std::string(x > 0 ? "inf" : "-inf");
    return thermo::format_real(x);
  };
  std::vector<std::vector<std::string>> pair_rows;
  try {
    for (const auto& a : net.nodes())
      for (const auto& b : net.nodes()) {
        if (a.id.label == b.id.label) continue;
        pair_rows.push_back({a.id.label + "->" + b.id.label,
                             fmt_ext(thermo::compute_D(net, a.id.label, b.id.label)),
                             fmt_ext(thermo::compute_E(net, a.id.label, b.id.label)),
                             fmt_ext(thermo::compute_F(net, a.id.label, b.id.label))});
      }
  } catch (const thermo::NegativeCycleError& e) {
    std::cerr << "negative cycle:";
    for (const auto& n : e.cycle) std::cerr << " " << n;
    std::cerr << "\n";
    return 1;
  }
  {
    auto os = open_output(c, "pairs.csv");
    thermo::write_csv(os, meta_for(c, text), {"pair", "D", "E", "F"}, pair_rows);
  }

  thermo::CalibrationSolution sol = thermo::solve_constants(net);
  if (sol.status == thermo::CalibrationSolution::Status::Infeasible) {
    std::cerr << "infeasible constraint system; violating cycle:";
    for (const auto& n : sol.violating_cycle) std::cerr << " " << n;
    std::cerr << "\n";
    return 1;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& n : net.nodes()) {
    if (!n.factors.empty()) continue;
    double b = sol.B.count(n.id.label) ? sol.B.at(n.id.label) : 0.0;
    double lo = b, hi = b;
    if (auto it = sol.intervals.find(n.id.label); it != sol.intervals.end()) {
      lo = it->second.first;
      hi = it->second.second;
    }
    rows.push_back({n.id.label, thermo::format_real(b), fmt_ext(lo), fmt_ext(hi)});
  }
  auto os = open_output(c, "constants.csv");
  thermo::write_csv(os, meta_for(c, text), {"node", "B", "interval_lo", "interval_hi"}, rows);
  return 0;
}

int run_report(const Common& c) {
  std::string text = read_file(c.config);
  int worst = 0;
  if (looks_like_sections(text)) {
    thermo::ConfigDoc doc = thermo::parse_config(text);
    if (!doc.with_prefix("system.").empty()) worst = std::max(worst, run_check_axioms(c));
    if (!doc.with_prefix("node.").empty()) worst = std::max(worst, run_calibrate(c));
    if (doc.find("carnot")) worst = std::max(worst, run_carnot(c));
  } else {
    worst = run_check_axioms(c);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy construction and verification toolkit"};
  app.require_subcommand(1);

  Common c;
  std::function<int()> action;
  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const Common&);
  };
  const Cmd cmds[] = {
      {"check-axioms", "run order-axiom checks over a model or relation file", run_check_axioms},
      {"build-entropy", "construct the entropy chart over a grid", run_build_entropy},
      {"adiabat", "integrate an adiabat curve", run_adiabat},
      {"split", "scan and maximize a thermal split", run_split},
      {"carnot", "audit a heat-engine cycle", run_carnot},
      {"calibrate", "compute deficit tables and additive constants", run_calibrate},
      {"report", "run every check applicable to the config", run_report},
  };
  for (const Cmd& cmd : cmds) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub, c);
    int (*fn)(const Common&) = cmd.fn;
    sub->callback([&action, fn, &c]() { action = [fn, &c]() { return fn(c); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const thermo::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    if (msg.rfind("cannot open", 0) == 0) {
      std::cerr << msg << "\n";
      return 2;
    }
    std::cerr << "error: " << msg << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
