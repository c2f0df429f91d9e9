#include "thermo/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace thermo {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

double parse_real(const std::string& s, int line) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'", line, 1);
  }
  if (pos != s.size()) throw ParseError("trailing characters after number '" + s + "'", line, 1);
  return v;
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ParseError("expected a boolean, got '" + s + "'", line, 1);
}

}  // namespace

const std::string* ConfigSection::get(const std::string& key) const {
  for (const ConfigEntry& e : entries)
    if (e.key == key) return &e.value;
  return nullptr;
}

std::string ConfigSection::get_or(const std::string& key, const std::string& fallback) const {
  const std::string* v = get(key);
  return v ? *v : fallback;
}

std::vector<std::string> ConfigSection::get_all(const std::string& key) const {
  std::vector<std::string> out;
  for (const ConfigEntry& e : entries)
    if (e.key == key) out.push_back(e.value);
  return out;
}

const ConfigSection* ConfigDoc::find(const std::string& name) const {
  for (const ConfigSection& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<const ConfigSection*> ConfigDoc::with_prefix(const std::string& prefix) const {
  std::vector<const ConfigSection*> out;
  for (const ConfigSection& s : sections)
    if (s.name.rfind(prefix, 0) == 0) out.push_back(&s);
  return out;
}

ConfigDoc parse_config(const std::string& text) {
  ConfigDoc doc;
  doc.source = text;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = raw;
    if (std::size_t h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header",
                         lineno, static_cast<int>(raw.find('[')) + 1);
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ParseError("empty section name", lineno, 1);
      doc.sections.push_back({name, {}, lineno});
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", lineno,
                       static_cast<int>(raw.find_first_not_of(" \t")) + 1);
    if (doc.sections.empty())
      throw ParseError("entry outside any section", lineno, 1);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno, 1);
    doc.sections.back().entries.push_back({key, value, lineno});
  }
  return doc;
}

ConfigDoc load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<SimpleSystemModel> load_systems(const ConfigDoc& doc) {
  std::vector<SimpleSystemModel> out;
  for (const ConfigSection* sec : doc.with_prefix("system.")) {
    std::string name = sec->name.substr(std::string("system.").size());
    std::string kind = sec->get_or("kind", "");
    double amount = sec->get("amount") ? parse_real(*sec->get("amount"), sec->line) : 1.0;
    SimpleSystemModel m;
    if (kind == "ideal-gas")
      m = make_ideal_gas(amount, name);
    else if (kind == "van-der-waals")
      m = make_van_der_waals(name);
    else
      throw ParseError("unknown system kind '" + kind + "' in [" + sec->name + "]", sec->line, 1);
    auto set_range = [&](const std::string& key, std::array<double, 2>& range) {
      const std::string* v = sec->get(key);
      if (!v) return;
      std::vector<std::string> toks = split_ws(*v);
      if (toks.size() != 2)
        throw ParseError(key + " needs two numbers", sec->line, 1);
      range = {parse_real(toks[0], sec->line), parse_real(toks[1], sec->line)};
      if (!(range[0] < range[1])) throw ParseError(key + " range is empty", sec->line, 1);
    };
    set_range("domain.u", m.u_bounds);
    for (auto& vb : m.v_bounds) set_range("domain.v", vb);
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

std::vector<std::pair<double, std::string>> parse_factors(const std::string& s, int line) {
  std::vector<std::pair<double, std::string>> out;
  std::string term;
  std::istringstream is(s);
  while (std::getline(is, term, '+')) {
    term = trim(term);
    if (term.empty()) throw ParseError("empty factor term", line, 1);
    std::size_t star = term.find('*');
    if (star == std::string::npos)
      out.push_back({1.0, term});
    else
      out.push_back({parse_real(trim(term.substr(0, star)), line), trim(term.substr(star + 1))});
  }
  return out;
}

}  // namespace

ReactionNetwork load_network(const ConfigDoc& doc) {
  ReactionNetwork net;
  for (const ConfigSection* sec : doc.with_prefix("node.")) {
    SpaceNode n;
    n.id = {sec->name.substr(std::string("node.").size())};
    if (const std::string* comp = sec->get("composition"))
      for (const std::string& tok : split_ws(*comp))
        n.composition.push_back(parse_real(tok, sec->line));
    if (const std::string* el = sec->get("element")) n.element = parse_bool(*el, sec->line);
    if (const std::string* f = sec->get("factors")) {
      n.factors = parse_factors(*f, sec->line);
      n.primitive = false;
    }
    std::vector<std::string> ent = split_ws(sec->get_or("entropy", "coord"));
    if (ent.empty() || ent[0] != "coord" || ent.size() > 2)
      throw ParseError("entropy must be 'coord [offset]'", sec->line, 1);
    double offset = ent.size() == 2 ? parse_real(ent[1], sec->line) : 0.0;
    n.entropy = [offset](const StateRef& s) { return s.coords.at(0) + offset; };
    net.add_node(std::move(n));
  }
  for (const ConfigSection* sec : doc.with_prefix("edge.")) {
    std::string rest = sec->name.substr(std::string("edge.").size());
    std::size_t dot = rest.find('.');
    if (dot == std::string::npos)
      throw ParseError("edge section must be [edge.<from>.<to>]", sec->line, 1);
    std::string from = rest.substr(0, dot), to = rest.substr(dot + 1);
    if (const std::string* d = sec->get("D")) net.set_direct_D(from, to, parse_real(*d, sec->line));
    for (const std::string& w : sec->get_all("witness")) {
      std::size_t arrow = w.find("->");
      if (arrow == std::string::npos)
        throw ParseError("witness must be '<from-coord> -> <to-coord>'", sec->line, 1);
      double a = parse_real(trim(w.substr(0, arrow)), sec->line);
      double b = parse_real(trim(w.substr(arrow + 2)), sec->line);
      net.add_edge_witness(from, to, {StateRef::at({from}, {a}), StateRef::at({to}, {b}), ""});
    }
  }
  if (const ConfigSection* cats = doc.find("catalysts"))
    for (const std::string& id : cats->get_all("id")) net.add_catalyst(id);
  return net;
}

namespace {

struct RelTerm {
  Rational scale;
  std::string state;
};

Rational parse_scale(const std::string& s, int line) {
  std::size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw ParseError("expected a rational scale, got '" + s + "'", line, 1);
  }
}

std::vector<RelTerm> parse_side(const std::string& s, int line) {
  std::vector<RelTerm> out;
  std::string term;
  std::istringstream is(s);
  while (std::getline(is, term, '+')) {
    term = trim(term);
    if (term.empty()) throw ParseError("empty term in fact", line, 1);
    std::size_t star = term.find('*');
    if (star == std::string::npos)
      out.push_back({Rational(1), term});
    else
      out.push_back({parse_scale(trim(term.substr(0, star)), line), trim(term.substr(star + 1))});
  }
  if (out.empty()) throw ParseError("fact side has no terms", line, 1);
  return out;
}

}  // namespace

FiniteRelation load_relation(const std::string& text, const std::string& space_label) {
  struct Fact {
    std::vector<RelTerm> lhs, rhs;
  };
  std::vector<Fact> facts, removes;
  std::vector<std::string> state_names;
  int denominator = 0;
  Rational max_mass(2);
  bool exhaustive = false;

  auto note_states = [&](const std::vector<RelTerm>& side) {
    for (const RelTerm& t : side)
      if (std::find(state_names.begin(), state_names.end(), t.state) == state_names.end())
        state_names.push_back(t.state);
  };

  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = raw;
    if (std::size_t h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '@') {
      std::vector<std::string> toks = split_ws(line);
      if (toks[0] == "@exhaustive") {
        exhaustive = true;
      } else if (toks[0] == "@denominator" && toks.size() == 2) {
        denominator = static_cast<int>(parse_real(toks[1], lineno));
      } else if (toks[0] == "@max-mass" && toks.size() == 2) {
        max_mass = parse_scale(toks[1], lineno);
      } else if (toks[0] == "@remove") {
        std::string body = trim(line.substr(std::string("@remove").size()));
        std::size_t arrow = body.find("->");
        if (arrow == std::string::npos) throw ParseError("@remove needs a fact", lineno, 1);
        Fact f{parse_side(body.substr(0, arrow), lineno), parse_side(body.substr(arrow + 2), lineno)};
        note_states(f.lhs);
        note_states(f.rhs);
        removes.push_back(std::move(f));
      } else {
        throw ParseError("unknown directive '" + toks[0] + "'", lineno, 1);
      }
      continue;
    }
    std::size_t arrow = line.find("->");
    if (arrow == std::string::npos)
      throw ParseError("fact needs '->'", lineno, static_cast<int>(raw.size()) + 1);
    Fact f{parse_side(line.substr(0, arrow), lineno), parse_side(line.substr(arrow + 2), lineno)};
    note_states(f.lhs);
    note_states(f.rhs);
    facts.push_back(std::move(f));
  }

  if (denominator == 0) {
    long long l = 1;
    for (const auto& group : {facts, removes})
      for (const Fact& f : group)
        for (const auto& side : {f.lhs, f.rhs})
          for (const RelTerm& t : side) l = std::lcm(l, t.scale.den());
    denominator = static_cast<int>(l);
  }

  std::vector<StateRef> states;
  std::map<std::string, int> index;
  for (const std::string& s : state_names) {
    index[s] = static_cast<int>(states.size());
    states.push_back(StateRef::named({space_label}, s));
  }
  FiniteRelation::Options opt;
  opt.max_denominator = denominator;
  opt.max_mass = max_mass;
  opt.exhaustive = exhaustive;
  FiniteRelation rel(states, uniform_scale_grid(denominator, max_mass), opt);

  auto to_grid = [&](const std::vector<RelTerm>& side) {
    std::vector<std::pair<Rational, int>> parts;
    for (const RelTerm& t : side) parts.push_back({t.scale, index.at(t.state)});
    return GridCompound::make(std::move(parts));
  };
  for (const Fact& f : facts) rel.add_fact(to_grid(f.lhs), to_grid(f.rhs));
  rel.close();
  for (const Fact& f : removes) rel.remove_fact(to_grid(f.lhs), to_grid(f.rhs));
  return rel;
}

FiniteRelation load_relation_file(const std::string& path, const std::string& space_label) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open relation file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_relation(buf.str(), space_label);
}

std::string format_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::uint64_t fnv1a_hash(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_csv(std::ostream& os, const CsvMeta& meta, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  os << "# tool-version: " << meta.tool_version << "\n";
  os << "# config-hash: " << meta.config_hash << "\n";
  os << "# seed: " << meta.seed << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string cell = row[i];
      std::replace(cell.begin(), cell.end(), ',', ';');
      os << (i ? "," : "") << cell;
    }
    os << "\n";
  }
}

}  // namespace thermo
