#ifndef THERMO_CONFIG_HPP
#define THERMO_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermo/calibration.hpp"
#include "thermo/finite_relation.hpp"
#include "thermo/simple_system.hpp"

namespace thermo {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line(line),
        column(column) {}
  int line = 0;
  int column = 0;
};

// Structured text document: `[section]` headers followed by `key = value`
// lines; `#` starts a comment; repeated keys keep their order.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  std::vector<ConfigEntry> entries;
  int line = 0;

  const std::string* get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::vector<std::string> get_all(const std::string& key) const;
};

struct ConfigDoc {
  std::vector<ConfigSection> sections;
  std::string source;  // original text, hashed into reports

  const ConfigSection* find(const std::string& name) const;
  std::vector<const ConfigSection*> with_prefix(const std::string& prefix) const;
};

ConfigDoc parse_config(const std::string& text);
// Throws std::runtime_error when the file cannot be read.
ConfigDoc load_config_file(const std::string& path);

// Builds the models declared in `[system.<name>]` sections. Keys: `kind`
// (ideal-gas | van-der-waals), `amount`, `domain.u = <lo> <hi>`,
// `domain.v = <lo> <hi>`.
std::vector<SimpleSystemModel> load_systems(const ConfigDoc& doc);

// Builds a reaction network from `[node.<id>]` sections (`composition`,
// `element`, `factors = <t>*<id> + ...`, `entropy = coord [offset]`),
// `[edge.<from>.<to>]` sections (`D = <value>` or repeated
// `witness = <from-coord> -> <to-coord>` lines), and a `[catalysts]` section
// of repeated `id = <node>` lines.
ReactionNetwork load_network(const ConfigDoc& doc);

// Line-oriented accessibility facts: `<scale>*<state> [+ ...] -> ...` with
// rational or integer scales, `#` comments, and directives `@denominator <d>`,
// `@max-mass <r>`, `@exhaustive`, and `@remove <fact>` (applied after
// closure, for planting violations).
FiniteRelation load_relation(const std::string& text, const std::string& space_label = "rel");
FiniteRelation load_relation_file(const std::string& path, const std::string& space_label = "rel");

// Deterministic CSV output: `#`-prefixed metadata header (tool version,
// config hash, seed) and reals at 17 significant digits.
struct CsvMeta {
  std::string tool_version;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

std::string format_real(double x);
std::uint64_t fnv1a_hash(const std::string& data);
void write_csv(std::ostream& os, const CsvMeta& meta, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace thermo

#endif
