#ifndef THERMO_REPORT_HPP
#define THERMO_REPORT_HPP

#include <ostream>
#include <string>
#include <vector>

namespace thermo {

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    default: return "INCONCLUSIVE";
  }
}

struct CheckResult {
  std::string check;
  Verdict verdict = Verdict::Pass;
  std::string witness;  // empty on pass
};

struct Report {
  std::vector<CheckResult> results;

  void add(std::string check, Verdict v, std::string witness = "") {
    results.push_back({std::move(check), v, std::move(witness)});
  }
  void add(CheckResult r) { results.push_back(std::move(r)); }
  bool all_passed() const {
    for (const auto& r : results)
      if (r.verdict != Verdict::Pass) return false;
    return true;
  }
  bool has_failure() const {
    for (const auto& r : results)
      if (r.verdict == Verdict::Fail) return true;
    return false;
  }
  bool has_inconclusive() const {
    for (const auto& r : results)
      if (r.verdict == Verdict::Inconclusive) return true;
    return false;
  }
  const CheckResult* find(const std::string& check) const {
    for (const auto& r : results)
      if (r.check == check) return &r;
    return nullptr;
  }

  void write_csv(std::ostream& os) const {
    os << "check,verdict,witness\n";
    for (const auto& r : results) {
      std::string w = r.witness;
      for (auto& ch : w)
        if (ch == ',') ch = ';';
      os << r.check << "," << to_string(r.verdict) << "," << w << "\n";
    }
  }
};

}  // namespace thermo

#endif
