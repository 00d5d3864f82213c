#pragma once

#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace kbstab {

/// One analytic-oracle or property check. Passes when lo <= value <= hi.
struct Check {
  std::string group;  // module name
  std::string name;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::function<double()> run;

  std::string id() const { return group + "." + name; }
};

/// The full suite, in a fixed order.
const std::vector<Check>& verify_checks();

struct CheckResult {
  std::string id;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool passed = false;
  std::string error;  // exception text when the check threw
  double seconds = 0.0;
};

struct VerifyOptions {
  /// Substring of "group.name"; empty runs everything.
  std::string filter;
  /// Test hook: ids whose acceptance interval is replaced by an empty one.
  std::vector<std::string> corrupt;
};

std::vector<CheckResult> run_checks(const VerifyOptions& options);

/// One `PASS|FAIL id value [lo, hi]` line per result and a count line.
void print_report(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace kbstab
