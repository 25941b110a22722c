#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace focf {

/// One verification criterion of the built-in suite. `measured` and
/// `threshold` are human-readable; `pass` is the machine verdict.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
  std::string threshold;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::ostream* log = nullptr;  // per-criterion progress lines
  int only = 0;                 // run a single criterion (0 = all)
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

/// Render the criterion/measured/threshold/verdict table.
std::string format_acceptance_table(const std::vector<CriterionResult>& results);

}  // namespace focf
