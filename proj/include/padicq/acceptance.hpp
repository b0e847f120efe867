#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace padicq::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double deviation = 0.0;  // worst measured deviation (criterion-specific meaning)
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

/// Criteria 1-14. `quick` keeps only the fast closed-form checks
/// (uniform-ball probabilities, the motivation average, the spectrum law).
std::vector<CriterionResult> run_suite(bool quick);

/// One line per criterion: PASS/FAIL, id, name, deviation, tolerance, detail.
void print_table(std::ostream& os, const std::vector<CriterionResult>& results);

/// Pinned regression anchors.
inline constexpr double kCommutatorNorm = 1.1996018714650754;  // p=2, N=M=2, h=1
inline constexpr double kConsciousnessValue = 4.4343454181635478;  // mean over t in [0,4], p=2, N=M=1

}  // namespace padicq::acceptance
