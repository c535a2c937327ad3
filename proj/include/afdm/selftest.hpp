#pragma once

#include <string>
#include <vector>

namespace afdm {

struct SelftestOptions {
  /// Only suites whose name contains this substring run. Empty runs all.
  std::string filter;
  /// Fault injection: build the conjugation reference with the DFT kernel
  /// sign flipped. The closed-form suite must then fail.
  bool flip_dft_sign = false;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant suites: unitarity, round-trip, model-equivalence, closed-form.
std::vector<SuiteResult> run_selftest(const SelftestOptions& options);

std::vector<std::string> selftest_suite_names();

}  // namespace afdm
