#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qdibp/dense_state.hpp"

#include "json.hpp"

namespace qdibp {

/// Reference transform evaluated by direct double summation, O(4^p).
/// Deliberately independent of the butterfly implementation it checks.
std::vector<std::complex<double>> direct_wht(std::span<const std::complex<double>> amps);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  bool full = false;
  std::uint64_t seed = 1;
  int dense_cap = DenseState::kDefaultCap;
};

/// Runs the per-module invariant suites. The fast suite uses randomized
/// budgets; the full suite adds the exhaustive small-instance checks and the
/// dense-versus-structured equivalence run.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

nlohmann::json verification_report(const std::vector<CheckResult>& results,
                                   const VerifyOptions& options);

}  // namespace qdibp
