#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "afdm/effchan.hpp"
#include "afdm/linalg.hpp"
#include "afdm/params.hpp"

namespace afdm {

struct DetectionResult {
  ComplexVector symbols;
  std::vector<std::size_t> indices;  // constellation index per entry
  /// ML: minimal squared distance. MMSE: residual norm ||y - H x_hat||.
  double metric = 0.0;
};

inline constexpr std::uint64_t kDefaultMlBudget = std::uint64_t{1} << 20;

/// Exhaustive maximum-likelihood search over all Q^N symbol vectors.
/// Ties keep the lexicographically smallest index vector. Throws
/// BudgetExceeded when Q^N exceeds `budget`.
DetectionResult detect_ml(const ComplexVector& y, const ComplexMatrix& h_eff, Constellation c,
                          std::uint64_t budget = kDefaultMlBudget);
DetectionResult detect_ml(const ComplexVector& y, const EffectiveChannel& e, Constellation c,
                          std::uint64_t budget = kDefaultMlBudget);

/// Linear MMSE estimate H^H (H H^H + n0 I)^{-1} y for unit-energy symbols,
/// via Cholesky on the Hermitian positive definite Gram matrix.
ComplexVector mmse_estimate(const ComplexVector& y, const ComplexMatrix& h_eff, double n0);

/// mmse_estimate followed by per-entry nearest-point decisions.
DetectionResult detect_mmse(const ComplexVector& y, const ComplexMatrix& h_eff, double n0, Constellation c);
DetectionResult detect_mmse(const ComplexVector& y, const EffectiveChannel& e, double n0, Constellation c);

}  // namespace afdm
