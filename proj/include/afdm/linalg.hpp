#pragma once

#include <complex>
#include <cstddef>
#include <numbers>

#include <Eigen/Dense>

namespace afdm {

using cplx = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// exp(-j 2 pi t) with t first reduced to [-0.5, 0.5) so large arguments keep full precision.
inline cplx unit_phasor_neg(double turns) {
  const double reduced = turns - std::nearbyint(turns);
  return std::polar(1.0, -kTwoPi * reduced);
}

inline bool all_finite(const ComplexVector& v) { return v.allFinite(); }

/// Spectral numerical rank: singular values above max(rows, cols) * eps * sigma_max.
struct RankInfo {
  std::size_t rank = 0;
  double largest = 0.0;
  /// Smallest singular value counted as nonzero (0 when rank is 0).
  double smallest_nonzero = 0.0;
  Eigen::VectorXd singular_values;
};

RankInfo numerical_rank(const ComplexMatrix& m);

}  // namespace afdm
