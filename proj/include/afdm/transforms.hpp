#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "afdm/fft.hpp"
#include "afdm/linalg.hpp"

namespace afdm {

/// Parameters of the discrete affine Fourier transform A = L(c2) F L(c1),
/// where L(c) = diag(exp(-j 2 pi c k^2)) and F is the unitary DFT.
struct DaftParams {
  std::size_t n = 0;
  double c1 = 0.0;
  double c2 = 0.0;

  void validate() const;
};

/// Diagonal chirp matrix with entries exp(-j 2 pi c k^2), k = 0..n-1.
ComplexMatrix chirp_diag(std::size_t n, double c);

/// The chirp diagonal as a vector.
ComplexVector chirp_vector(std::size_t n, double c);

/// Unitary DFT matrix with entries exp(-j 2 pi m k / n) / sqrt(n).
ComplexMatrix dft_matrix(std::size_t n);

ComplexVector daft(const ComplexVector& x, const DaftParams& p);
ComplexVector idaft(const ComplexVector& y, const DaftParams& p);

/// Dense A = L(c2) F L(c1); unitary up to rounding.
ComplexMatrix daft_matrix(const DaftParams& p);

/// Reusable DAFT engine: chirp tables and FFT plan are computed once.
/// Const member functions are safe to call concurrently.
class Daft {
 public:
  explicit Daft(const DaftParams& p);

  const DaftParams& params() const { return params_; }

  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

  ComplexVector forward(const ComplexVector& x) const;
  ComplexVector inverse(const ComplexVector& y) const;

 private:
  DaftParams params_;
  FftPlan plan_;
  std::vector<cplx> chirp1_;
  std::vector<cplx> chirp2_;
  double scale_;
};

}  // namespace afdm
