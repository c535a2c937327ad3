#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "afdm/linalg.hpp"

namespace afdm {

/// Precomputed plan for an unnormalized DFT of arbitrary length.
///
/// forward() evaluates X[k] = sum_n x[n] exp(-j 2 pi k n / N); inverse() uses
/// the conjugate kernel, also without scaling. Sizes whose prime factors are
/// all <= 31 go through recursive mixed-radix Cooley-Tukey; anything with a
/// larger prime factor is routed through Bluestein's chirp-z convolution on a
/// power-of-two grid. A plan is immutable after construction and may be used
/// from several threads at once.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return n_; }

  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  void transform(std::span<const cplx> in, std::span<cplx> out, bool inverse) const;
  void mixed_radix(const cplx* in, cplx* out, std::size_t n, std::size_t stride,
                   std::size_t level, bool inverse) const;
  void bluestein(std::span<const cplx> in, std::span<cplx> out, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<cplx> twiddles_;  // exp(-j 2 pi i / n), i = 0..n-1

  // Bluestein state, only populated for sizes with a large prime factor.
  std::vector<cplx> chirp_;       // exp(-j pi k^2 / n)
  std::vector<cplx> kernel_fft_;  // FFT of the conjugate chirp on the padded grid
  std::unique_ptr<FftPlan> padded_;
};

}  // namespace afdm
