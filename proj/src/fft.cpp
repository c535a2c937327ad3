#include "afdm/fft.hpp"

#include <algorithm>

#include "afdm/error.hpp"

namespace afdm {
namespace {

constexpr std::size_t kMaxDirectRadix = 31;

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> f;
  // Radix 4 first: fewer passes for power-of-two sizes.
  while (n % 4 == 0) {
    f.push_back(4);
    n /= 4;
  }
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      f.push_back(p);
      n /= p;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  require(n >= 1, "FFT length must be positive");
  twiddles_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    twiddles_[i] = std::polar(1.0, -kTwoPi * static_cast<double>(i) / static_cast<double>(n));
  }
  factors_ = factorize(n);
  const bool needs_bluestein =
      std::any_of(factors_.begin(), factors_.end(), [](std::size_t p) { return p > kMaxDirectRadix; });
  if (!needs_bluestein) return;

  factors_.clear();
  const std::size_t m = next_pow2(2 * n - 1);
  padded_ = std::make_unique<FftPlan>(m);
  chirp_.resize(n);
  const std::size_t two_n = 2 * n;
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small.
    const std::size_t k2 = (k * k) % two_n;
    chirp_[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n));
  }
  std::vector<cplx> kernel(m, cplx{0.0, 0.0});
  kernel[0] = std::conj(chirp_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    kernel[k] = std::conj(chirp_[k]);
    kernel[m - k] = std::conj(chirp_[k]);
  }
  kernel_fft_.resize(m);
  padded_->forward(kernel, kernel_fft_);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::forward(std::span<const cplx> in, std::span<cplx> out) const { transform(in, out, false); }

void FftPlan::inverse(std::span<const cplx> in, std::span<cplx> out) const { transform(in, out, true); }

void FftPlan::transform(std::span<const cplx> in, std::span<cplx> out, bool inverse) const {
  require(in.size() == n_ && out.size() == n_, "FFT buffer length mismatch");
  require(in.data() != out.data(), "FFT does not operate in place");
  if (padded_) {
    bluestein(in, out, inverse);
  } else {
    mixed_radix(in.data(), out.data(), n_, 1, 0, inverse);
  }
}

// Decimation in time: out[0..n) receives the length-n DFT of in[0], in[stride], ...
void FftPlan::mixed_radix(const cplx* in, cplx* out, std::size_t n, std::size_t stride,
                          std::size_t level, bool inverse) const {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = factors_[level];
  const std::size_t m = n / p;
  for (std::size_t r = 0; r < p; ++r) {
    mixed_radix(in + r * stride, out + r * m, m, stride * p, level + 1, inverse);
  }

  const std::size_t tw_step = n_ / n;  // twiddle index scale for the current sub-length
  auto tw = [&](std::size_t idx) {
    const cplx w = twiddles_[(idx * tw_step) % n_];
    return inverse ? std::conj(w) : w;
  };

  if (p == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const cplx a = out[k];
      const cplx b = out[k + m] * tw(k);
      out[k] = a + b;
      out[k + m] = a - b;
    }
    return;
  }
  if (p == 4) {
    const cplx minus_j = inverse ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
    for (std::size_t k = 0; k < m; ++k) {
      const cplx a0 = out[k];
      const cplx a1 = out[k + m] * tw(k);
      const cplx a2 = out[k + 2 * m] * tw(2 * k);
      const cplx a3 = out[k + 3 * m] * tw(3 * k);
      const cplx s02 = a0 + a2, d02 = a0 - a2;
      const cplx s13 = a1 + a3, d13 = (a1 - a3) * minus_j;
      out[k] = s02 + s13;
      out[k + m] = d02 + d13;
      out[k + 2 * m] = s02 - s13;
      out[k + 3 * m] = d02 - d13;
    }
    return;
  }

  // Generic radix-p butterfly, O(p^2) per output group.
  std::vector<cplx> scratch(p);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t r = 0; r < p; ++r) scratch[r] = out[k + r * m] * tw(r * k);
    for (std::size_t q = 0; q < p; ++q) {
      cplx acc = scratch[0];
      for (std::size_t r = 1; r < p; ++r) {
        // exp(-j 2 pi r q / p) expressed on the full-length twiddle table
        acc += scratch[r] * tw(((r * q) % p) * m);
      }
      out[k + q * m] = acc;
    }
  }
}

void FftPlan::bluestein(std::span<const cplx> in, std::span<cplx> out, bool inverse) const {
  const std::size_t m = padded_->size();
  std::vector<cplx> a(m, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < n_; ++k) {
    const cplx w = inverse ? std::conj(chirp_[k]) : chirp_[k];
    a[k] = in[k] * w;
  }
  std::vector<cplx> fa(m);
  padded_->forward(a, fa);
  for (std::size_t k = 0; k < m; ++k) {
    // The inverse transform uses the conjugate chirp; its kernel FFT is the
    // index-reversed conjugate of the forward kernel FFT.
    fa[k] *= inverse ? std::conj(kernel_fft_[(m - k) % m]) : kernel_fft_[k];
  }
  padded_->inverse(fa, a);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n_; ++k) {
    const cplx w = inverse ? std::conj(chirp_[k]) : chirp_[k];
    out[k] = a[k] * w * scale;
  }
}

}  // namespace afdm
