#include "afdm/transforms.hpp"

#include <cmath>
#include <string>

#include "afdm/error.hpp"

namespace afdm {

void DaftParams::validate() const {
  require(n >= 2, "DAFT size must be at least 2, got " + std::to_string(n));
  require(std::isfinite(c1) && std::isfinite(c2), "DAFT chirp parameters must be finite");
}

ComplexVector chirp_vector(std::size_t n, double c) {
  require(n >= 1, "chirp size must be positive");
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double k2 = static_cast<double>(k) * static_cast<double>(k);
    v(static_cast<Eigen::Index>(k)) = unit_phasor_neg(c * k2);
  }
  return v;
}

ComplexMatrix chirp_diag(std::size_t n, double c) { return chirp_vector(n, c).asDiagonal(); }

ComplexMatrix dft_matrix(std::size_t n) {
  require(n >= 1, "DFT size must be positive");
  const auto size = static_cast<Eigen::Index>(n);
  ComplexMatrix f(size, size);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t mk = (m * k) % n;
      f(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) =
          scale * unit_phasor_neg(static_cast<double>(mk) / static_cast<double>(n));
    }
  }
  return f;
}

ComplexMatrix daft_matrix(const DaftParams& p) {
  p.validate();
  return chirp_vector(p.n, p.c2).asDiagonal() * dft_matrix(p.n) * chirp_vector(p.n, p.c1).asDiagonal();
}

Daft::Daft(const DaftParams& p)
    : params_(p), plan_((p.validate(), p.n)), scale_(1.0 / std::sqrt(static_cast<double>(p.n))) {
  const ComplexVector c1 = chirp_vector(p.n, p.c1);
  const ComplexVector c2 = chirp_vector(p.n, p.c2);
  chirp1_.assign(c1.data(), c1.data() + c1.size());
  chirp2_.assign(c2.data(), c2.data() + c2.size());
}

void Daft::forward(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t n = params_.n;
  require(in.size() == n && out.size() == n, "DAFT input length does not match N");
  std::vector<cplx> tmp(n);
  for (std::size_t k = 0; k < n; ++k) tmp[k] = in[k] * chirp1_[k];
  plan_.forward(tmp, out);
  for (std::size_t k = 0; k < n; ++k) out[k] *= chirp2_[k] * scale_;
}

void Daft::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t n = params_.n;
  require(in.size() == n && out.size() == n, "IDAFT input length does not match N");
  std::vector<cplx> tmp(n);
  for (std::size_t k = 0; k < n; ++k) tmp[k] = in[k] * std::conj(chirp2_[k]);
  plan_.inverse(tmp, out);
  for (std::size_t k = 0; k < n; ++k) out[k] *= std::conj(chirp1_[k]) * scale_;
}

ComplexVector Daft::forward(const ComplexVector& x) const {
  ComplexVector y(x.size());
  forward(std::span<const cplx>(x.data(), static_cast<std::size_t>(x.size())),
          std::span<cplx>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

ComplexVector Daft::inverse(const ComplexVector& y) const {
  ComplexVector x(y.size());
  inverse(std::span<const cplx>(y.data(), static_cast<std::size_t>(y.size())),
          std::span<cplx>(x.data(), static_cast<std::size_t>(x.size())));
  return x;
}

ComplexVector daft(const ComplexVector& x, const DaftParams& p) {
  p.validate();
  require(static_cast<std::size_t>(x.size()) == p.n, "DAFT input length does not match N");
  return Daft(p).forward(x);
}

ComplexVector idaft(const ComplexVector& y, const DaftParams& p) {
  p.validate();
  require(static_cast<std::size_t>(y.size()) == p.n, "IDAFT input length does not match N");
  return Daft(p).inverse(y);
}

}  // namespace afdm
