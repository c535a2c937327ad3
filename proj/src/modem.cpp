#include "afdm/modem.hpp"

#include <array>
#include <cmath>

#include "afdm/error.hpp"

namespace afdm {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

const std::array<cplx, 2> kBpsk = {cplx{1.0, 0.0}, cplx{-1.0, 0.0}};
const std::array<cplx, 4> kQpsk = {cplx{kInvSqrt2, kInvSqrt2}, cplx{-kInvSqrt2, kInvSqrt2},
                                   cplx{kInvSqrt2, -kInvSqrt2}, cplx{-kInvSqrt2, -kInvSqrt2}};

}  // namespace

std::size_t bits_per_symbol(Constellation c) { return c == Constellation::Bpsk ? 1 : 2; }

std::span<const cplx> constellation_points(Constellation c) {
  if (c == Constellation::Bpsk) return kBpsk;
  return kQpsk;
}

std::size_t nearest_point(cplx value, Constellation c) {
  const auto points = constellation_points(c);
  std::size_t best = 0;
  double best_d = std::norm(value - points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = std::norm(value - points[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

SymbolVector map_bits(std::span<const std::uint8_t> bits, Constellation c, std::size_t n) {
  const std::size_t bps = bits_per_symbol(c);
  require(bits.size() == n * bps, "bit block length must be N * bits-per-symbol");
  const auto points = constellation_points(c);
  SymbolVector out{ComplexVector(static_cast<Eigen::Index>(n)), c};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t index = 0;
    for (std::size_t b = 0; b < bps; ++b) {
      require(bits[k * bps + b] <= 1, "bits must be 0 or 1");
      index = (index << 1) | bits[k * bps + b];
    }
    out.symbols(static_cast<Eigen::Index>(k)) = points[index];
  }
  return out;
}

Bits indices_to_bits(std::span<const std::size_t> indices, Constellation c) {
  const std::size_t bps = bits_per_symbol(c);
  Bits bits(indices.size() * bps);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    for (std::size_t b = 0; b < bps; ++b) {
      bits[k * bps + b] = static_cast<std::uint8_t>((indices[k] >> (bps - 1 - b)) & 1u);
    }
  }
  return bits;
}

Bits demap_bits(const ComplexVector& symbols, Constellation c) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(symbols.size()));
  for (Eigen::Index k = 0; k < symbols.size(); ++k) idx[static_cast<std::size_t>(k)] = nearest_point(symbols(k), c);
  return indices_to_bits(idx, c);
}

ComplexVector Frame::serialize() const {
  ComplexVector out(prefix.size() + body.size());
  out << prefix, body;
  return out;
}

ComplexVector chirp_periodic_prefix(const ComplexVector& body, double c1, std::size_t cpp_len) {
  const auto n = static_cast<long long>(body.size());
  require(static_cast<long long>(cpp_len) <= n, "prefix longer than the body");
  ComplexVector prefix(static_cast<Eigen::Index>(cpp_len));
  const long long len = static_cast<long long>(cpp_len);
  for (long long idx = -len; idx < 0; ++idx) {
    const double exponent = static_cast<double>(n * n + 2 * n * idx);
    prefix(static_cast<Eigen::Index>(idx + len)) = body(static_cast<Eigen::Index>(n + idx)) * unit_phasor_neg(c1 * exponent);
  }
  return prefix;
}

Modem::Modem(const ModemParams& p) : params_((p.validate(), p)), daft_(p.daft()) {}

Frame Modem::modulate(const SymbolVector& x) const {
  require(static_cast<std::size_t>(x.symbols.size()) == params_.n, "symbol vector length does not match N");
  Frame f;
  f.body = daft_.inverse(x.symbols);
  f.prefix = chirp_periodic_prefix(f.body, params_.c1, params_.cpp_len);
  return f;
}

ComplexVector Modem::demodulate(const ComplexVector& r) const {
  require(static_cast<std::size_t>(r.size()) == params_.n, "received block length does not match N");
  return daft_.forward(r);
}

Frame modulate(const SymbolVector& x, const ModemParams& p) { return Modem(p).modulate(x); }

ComplexVector demodulate(const ComplexVector& r, const ModemParams& p) { return Modem(p).demodulate(r); }

ComplexVector discard_cpp(const ComplexVector& received, std::size_t cpp_len) {
  require(static_cast<std::size_t>(received.size()) > cpp_len, "received block shorter than its prefix");
  return received.tail(received.size() - static_cast<Eigen::Index>(cpp_len));
}

}  // namespace afdm
