#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "afdm/linalg.hpp"
#include "afdm/params.hpp"
#include "afdm/transforms.hpp"

namespace afdm {

using Bits = std::vector<std::uint8_t>;

std::size_t bits_per_symbol(Constellation c);

/// Unit-average-energy points. The index of a point is its Gray label read
/// MSB-first: QPSK 00 -> (1+j)/sqrt2, 01 -> (-1+j)/sqrt2, 11 -> (-1-j)/sqrt2, 10 -> (1-j)/sqrt2.
std::span<const cplx> constellation_points(Constellation c);

/// Hard decision by minimum Euclidean distance; ties resolve to the lowest index.
std::size_t nearest_point(cplx value, Constellation c);

struct SymbolVector {
  ComplexVector symbols;
  Constellation constellation = Constellation::Bpsk;
};

SymbolVector map_bits(std::span<const std::uint8_t> bits, Constellation c, std::size_t n);

/// Hard-decision demapper: nearest point, then its Gray label.
Bits demap_bits(const ComplexVector& symbols, Constellation c);

/// Bits of the constellation points at the given indices.
Bits indices_to_bits(std::span<const std::size_t> indices, Constellation c);

/// One transmitted block: body s_0..s_{N-1} and prefix s_{-L}..s_{-1}.
struct Frame {
  ComplexVector prefix;
  ComplexVector body;

  /// Wire order: prefix first, then body.
  ComplexVector serialize() const;
};

/// Chirp-periodic prefix of length `cpp_len`: s_n = s_{N+n} exp(-j 2 pi c1 (N^2 + 2 N n)), n = -L..-1.
ComplexVector chirp_periodic_prefix(const ComplexVector& body, double c1, std::size_t cpp_len);

Frame modulate(const SymbolVector& x, const ModemParams& p);
ComplexVector demodulate(const ComplexVector& r, const ModemParams& p);

/// Drops the first `cpp_len` samples.
ComplexVector discard_cpp(const ComplexVector& received, std::size_t cpp_len);

/// Modulator/demodulator pair with a cached DAFT engine, for repeated use.
class Modem {
 public:
  explicit Modem(const ModemParams& p);

  const ModemParams& params() const { return params_; }
  const Daft& transform() const { return daft_; }

  Frame modulate(const SymbolVector& x) const;
  ComplexVector demodulate(const ComplexVector& r) const;

 private:
  ModemParams params_;
  Daft daft_;
};

}  // namespace afdm
