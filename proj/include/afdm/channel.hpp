#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "afdm/linalg.hpp"
#include "afdm/modem.hpp"
#include "afdm/params.hpp"
#include "afdm/random.hpp"

namespace afdm {

/// One propagation path: complex gain h, normalized Doppler nu = N f (f in
/// cycles per sample) and integer delay in samples.
struct ChannelPath {
  cplx gain{1.0, 0.0};
  double doppler = 0.0;
  int delay = 0;

  /// Digital Doppler frequency f = nu / N.
  double digital_frequency(std::size_t n) const { return doppler / static_cast<double>(n); }
};

/// A set of P >= 1 paths for a system of size N. Construction validates
/// delays (0 <= l < N) and rejects duplicate (delay, Doppler) pairs.
class ChannelRealization {
 public:
  ChannelRealization(std::vector<ChannelPath> paths, std::size_t n);

  const std::vector<ChannelPath>& paths() const { return paths_; }
  std::size_t n() const { return n_; }
  std::size_t size() const { return paths_.size(); }
  int max_delay() const;
  /// Sum of |h_i|^2.
  double energy() const;

 private:
  std::vector<ChannelPath> paths_;
  std::size_t n_;
};

/// Noiseless received sequence (length L + N, wire order) for a transmitted frame:
/// r_n = sum_i h_i exp(-j 2 pi f_i n) s_{n - l_i}, n = -L..N-1, with n = 0 at the first body sample.
ComplexVector apply_timedomain(const Frame& frame, const ChannelRealization& ch);

/// N x N time-domain channel matrix H = sum_i h_i Gamma_i Delta_i Pi^{l_i}. With
/// `include_prefix_phase` false the Gamma_i factors are replaced by identity.
ComplexMatrix channel_matrix(const ChannelRealization& ch, double c1, bool include_prefix_phase = true);

/// Adds i.i.d. CN(0, n0) samples.
ComplexVector add_awgn(const ComplexVector& v, double n0, RandomStream& rng);

/// Delay/Doppler placement of paths; gains are optional and drawn when absent.
struct PathLayout {
  struct Entry {
    int delay = 0;
    double doppler = 0.0;
    std::optional<cplx> gain;
  };
  std::vector<Entry> entries;

  /// Every delay in `delays` paired with every Doppler in `dopplers`.
  static PathLayout grid(const std::vector<int>& delays, const std::vector<double>& dopplers);
  /// Delays 0..l_max each carrying all integer Dopplers -alpha_max..alpha_max.
  static PathLayout full_grid(const ChannelProfile& profile);

  std::vector<DelayDoppler> delay_doppler() const;
  /// Throws ConfigError if a delay is outside [0, min(N, l_max + 1)) or |doppler| > alpha_max + 0.5.
  void validate(const ChannelProfile& profile, std::size_t n) const;
};

/// Gains without a fixed value are drawn i.i.d. CN(0, 1/P).
ChannelRealization random_channel(const ChannelProfile& profile, const PathLayout& layout, std::size_t n,
                                  RandomStream& rng);

}  // namespace afdm
