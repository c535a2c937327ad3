#include "afdm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "afdm/error.hpp"

namespace afdm {

ChannelRealization::ChannelRealization(std::vector<ChannelPath> paths, std::size_t n)
    : paths_(std::move(paths)), n_(n) {
  require(n_ >= 2, "channel system size must be at least 2");
  require(!paths_.empty(), "a channel needs at least one path");
  std::set<std::pair<int, double>> seen;
  for (const auto& p : paths_) {
    require(p.delay >= 0 && static_cast<std::size_t>(p.delay) < n_,
            "path delay " + std::to_string(p.delay) + " outside [0, N)");
    require(std::isfinite(p.doppler) && std::isfinite(p.gain.real()) && std::isfinite(p.gain.imag()),
            "path parameters must be finite");
    require(seen.emplace(p.delay, p.doppler).second,
            "duplicate (delay, doppler) pair (" + std::to_string(p.delay) + ", " + std::to_string(p.doppler) + ")");
  }
}

int ChannelRealization::max_delay() const {
  int m = 0;
  for (const auto& p : paths_) m = std::max(m, p.delay);
  return m;
}

double ChannelRealization::energy() const {
  double e = 0.0;
  for (const auto& p : paths_) e += std::norm(p.gain);
  return e;
}

ComplexVector apply_timedomain(const Frame& frame, const ChannelRealization& ch) {
  const auto n = static_cast<long long>(frame.body.size());
  const auto len = static_cast<long long>(frame.prefix.size());
  require(static_cast<std::size_t>(n) == ch.n(), "frame body length does not match the channel size");
  require(ch.max_delay() <= len, "path delay exceeds the prefix length");

  auto sample = [&](long long idx) -> cplx {
    if (idx < -len) return {0.0, 0.0};
    if (idx < 0) return frame.prefix(static_cast<Eigen::Index>(idx + len));
    return frame.body(static_cast<Eigen::Index>(idx));
  };

  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(len + n));
  for (const auto& path : ch.paths()) {
    const double f = path.digital_frequency(ch.n());
    for (long long t = -len; t < n; ++t) {
      const cplx doppler = unit_phasor_neg(f * static_cast<double>(t));
      out(static_cast<Eigen::Index>(t + len)) += path.gain * doppler * sample(t - path.delay);
    }
  }
  return out;
}

ComplexMatrix channel_matrix(const ChannelRealization& ch, double c1, bool include_prefix_phase) {
  const auto n = static_cast<long long>(ch.n());
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (const auto& path : ch.paths()) {
    const long long l = path.delay;
    const double f = path.digital_frequency(ch.n());
    for (long long row = 0; row < n; ++row) {
      // Pi^l moves column (row - l) mod N onto this row.
      const long long col = ((row - l) % n + n) % n;
      cplx entry = path.gain * unit_phasor_neg(f * static_cast<double>(row));
      if (include_prefix_phase && row < l) {
        entry *= unit_phasor_neg(c1 * static_cast<double>(n * n - 2 * n * (l - row)));
      }
      h(row, col) += entry;
    }
  }
  return h;
}

ComplexVector add_awgn(const ComplexVector& v, double n0, RandomStream& rng) {
  require(n0 > 0.0 && std::isfinite(n0), "noise power N0 must be positive");
  ComplexVector out = v;
  for (Eigen::Index k = 0; k < out.size(); ++k) out(k) += rng.complex_normal(n0);
  return out;
}

PathLayout PathLayout::grid(const std::vector<int>& delays, const std::vector<double>& dopplers) {
  PathLayout layout;
  for (int l : delays) {
    for (double a : dopplers) layout.entries.push_back({l, a, std::nullopt});
  }
  return layout;
}

PathLayout PathLayout::full_grid(const ChannelProfile& profile) {
  profile.validate();
  std::vector<int> delays;
  std::vector<double> dopplers;
  for (int l = 0; l <= profile.l_max; ++l) delays.push_back(l);
  for (int a = -profile.alpha_max; a <= profile.alpha_max; ++a) dopplers.push_back(a);
  return grid(delays, dopplers);
}

std::vector<DelayDoppler> PathLayout::delay_doppler() const {
  std::vector<DelayDoppler> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back({e.delay, e.doppler});
  return out;
}

void PathLayout::validate(const ChannelProfile& profile, std::size_t n) const {
  if (entries.empty()) throw ConfigError("path layout is empty");
  std::set<std::pair<int, double>> seen;
  for (const auto& e : entries) {
    if (e.delay < 0 || static_cast<std::size_t>(e.delay) >= n) {
      throw ConfigError("layout delay " + std::to_string(e.delay) + " outside [0, N)");
    }
    if (e.delay > profile.l_max) {
      throw ConfigError("layout delay " + std::to_string(e.delay) + " exceeds l_max");
    }
    if (!std::isfinite(e.doppler) || std::abs(e.doppler) > profile.alpha_max + 0.5) {
      throw ConfigError("layout Doppler " + std::to_string(e.doppler) + " outside the profile range");
    }
    if (!seen.emplace(e.delay, e.doppler).second) {
      throw ConfigError("duplicate (delay, doppler) pair in layout");
    }
  }
}

ChannelRealization random_channel(const ChannelProfile& profile, const PathLayout& layout, std::size_t n,
                                  RandomStream& rng) {
  layout.validate(profile, n);
  const double variance = 1.0 / static_cast<double>(layout.entries.size());
  std::vector<ChannelPath> paths;
  paths.reserve(layout.entries.size());
  for (const auto& e : layout.entries) {
    // Draw even when the gain is fixed so the stream position does not depend on the layout.
    const cplx drawn = rng.complex_normal(variance);
    paths.push_back({e.gain.value_or(drawn), e.doppler, e.delay});
  }
  return ChannelRealization(std::move(paths), n);
}

}  // namespace afdm
