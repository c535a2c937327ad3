#include "afdm/params.hpp"

#include <cmath>

#include "afdm/error.hpp"

namespace afdm {

void ChannelProfile::validate() const {
  require(l_max >= 0, "l_max must be nonnegative");
  require(alpha_max >= 0, "alpha_max must be nonnegative");
}

Scheme parse_scheme(std::string_view tag) {
  if (tag == "afdm") return Scheme::Afdm;
  if (tag == "ocdm") return Scheme::Ocdm;
  if (tag == "daft-ofdm") return Scheme::DaftOfdm;
  if (tag == "ofdm") return Scheme::Ofdm;
  throw ConfigError("unknown scheme '" + std::string(tag) + "'");
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::Afdm: return "afdm";
    case Scheme::Ocdm: return "ocdm";
    case Scheme::DaftOfdm: return "daft-ofdm";
    case Scheme::Ofdm: return "ofdm";
  }
  return "?";
}

GuardScheme parse_guard_scheme(std::string_view tag) {
  if (tag == "afdm") return GuardScheme::Afdm;
  if (tag == "otfs") return GuardScheme::Otfs;
  throw ConfigError("unknown guard scheme '" + std::string(tag) + "'");
}

Constellation parse_constellation(std::string_view tag) {
  if (tag == "bpsk") return Constellation::Bpsk;
  if (tag == "qpsk") return Constellation::Qpsk;
  throw ConfigError("unknown constellation '" + std::string(tag) + "'");
}

std::string_view to_string(Constellation c) { return c == Constellation::Bpsk ? "bpsk" : "qpsk"; }

void ModemParams::validate() const {
  require(n >= 2, "modem size N must be at least 2");
  require(std::isfinite(c1) && std::isfinite(c2), "chirp parameters must be finite");
}

double afdm_c1(const ChannelProfile& profile, std::size_t n) {
  profile.validate();
  require(n >= 2, "N must be at least 2");
  return (2.0 * profile.alpha_max + 1.0) / (2.0 * static_cast<double>(n));
}

double default_c2(std::size_t n) {
  require(n >= 2, "N must be at least 2");
  const double nn = static_cast<double>(n);
  return std::numbers::sqrt2 / (2.0 * nn * nn);
}

double daft_ofdm_c1(std::span<const DelayDoppler> layout, std::size_t n) {
  require(n >= 2, "N must be at least 2");
  if (layout.empty()) return 0.0;
  double mean_l = 0.0, mean_a = 0.0;
  for (const auto& p : layout) {
    mean_l += p.delay;
    mean_a += p.doppler;
  }
  mean_l /= static_cast<double>(layout.size());
  mean_a /= static_cast<double>(layout.size());
  double sll = 0.0, sla = 0.0;
  for (const auto& p : layout) {
    sll += (p.delay - mean_l) * (p.delay - mean_l);
    sla += (p.delay - mean_l) * (p.doppler - mean_a);
  }
  if (sll == 0.0) return 0.0;
  const double kappa = sla / sll;
  return -std::round(kappa) / (2.0 * static_cast<double>(n));
}

ModemParams scheme_params(Scheme scheme, const ChannelProfile& profile, std::size_t n,
                          Constellation constellation, std::span<const DelayDoppler> layout) {
  profile.validate();
  require(n >= 2, "N must be at least 2");
  ModemParams p;
  p.n = n;
  p.cpp_len = static_cast<std::size_t>(profile.l_max);
  p.constellation = constellation;
  p.scheme_label = std::string(to_string(scheme));
  const double half_inv_n = 1.0 / (2.0 * static_cast<double>(n));
  switch (scheme) {
    case Scheme::Afdm:
      p.c1 = afdm_c1(profile, n);
      p.c2 = default_c2(n);
      break;
    case Scheme::Ocdm:
      p.c1 = half_inv_n;
      p.c2 = half_inv_n;
      break;
    case Scheme::DaftOfdm:
      p.c1 = daft_ofdm_c1(layout, n);
      p.c2 = 0.0;
      break;
    case Scheme::Ofdm:
      p.c1 = 0.0;
      p.c2 = 0.0;
      break;
  }
  return p;
}

bool validate_separability(const ChannelProfile& profile, std::size_t n) {
  profile.validate();
  const long long a = profile.alpha_max;
  const long long l = profile.l_max;
  return 2 * a * l + 2 * a + l < static_cast<long long>(n);
}

std::size_t guard_symbol_count(GuardScheme scheme, const ChannelProfile& profile) {
  profile.validate();
  const std::size_t l = static_cast<std::size_t>(profile.l_max);
  const std::size_t a = static_cast<std::size_t>(profile.alpha_max);
  switch (scheme) {
    case GuardScheme::Afdm: return (2 * l + 2) * (2 * a + 1) - 2;
    case GuardScheme::Otfs: return (2 * l + 1) * (4 * a + 1) - 1;
  }
  return 0;
}

}  // namespace afdm
