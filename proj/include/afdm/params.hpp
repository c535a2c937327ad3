#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "afdm/transforms.hpp"

namespace afdm {

/// Delay spread (samples) and maximum integer normalized Doppler of a channel class.
struct ChannelProfile {
  int l_max = 0;
  int alpha_max = 0;

  void validate() const;
  friend bool operator==(const ChannelProfile&, const ChannelProfile&) = default;
};

enum class Scheme { Afdm, Ocdm, DaftOfdm, Ofdm };
enum class GuardScheme { Afdm, Otfs };
enum class Constellation { Bpsk, Qpsk };

Scheme parse_scheme(std::string_view tag);
std::string_view to_string(Scheme s);
GuardScheme parse_guard_scheme(std::string_view tag);
Constellation parse_constellation(std::string_view tag);
std::string_view to_string(Constellation c);

/// A (delay, normalized Doppler) pair. Used for the DAFT-OFDM chirp fit.
struct DelayDoppler {
  int delay = 0;
  double doppler = 0.0;
};

/// Full configuration of one DAFT-based multicarrier system.
struct ModemParams {
  std::size_t n = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::size_t cpp_len = 0;
  Constellation constellation = Constellation::Bpsk;
  std::string scheme_label;

  DaftParams daft() const { return {n, c1, c2}; }
  void validate() const;
};

/// c1 = (2 alpha_max + 1) / (2N): smallest chirp rate keeping every
/// delay-Doppler path on its own DAFT-domain diagonal.
double afdm_c1(const ChannelProfile& profile, std::size_t n);

/// sqrt(2) / (2 N^2): irrational-valued and well below 1/(2N).
double default_c2(std::size_t n);

/// DAFT-OFDM chirp rate. Fits alpha = a + kappa * l by least squares over the
/// given pairs and returns c1 = -round(kappa) / (2N), which lines the paths up
/// on a single DAFT-domain diagonal whenever they lie on a line. Returns 0
/// when all pairs share one delay.
double daft_ofdm_c1(std::span<const DelayDoppler> layout, std::size_t n);

/// Preset parameters for one of the four DAFT family members. `layout` is
/// only consulted for DAFT-OFDM.
ModemParams scheme_params(Scheme scheme, const ChannelProfile& profile, std::size_t n,
                          Constellation constellation = Constellation::Bpsk,
                          std::span<const DelayDoppler> layout = {});

/// True iff 2 alpha_max l_max + 2 alpha_max + l_max < N.
bool validate_separability(const ChannelProfile& profile, std::size_t n);

/// Guard symbols needed around one embedded pilot.
std::size_t guard_symbol_count(GuardScheme scheme, const ChannelProfile& profile);

}  // namespace afdm
