#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "afdm/channel.hpp"
#include "afdm/linalg.hpp"
#include "afdm/params.hpp"

namespace afdm {

/// Where one path lands in the DAFT domain.
struct PathPlacement {
  ChannelPath path;
  /// loc = nu + 2 N c1 l before the modulo; empty when nu or 2 N c1 l is not an integer.
  std::optional<long long> loc;
  /// (0 + loc) mod N, the nonzero column of this path in row 0.
  std::optional<std::size_t> position_row0;
};

/// DAFT-domain channel H_eff = A H A^H with per-path placement metadata.
struct EffectiveChannel {
  ComplexMatrix h_eff;
  std::vector<PathPlacement> per_path;
};

/// Placement for a single path; integrality is judged within 1e-9.
PathPlacement place_path(const ChannelPath& path, const ModemParams& p);

/// H_eff by explicit conjugation of the time-domain matrix. Valid for any Doppler.
EffectiveChannel build_heff_matrix(const ChannelRealization& ch, const ModemParams& p);

/// Phase of the single nonzero entry H_i(row, col) of a unit-gain path:
/// exp(j 2 pi / N (N c1 l^2 - col l + N c2 (col^2 - row^2))).
cplx closed_form_entry(int delay, std::size_t row, std::size_t col, const ModemParams& p);

/// H_eff assembled entrywise from the single-nonzero-per-row closed form.
/// Throws PreconditionError for fractional Doppler or non-integral 2 N c1 l.
EffectiveChannel heff_closed_form(const ChannelRealization& ch, const ModemParams& p);

/// Unit-gain per-path matrix H_i: closed form when integral, conjugation otherwise.
ComplexMatrix path_matrix(const ChannelPath& path, const ModemParams& p);

/// One row of H_eff from the general per-path expression, with the
/// Dirichlet sum evaluated as a geometric-series ratio. Valid for fractional Doppler.
ComplexVector heff_general_row(const ChannelRealization& ch, const ModemParams& p, std::size_t row);

/// sum_{k=0}^{N-1} exp(-j 2 pi theta k / N) in closed form.
cplx dirichlet_sum(double theta, std::size_t n);

struct RecoveredPath {
  int delay = 0;
  int doppler = 0;
  cplx gain;
};

/// Reads the delay-Doppler profile back from row 0 of an exact H_eff.
///
/// Entries above 1e-6 of the row maximum are mapped through the table
/// (l, alpha) -> (alpha + 2 N c1 l) mod N built over the admissible grid of
/// `profile`, and de-rotated by the closed-form phase. Requires an integral
/// 2 N c1, a separable profile and a collision-free table; throws otherwise.
std::vector<RecoveredPath> recover_profile(const EffectiveChannel& e, const ModemParams& p,
                                           const ChannelProfile& profile);

}  // namespace afdm
