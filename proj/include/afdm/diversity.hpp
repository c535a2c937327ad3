#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "afdm/channel.hpp"
#include "afdm/linalg.hpp"
#include "afdm/params.hpp"

namespace afdm {

/// Phi(delta) = [H_1 delta | ... | H_P delta] with unit-gain per-path matrices.
ComplexMatrix build_phi(const ComplexVector& delta, const ChannelRealization& ch, const ModemParams& p);

/// Nonzero per-coordinate values of x_m - x_n for the constellation. The
/// first half are canonical representatives; the second half are their negatives.
std::vector<cplx> difference_alphabet(Constellation c);

struct DiversityReport {
  std::size_t min_rank = 0;
  std::size_t paths = 0;
  ComplexVector arg_min_delta;
  /// rank -> number of nonzero difference vectors with that rank.
  std::map<std::size_t, std::uint64_t> rank_histogram;
  bool full_diversity = false;
  /// False when the report comes from random sampling (an estimate, not a proof).
  bool exhaustive = true;
  std::uint64_t evaluated = 0;
  /// Smallest singular value counted as nonzero over all evaluated delta.
  double smallest_nonzero_singular_value = 0.0;
};

struct SweepOptions {
  /// Largest number of difference vectors enumerated exhaustively (9^6).
  std::uint64_t budget = 531441;
  /// Fall back to random sampling instead of throwing BudgetExceeded.
  bool sample_when_over_budget = false;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Minimum numerical rank of Phi(delta) over all nonzero difference vectors.
/// delta and -delta have equal rank, so only one of each pair is evaluated.
/// The result does not depend on the worker count.
DiversityReport min_rank_sweep(const ChannelRealization& ch, const ModemParams& p, Constellation c,
                               const SweepOptions& options = {});

/// prod over nonzero singular values of 1 / (1 + lambda^2 / (4 P N0)); 1 for delta = 0.
double pep_upper_bound(const ComplexVector& delta, const ChannelRealization& ch, const ModemParams& p, double n0);

/// Both sides of the two-path full-rank condition for a 2x2 minor of Phi(delta).
struct PairCheck {
  bool holds = false;
  cplx lhs;  // delta_z^2
  cplx rhs;  // exp(-j 2 pi (l2 - l1) d / N) exp(j 4 pi c2 d^2) delta_{z-d} delta_{z+d}
  /// t1 t4 - t2 t3 of the minor built from the actual per-path entries.
  cplx determinant;
  long long loc_difference = 0;
};

/// Evaluates the minor formed by rows z - loc_2 and z - loc_1 of Phi(delta).
/// Requires P = 2, integral placements, delta_z != 0, d = loc_2 - loc_1 != 0
/// (mod N), and z - |d|, z + |d| inside [0, N).
PairCheck theorem1_pair_analysis(const ComplexVector& delta, std::size_t z, const ChannelRealization& ch,
                                 const ModemParams& p);

inline bool theorem1_pair_check(const ComplexVector& delta, std::size_t z, const ChannelRealization& ch,
                                const ModemParams& p) {
  return theorem1_pair_analysis(delta, z, ch, p).holds;
}

}  // namespace afdm
