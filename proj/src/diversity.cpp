#include "afdm/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "afdm/effchan.hpp"
#include "afdm/error.hpp"
#include "afdm/random.hpp"

namespace afdm {
namespace {

std::vector<ComplexMatrix> path_matrices(const ChannelRealization& ch, const ModemParams& p) {
  std::vector<ComplexMatrix> out;
  out.reserve(ch.size());
  for (const auto& path : ch.paths()) out.push_back(path_matrix(path, p));
  return out;
}

ComplexMatrix phi_from(const std::vector<ComplexMatrix>& hs, const ComplexVector& delta) {
  ComplexMatrix phi(delta.size(), static_cast<Eigen::Index>(hs.size()));
  for (std::size_t i = 0; i < hs.size(); ++i) phi.col(static_cast<Eigen::Index>(i)) = hs[i] * delta;
  return phi;
}

// Partial result over a slice of the difference space. Merge keeps the
// lowest-ordered minimizer so the answer is independent of slicing.
struct Partial {
  std::size_t min_rank = std::numeric_limits<std::size_t>::max();
  std::uint64_t arg_min_order = std::numeric_limits<std::uint64_t>::max();
  ComplexVector arg_min_delta;
  std::map<std::size_t, std::uint64_t> histogram;
  std::uint64_t evaluated = 0;
  double smallest_sv = std::numeric_limits<double>::infinity();

  void observe(const RankInfo& r, std::uint64_t order, const ComplexVector& delta, std::uint64_t weight) {
    histogram[r.rank] += weight;
    ++evaluated;
    if (r.rank > 0) smallest_sv = std::min(smallest_sv, r.smallest_nonzero);
    if (r.rank < min_rank || (r.rank == min_rank && order < arg_min_order)) {
      min_rank = r.rank;
      arg_min_order = order;
      arg_min_delta = delta;
    }
  }

  void merge(const Partial& o) {
    for (const auto& [rank, count] : o.histogram) histogram[rank] += count;
    evaluated += o.evaluated;
    smallest_sv = std::min(smallest_sv, o.smallest_sv);
    if (o.min_rank < min_rank || (o.min_rank == min_rank && o.arg_min_order < arg_min_order)) {
      min_rank = o.min_rank;
      arg_min_order = o.arg_min_order;
      arg_min_delta = o.arg_min_delta;
    }
  }
};

template <typename Work>
Partial run_partitioned(std::uint64_t begin, std::uint64_t end, unsigned workers, Work work) {
  workers = std::max(1u, workers);
  const std::uint64_t span = end - begin;
  std::vector<Partial> parts(workers);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = begin + span * w / workers;
    const std::uint64_t hi = begin + span * (w + 1) / workers;
    if (workers == 1) {
      work(lo, hi, parts[w]);
    } else {
      threads.emplace_back([&, lo, hi, w] { work(lo, hi, parts[w]); });
    }
  }
  for (auto& t : threads) t.join();
  Partial total;
  for (const auto& part : parts) total.merge(part);
  return total;
}

}  // namespace

ComplexMatrix build_phi(const ComplexVector& delta, const ChannelRealization& ch, const ModemParams& p) {
  require(static_cast<std::size_t>(delta.size()) == p.n, "difference vector length does not match N");
  require(ch.n() == p.n, "channel size does not match N");
  return phi_from(path_matrices(ch, p), delta);
}

std::vector<cplx> difference_alphabet(Constellation c) {
  if (c == Constellation::Bpsk) return {cplx{2.0, 0.0}, cplx{-2.0, 0.0}};
  const double s = std::numbers::sqrt2;
  const std::vector<cplx> half = {{s, 0.0}, {0.0, s}, {s, s}, {s, -s}};
  std::vector<cplx> out = half;
  for (const auto& v : half) out.push_back(-v);
  return out;
}

DiversityReport min_rank_sweep(const ChannelRealization& ch, const ModemParams& p, Constellation c,
                               const SweepOptions& options) {
  p.validate();
  require(ch.n() == p.n, "channel size does not match N");
  const std::vector<ComplexMatrix> hs = path_matrices(ch, p);
  const std::vector<cplx> nonzero = difference_alphabet(c);
  const std::size_t radix = nonzero.size() + 1;  // digit 0 is the zero entry
  const std::size_t half = nonzero.size() / 2;
  const std::size_t n = p.n;

  std::uint64_t total = 1;
  bool over_budget = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (total > options.budget / radix) {
      over_budget = true;
      break;
    }
    total *= radix;
  }
  if (!over_budget && total - 1 > options.budget) over_budget = true;

  Partial result;
  DiversityReport report;
  if (!over_budget) {
    // Index t in [1, radix^N) spells delta in base `radix`, coordinate 0 most significant.
    auto work = [&](std::uint64_t lo, std::uint64_t hi, Partial& part) {
      ComplexVector delta(static_cast<Eigen::Index>(n));
      for (std::uint64_t t = lo; t < hi; ++t) {
        std::uint64_t rest = t;
        std::size_t leading = 0;
        for (std::size_t k = n; k-- > 0;) {
          const std::size_t digit = rest % radix;
          rest /= radix;
          delta(static_cast<Eigen::Index>(k)) = digit == 0 ? cplx{0.0, 0.0} : nonzero[digit - 1];
          if (digit != 0) leading = digit;
        }
        if (leading == 0 || leading > half) continue;  // zero vector, or the negative of a canonical one
        part.observe(numerical_rank(phi_from(hs, delta)), t, delta, 2);
      }
    };
    result = run_partitioned(1, total, options.workers, work);
    report.exhaustive = true;
  } else {
    if (!options.sample_when_over_budget) {
      throw BudgetExceeded("difference set of size " + std::to_string(radix) + "^" + std::to_string(n) +
                           " exceeds the exhaustive budget; enable sampling for an estimate");
    }
    auto work = [&](std::uint64_t lo, std::uint64_t hi, Partial& part) {
      ComplexVector delta(static_cast<Eigen::Index>(n));
      for (std::uint64_t s = lo; s < hi; ++s) {
        RandomStream rng(options.seed, mix64(s));
        bool any = false;
        while (!any) {
          for (std::size_t k = 0; k < n; ++k) {
            const std::size_t digit = rng.next_u32() % radix;
            delta(static_cast<Eigen::Index>(k)) = digit == 0 ? cplx{0.0, 0.0} : nonzero[digit - 1];
            any = any || digit != 0;
          }
        }
        part.observe(numerical_rank(phi_from(hs, delta)), s, delta, 1);
      }
    };
    result = run_partitioned(0, options.samples, options.workers, work);
    report.exhaustive = false;
  }

  report.paths = ch.size();
  report.min_rank = result.min_rank;
  report.arg_min_delta = result.arg_min_delta;
  report.rank_histogram = result.histogram;
  report.evaluated = result.evaluated;
  report.full_diversity = result.min_rank == ch.size();
  report.smallest_nonzero_singular_value = std::isfinite(result.smallest_sv) ? result.smallest_sv : 0.0;
  return report;
}

double pep_upper_bound(const ComplexVector& delta, const ChannelRealization& ch, const ModemParams& p, double n0) {
  require(n0 > 0.0, "noise power must be positive");
  const RankInfo r = numerical_rank(build_phi(delta, ch, p));
  const double scale = 4.0 * static_cast<double>(ch.size()) * n0;
  double bound = 1.0;
  for (std::size_t k = 0; k < r.rank; ++k) {
    const double lambda = r.singular_values(static_cast<Eigen::Index>(k));
    bound /= 1.0 + lambda * lambda / scale;
  }
  return bound;
}

PairCheck theorem1_pair_analysis(const ComplexVector& delta, std::size_t z, const ChannelRealization& ch,
                                 const ModemParams& p) {
  require(ch.size() == 2, "pair check needs exactly two paths");
  require(static_cast<std::size_t>(delta.size()) == p.n && ch.n() == p.n, "size mismatch");
  require(z < p.n, "z out of range");
  const auto& path1 = ch.paths()[0];
  const auto& path2 = ch.paths()[1];
  const auto place1 = place_path(path1, p);
  const auto place2 = place_path(path2, p);
  require(place1.loc && place2.loc, "pair check needs integral placements");
  const long long n = static_cast<long long>(p.n);
  const long long d = *place2.loc - *place1.loc;
  require(((d % n) + n) % n != 0, "the two paths share a DAFT-domain position");
  const long long zz = static_cast<long long>(z);
  require(zz - std::abs(d) >= 0 && zz + std::abs(d) < n, "z -/+ loc_d must stay inside [0, N)");
  const cplx dz = delta(zz);
  require(dz != cplx{0.0, 0.0}, "delta_z must be nonzero");

  const cplx d_minus = delta(zz - d);
  const cplx d_plus = delta(zz + d);
  PairCheck out;
  out.loc_difference = d;
  out.lhs = dz * dz;
  const double dd = static_cast<double>(d);
  const double turns = -static_cast<double>((path2.delay - path1.delay) * d) / static_cast<double>(n) +
                       2.0 * p.c2 * dd * dd;
  out.rhs = unit_phasor_neg(-turns) * d_minus * d_plus;

  auto wrap = [n](long long v) { return static_cast<std::size_t>(((v % n) + n) % n); };
  const std::size_t row_a = wrap(zz - *place2.loc);
  const std::size_t row_b = wrap(zz - *place1.loc);
  const cplx t1 = closed_form_entry(path1.delay, row_a, static_cast<std::size_t>(zz - d), p) * d_minus;
  const cplx t2 = closed_form_entry(path2.delay, row_a, z, p) * dz;
  const cplx t3 = closed_form_entry(path1.delay, row_b, z, p) * dz;
  const cplx t4 = closed_form_entry(path2.delay, row_b, static_cast<std::size_t>(zz + d), p) * d_plus;
  out.determinant = t1 * t4 - t2 * t3;

  const double scale = std::max({std::abs(out.lhs), std::abs(out.rhs), 1.0});
  out.holds = std::abs(out.lhs - out.rhs) > 1e-9 * scale;
  return out;
}

}  // namespace afdm
