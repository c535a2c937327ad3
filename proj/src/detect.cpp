#include "afdm/detect.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "afdm/error.hpp"
#include "afdm/modem.hpp"

namespace afdm {
namespace {

// Incremental residual updates drift; rebuild the residual this often.
constexpr std::uint64_t kResidualRefresh = 4096;

std::uint64_t hypothesis_count(std::size_t q, std::size_t n, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (total > budget / q) return budget + 1;
    total *= q;
  }
  return total;
}

}  // namespace

DetectionResult detect_ml(const ComplexVector& y, const ComplexMatrix& h, Constellation c, std::uint64_t budget) {
  const auto n = static_cast<std::size_t>(h.cols());
  require(h.rows() == y.size(), "observation length does not match H_eff");
  const auto points = constellation_points(c);
  const std::size_t q = points.size();
  const std::uint64_t total = hypothesis_count(q, n, budget);
  if (total > budget) {
    throw BudgetExceeded("ML search over " + std::to_string(q) + "^" + std::to_string(n) +
                         " hypotheses exceeds the budget of " + std::to_string(budget) + "; use MMSE detection");
  }

  std::vector<std::size_t> idx(n, 0);
  ComplexVector x = ComplexVector::Constant(static_cast<Eigen::Index>(n), points[0]);
  ComplexVector residual = y - h * x;

  DetectionResult best;
  best.metric = std::numeric_limits<double>::infinity();
  for (std::uint64_t hyp = 0; hyp < total; ++hyp) {
    const double metric = residual.squaredNorm();
    if (metric < best.metric) {
      best.metric = metric;
      best.indices = idx;
    }
    if (hyp + 1 == total) break;
    // Advance the odometer; the last coordinate is the fastest digit.
    std::size_t k = n;
    while (k > 0) {
      --k;
      const std::size_t old = idx[k];
      idx[k] = (old + 1) % q;
      const cplx delta = points[idx[k]] - points[old];
      x(static_cast<Eigen::Index>(k)) = points[idx[k]];
      residual -= h.col(static_cast<Eigen::Index>(k)) * delta;
      if (idx[k] != 0) break;
    }
    if ((hyp + 1) % kResidualRefresh == 0) residual = y - h * x;
  }

  best.symbols.resize(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) best.symbols(static_cast<Eigen::Index>(k)) = points[best.indices[k]];
  // Report the exact metric of the winner rather than the incrementally tracked one.
  best.metric = (y - h * best.symbols).squaredNorm();
  return best;
}

DetectionResult detect_ml(const ComplexVector& y, const EffectiveChannel& e, Constellation c, std::uint64_t budget) {
  return detect_ml(y, e.h_eff, c, budget);
}

ComplexVector mmse_estimate(const ComplexVector& y, const ComplexMatrix& h, double n0) {
  require(h.rows() == y.size(), "observation length does not match H_eff");
  require(n0 > 0.0 && std::isfinite(n0), "MMSE noise power must be positive");
  ComplexMatrix gram = ComplexMatrix::Zero(h.rows(), h.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(h);
  gram.diagonal().array() += n0;
  const Eigen::LLT<ComplexMatrix, Eigen::Lower> chol(gram);
  if (chol.info() != Eigen::Success) {
    const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(ComplexMatrix(gram.selfadjointView<Eigen::Lower>())).singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    throw RuntimeError("MMSE Cholesky factorization failed (condition number " + std::to_string(cond) + ")");
  }
  return h.adjoint() * chol.solve(y);
}

DetectionResult detect_mmse(const ComplexVector& y, const ComplexMatrix& h, double n0, Constellation c) {
  const ComplexVector estimate = mmse_estimate(y, h, n0);
  const auto points = constellation_points(c);
  DetectionResult out;
  out.indices.resize(static_cast<std::size_t>(estimate.size()));
  out.symbols.resize(estimate.size());
  for (Eigen::Index k = 0; k < estimate.size(); ++k) {
    const std::size_t i = nearest_point(estimate(k), c);
    out.indices[static_cast<std::size_t>(k)] = i;
    out.symbols(k) = points[i];
  }
  out.metric = (y - h * estimate).norm();
  return out;
}

DetectionResult detect_mmse(const ComplexVector& y, const EffectiveChannel& e, double n0, Constellation c) {
  return detect_mmse(y, e.h_eff, n0, c);
}

}  // namespace afdm
