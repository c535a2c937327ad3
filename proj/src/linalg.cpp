#include "afdm/linalg.hpp"

#include <algorithm>
#include <limits>

namespace afdm {

RankInfo numerical_rank(const ComplexMatrix& m) {
  RankInfo info;
  if (m.size() == 0) return info;
  info.singular_values = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  info.largest = info.singular_values.size() > 0 ? info.singular_values(0) : 0.0;
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                     std::numeric_limits<double>::epsilon() * info.largest;
  for (Eigen::Index k = 0; k < info.singular_values.size(); ++k) {
    if (info.singular_values(k) > tol && info.singular_values(k) > 0.0) {
      ++info.rank;
      info.smallest_nonzero = info.singular_values(k);
    }
  }
  return info;
}

}  // namespace afdm
