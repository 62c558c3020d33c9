#include "quantseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quantseg {

namespace {

std::vector<bool> zero_mask(const VectorXd& v, double tol) {
  const double scale = v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
  const double cut = tol * (1.0 + scale);
  std::vector<bool> mask(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) mask[j] = std::fabs(v[j]) <= cut;
  return mask;
}

}  // namespace

SelectionRates selection_rates(const VectorXd& estimate, const VectorXd& truth,
                               double zero_tol) {
  if (estimate.size() != truth.size())
    throw std::invalid_argument("estimate and truth lengths differ");
  const std::vector<bool> est_zero = zero_mask(estimate, zero_tol);
  const std::vector<bool> tru_zero = zero_mask(truth, zero_tol);

  int n_zero = 0, n_nonzero = 0, hit_zero = 0, miss_nonzero = 0;
  for (Eigen::Index j = 0; j < truth.size(); ++j) {
    if (tru_zero[j]) {
      ++n_zero;
      if (est_zero[j]) ++hit_zero;
    } else {
      ++n_nonzero;
      if (est_zero[j]) ++miss_nonzero;
    }
  }
  if (n_zero == 0 || n_nonzero == 0)
    throw std::invalid_argument(
        "selection rates need a truth with both zero and nonzero entries");
  return {static_cast<double>(hit_zero) / n_zero,
          static_cast<double>(miss_nonzero) / n_nonzero};
}

SpreadStats spread_stats(const std::vector<VectorXd>& estimates,
                         const VectorXd& truth, double zero_tol) {
  if (estimates.empty())
    throw std::invalid_argument("spread stats need at least one replication");
  const std::vector<bool> tru_zero = zero_mask(truth, zero_tol);
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < truth.size(); ++j)
    if (!tru_zero[j]) support.push_back(j);

  SpreadStats stats;
  if (support.empty()) return stats;

  for (const VectorXd& estimate : estimates) {
    if (estimate.size() != truth.size())
      throw std::invalid_argument("estimate and truth lengths differ");
    double sq = 0.0;
    for (Eigen::Index j : support) {
      const double d = estimate[j] - truth[j];
      stats.mean_diff += d;
      stats.mean_abs_diff += std::fabs(d);
      sq += d * d;
    }
    stats.msqe += sq;
  }
  const double m = static_cast<double>(estimates.size());
  const double cells = m * static_cast<double>(support.size());
  stats.mean_diff /= cells;
  stats.mean_abs_diff /= cells;
  stats.msqe /= m;
  return stats;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

int lower_median(std::vector<int> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

}  // namespace quantseg
