#include "quantseg/model_selection.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace quantseg {

namespace {
constexpr double kSHatFloor = 1e-12;
}

SelectionConfig::SelectionConfig()
    : penalty_sequence([](Eigen::Index n) {
        return std::pow(static_cast<double>(n), 0.625);
      }),
      complexity([](int k) { return static_cast<double>(k); }) {}

void SelectionConfig::validate(Eigen::Index n) const {
  if (!penalty_sequence || !complexity)
    throw std::invalid_argument("selection config needs both rule functions");
  if (n <= 1) return;
  const double bn = penalty_sequence(n);
  if (!(bn > 0.0))
    throw std::invalid_argument("penalty sequence must be positive");
  if (bn <= std::sqrt(static_cast<double>(n)))
    std::fprintf(stderr,
                 "warning: B_n = %g at n = %lld is below sqrt(n); the "
                 "criterion may under-penalize\n",
                 bn, static_cast<long long>(n));
  if (bn >= static_cast<double>(n))
    std::fprintf(stderr,
                 "warning: B_n = %g at n = %lld is at least n; the criterion "
                 "may never add a break\n",
                 bn, static_cast<long long>(n));
}

double criterion_value(Eigen::Index n, double s_hat, int k_breaks,
                       const std::function<double(int)>& complexity,
                       double penalty_n) {
  if (!(s_hat > 0.0))
    throw std::invalid_argument("criterion needs s_hat > 0");
  return static_cast<double>(n) * std::log(s_hat) +
         complexity(k_breaks) * penalty_n;
}

double criterion_value(Eigen::Index n, double s_hat, int k_breaks) {
  return criterion_value(
      n, s_hat, k_breaks, [](int k) { return static_cast<double>(k); },
      std::pow(static_cast<double>(n), 0.625));
}

SelectionResult select_k(SegmentCostTable& table, int k_max,
                         const SelectionConfig& config) {
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  const Eigen::Index n = table.n();
  config.validate(n);
  const double penalty_n = config.penalty_sequence(n);

  SegmentDp dp(table, k_max);

  SelectionResult result;
  result.trace.rows.reserve(k_max + 1);
  double best_b = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= k_max; ++k) {
    CriterionRow row;
    row.k = k;
    row.feasible = dp.feasible(k);
    if (!row.feasible) {
      std::fprintf(stderr,
                   "warning: K = %d infeasible (n = %lld, min_len = %lld), "
                   "skipped\n",
                   k, static_cast<long long>(n),
                   static_cast<long long>(table.min_len()));
      row.s_hat = std::numeric_limits<double>::quiet_NaN();
      row.b_value = std::numeric_limits<double>::infinity();
      result.trace.rows.push_back(row);
      continue;
    }
    double s_hat = dp.total_cost(k) / static_cast<double>(n);
    if (s_hat < kSHatFloor) {
      std::fprintf(stderr,
                   "warning: near-perfect fit at K = %d (s_hat = %g), floored "
                   "at %g\n",
                   k, s_hat, kSHatFloor);
      s_hat = kSHatFloor;
    }
    row.s_hat = s_hat;
    row.b_value = criterion_value(n, s_hat, k, config.complexity, penalty_n);
    result.trace.rows.push_back(row);
    if (row.b_value < best_b) {  // strict: exact ties keep the smaller K
      best_b = row.b_value;
      result.chosen_k = k;
    }
  }
  if (!std::isfinite(best_b))
    throw std::invalid_argument("no feasible K in 0.." + std::to_string(k_max));
  result.trace.chosen_k = result.chosen_k;

  result.best =
      result.chosen_k == 0
          ? best_segmentation(table, 0)
          : refit_at_breaks(table, dp.change_points(result.chosen_k));
  return result;
}

SelectionResult select_k(const Dataset& data, int k_max,
                         const SelectionConfig& config) {
  SegmentCostTable table(data, config.segmentation);
  return select_k(table, k_max, config);
}

}  // namespace quantseg
