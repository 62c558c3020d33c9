#pragma once

#include <functional>
#include <vector>

#include "quantseg/segmentation.hpp"
#include "quantseg/types.hpp"

namespace quantseg {

/// Settings for picking the number of change points.
///
/// The criterion is B(K) = n log(s_hat_K) + G(K) B_n with s_hat_K the
/// per-observation total cost of the best K-break segmentation. Defaults:
/// G(K) = K and B_n = n^(5/8). The consistency argument behind the rule
/// wants sqrt(n) << B_n << n; validate() warns on stderr when the
/// configured rule leaves that window at the given n, but does not refuse,
/// since the requirement is asymptotic.
struct SelectionConfig {
  SegmentationConfig segmentation{};
  std::function<double(Eigen::Index)> penalty_sequence;  // B_n as a function of n
  std::function<double(int)> complexity;                 // G(K)

  SelectionConfig();
  void validate(Eigen::Index n) const;
};

double criterion_value(Eigen::Index n, double s_hat, int k_breaks,
                       const std::function<double(int)>& complexity,
                       double penalty_n);
/// Default rule: n log(s_hat) + K n^(5/8). Throws on s_hat <= 0; the caller
/// is expected to floor degenerate fits at 1e-12 first (select_k does).
double criterion_value(Eigen::Index n, double s_hat, int k_breaks);

struct CriterionRow {
  int k = 0;
  bool feasible = false;
  double s_hat = 0.0;   // NaN when infeasible
  double b_value = 0.0; // +inf when infeasible
};

struct CriterionTrace {
  std::vector<CriterionRow> rows;  // one per K in 0..k_max
  int chosen_k = -1;
};

struct SelectionResult {
  int chosen_k = 0;
  CriterionTrace trace;
  Segmentation best;
};

/// Evaluates B(K) for every K in 0..k_max and returns the arg min together
/// with the full trace and the winning segmentation. Exact ties go to the
/// smaller K. Infeasible K (n too short for K+1 segments of min_len) are
/// skipped with a stderr warning and show up as infeasible trace rows.
SelectionResult select_k(const Dataset& data, int k_max,
                         const SelectionConfig& config = {});
/// Same, sharing a caller-owned cost table. The table's own segmentation
/// settings apply; config.segmentation is ignored on this overload.
SelectionResult select_k(SegmentCostTable& table, int k_max,
                         const SelectionConfig& config = {});

}  // namespace quantseg
