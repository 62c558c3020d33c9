#pragma once

#include <vector>

#include "quantseg/adaptive_lasso.hpp"
#include "quantseg/types.hpp"

namespace quantseg {

/// max(p+2, ceil(n^0.51)): a phase must be long enough for its own LP
/// (p+2 interpolation points) and for the length >= n^a, a > 1/2 assumption
/// behind the change-point asymptotics.
Eigen::Index default_min_len(Eigen::Index n, Eigen::Index p);

struct SegmentationConfig {
  double tau = 0.55;          // multiphase experiments in the study use 0.55
  AdaptiveConfig adaptive{};  // lambda_rule is applied to the SEGMENT length
  Eigen::Index min_len = -1;  // < 0 picks default_min_len(n, p)
};

/// Memoized per-segment costs.  cost(l, k) is the achieved objective of the
/// adaptive fit on rows [l, k): pilot fit, weights from the segment's own
/// pilot, multiplier lambda_rule(k - l).  Entries are computed on demand;
/// build_all() fills every admissible entry with the warm-start sweep
/// (shared pilot bases along k), which is what the full DP wants.
class SegmentCostTable {
 public:
  SegmentCostTable(Dataset data, const SegmentationConfig& config = {});

  Eigen::Index n() const { return data_.n(); }
  Eigen::Index min_len() const { return min_len_; }
  const Dataset& data() const { return data_; }
  const SegmentationConfig& config() const { return config_; }

  bool admissible(Eigen::Index l, Eigen::Index k) const {
    return 0 <= l && k <= n() && k - l >= min_len_;
  }
  double cost(Eigen::Index l, Eigen::Index k);
  const FitResult& fit(Eigen::Index l, Eigen::Index k);

  void build_all();

 private:
  size_t slot(Eigen::Index l, Eigen::Index k) const {
    return static_cast<size_t>(l) * static_cast<size_t>(n() + 1) +
           static_cast<size_t>(k);
  }
  void require_admissible(Eigen::Index l, Eigen::Index k) const;
  void store(Eigen::Index l, Eigen::Index k, FitResult fit);

  Dataset data_;
  SegmentationConfig config_;
  Eigen::Index min_len_;
  bool built_all_ = false;
  std::vector<char> have_;
  std::vector<FitResult> fits_;
};

/// Exact minimization of the segmented objective over change-point vectors
/// by dynamic programming on prefixes: best cost of covering [0, m) with j
/// segments.  Ties in the argmin take the smallest split index.  Running the
/// DP once answers every K from 0 up to max_breaks.
class SegmentDp {
 public:
  SegmentDp(SegmentCostTable& table, int max_breaks);

  int max_breaks() const { return max_breaks_; }
  bool feasible(int k_breaks) const;
  double total_cost(int k_breaks) const;
  std::vector<int> change_points(int k_breaks) const;

 private:
  void require_feasible(int k_breaks) const;

  Eigen::Index n_;
  Eigen::Index min_len_;
  int max_breaks_;
  MatrixXd best_;        // (max_breaks+1) x (n+1); row j = j+1 segments
  Eigen::MatrixXi arg_;  // argmin split for reconstruction
};

/// A fitted multiphase model: K change points (prefix end indices, so
/// segment r covers rows [l_{r-1}, l_r) with l_0 = 0, l_{K+1} = n) plus the
/// K+1 per-segment adaptive fits.  total_objective is the left-to-right sum
/// of the segment costs.
struct Segmentation {
  std::vector<int> change_points;
  std::vector<FitResult> segment_fits;
  double total_objective = 0.0;
};

/// Global minimizer over all admissible K-break vectors.  K = 0 wraps the
/// full-sample adaptive fit.  Throws std::invalid_argument when n is too
/// short for K+1 segments of min_len.
Segmentation best_segmentation(const Dataset& data, int k_breaks,
                               const SegmentationConfig& config = {});
Segmentation best_segmentation(SegmentCostTable& table, int k_breaks);

/// Per-segment adaptive fits at fixed break locations, e.g. the true breaks
/// of a simulated design.  Validates admissibility against min_len.
Segmentation refit_at_breaks(const Dataset& data,
                             const std::vector<int>& change_points,
                             const SegmentationConfig& config = {});
Segmentation refit_at_breaks(SegmentCostTable& table,
                             const std::vector<int>& change_points);

}  // namespace quantseg
