#pragma once

#include <vector>

#include "quantseg/types.hpp"

namespace quantseg {

struct SelectionRates {
  double true_zero_rate = 0.0;   // share of truth's zeros estimated as zero
  double false_zero_rate = 0.0;  // share of truth's nonzeros estimated as zero
};

/// Counts against the truth's support. A coordinate counts as zero under the
/// usual relative rule |v_j| <= tol * (1 + max|v|). Throws when the truth is
/// all zero or all nonzero, since one of the two rates would be 0/0.
SelectionRates selection_rates(const VectorXd& estimate, const VectorXd& truth,
                               double zero_tol = kCoefZeroTol);

struct SpreadStats {
  double mean_diff = 0.0;      // mean of (estimate - truth) over A0 and reps
  double mean_abs_diff = 0.0;  // same with absolute differences
  double msqe = 0.0;           // (1/M) sum_m ||(estimate_m - truth)_A0||^2
};

/// Error statistics restricted to A0, the truth's nonzero coordinates,
/// pooled over replications. All zero truth gives all-zero stats.
SpreadStats spread_stats(const std::vector<VectorXd>& estimates,
                         const VectorXd& truth,
                         double zero_tol = kCoefZeroTol);

/// Element at sorted index (m-1)/2: the lower median, deterministic for
/// even-length inputs.
double lower_median(std::vector<double> values);
int lower_median(std::vector<int> values);

}  // namespace quantseg
