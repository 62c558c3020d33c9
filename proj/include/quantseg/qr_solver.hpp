#pragma once

#include "quantseg/simplex.hpp"
#include "quantseg/types.hpp"

namespace quantseg {

struct FitOptions {
  bool intercept = true;  // baselines from the comparison study fit without one
  int max_pivots = -1;    // < 0 picks the default cap 50 * (n + p)
};

/// Penalized quantile fit.  Exact LP solution; throws SolverError when the
/// simplex hits its pivot cap (degeneracy) instead of returning garbage.
FitResult fit(const Dataset& data, double tau, const PenaltySpec& penalty,
              const FitOptions& options = {});

/// Same fit restricted to the contiguous observation range (l, k], given
/// 0-based as rows [l, k).  Requires k - l >= p + 2.
FitResult fit_subsample(const Dataset& data, double tau,
                        const PenaltySpec& penalty, Eigen::Index l,
                        Eigen::Index k, const FitOptions& options = {});

/// Low-level access to the LP vertex (split variables and residual parts).
LpSolution solve_lp(const Dataset& data, double tau, const PenaltySpec& penalty,
                    bool intercept = true, int max_pivots = -1);

/// Builds the FitResult bookkeeping (objective recomputed through
/// objective_value, active set and zero-residual count at the pinned
/// tolerances) from a solved LP.
FitResult make_fit_result(const Dataset& data, double tau,
                          const PenaltySpec& penalty, const LpSolution& sol);

}  // namespace quantseg
