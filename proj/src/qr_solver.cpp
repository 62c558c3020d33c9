#include "quantseg/qr_solver.hpp"

#include "quantseg/check_loss.hpp"

namespace quantseg {

LpSolution solve_lp(const Dataset& data, double tau, const PenaltySpec& penalty,
                    bool intercept, int max_pivots) {
  data.validate();
  penalty.validate(data.p());
  SimplexSolver solver(data, tau, intercept);
  if (penalty.multiplier > 0.0)
    solver.set_penalty(penalty.multiplier, penalty.weights);
  return solver.solve(max_pivots);
}

FitResult make_fit_result(const Dataset& data, double tau,
                          const PenaltySpec& penalty, const LpSolution& sol) {
  if (sol.status == LpStatus::iteration_limit)
    throw SolverError(
        "simplex iteration limit exceeded (degenerate problem; consider "
        "perturbing the data)");
  if (sol.status == LpStatus::unbounded)
    throw SolverError("quantile LP reported unbounded, which indicates invalid input");

  FitResult fr;
  fr.intercept = sol.b;
  fr.coefficients = sol.phi_plus - sol.phi_minus;
  fr.objective = objective_value(data, fr.intercept, fr.coefficients, tau, penalty);
  fr.active_set = active_set(fr.coefficients);
  const VectorXd resid = data.y - VectorXd::Constant(data.n(), fr.intercept) -
                         data.x * fr.coefficients;
  fr.n_zero_residuals = count_zero_residuals(resid, data.y);
  return fr;
}

FitResult fit(const Dataset& data, double tau, const PenaltySpec& penalty,
              const FitOptions& options) {
  const LpSolution sol =
      solve_lp(data, tau, penalty, options.intercept, options.max_pivots);
  return make_fit_result(data, tau, penalty, sol);
}

FitResult fit_subsample(const Dataset& data, double tau,
                        const PenaltySpec& penalty, Eigen::Index l,
                        Eigen::Index k, const FitOptions& options) {
  if (!(0 <= l && l < k && k <= data.n()))
    throw std::invalid_argument("fit_subsample: invalid range");
  if (k - l < data.p() + 2)
    throw std::invalid_argument("fit_subsample: segment too short (need k - l >= p + 2)");
  return fit(data.rows(l, k), tau, penalty, options);
}

}  // namespace quantseg
