#pragma once

#include <functional>

#include "quantseg/types.hpp"

namespace quantseg {

// Comparison-study estimators.  All of them fit WITHOUT an intercept; the
// simulated designs have no intercept term and the original study ran the
// competitors that way.

struct LsAlassoConfig {
  double chi = 0.225;  // 9/40, weight exponent on the OLS pilot
  double weight_floor = 1e-10;
  double tol = 1e-10;  // max coefficient change per sweep
  int max_sweeps = 10000;
  std::function<double(Eigen::Index)> lambda_rule = [](Eigen::Index n) {
    return std::pow(static_cast<double>(n), 0.4);
  };
};

/// Least squares with adaptive lasso penalty,
///   min_phi sum_i (y_i - x_i' phi)^2 + lambda sum_j w_j |phi_j|,
/// w_j = max(|ols_j|, floor)^(-chi), lambda = lambda_rule(n).  Solved by
/// cyclic coordinate descent with exact per-coordinate soft thresholding.
FitResult fit_ls_alasso(const Dataset& data,
                        const LsAlassoConfig& config = {});

/// Quantile lasso pilot: uniform weights, multiplier log(n).
FitResult fit_qlasso(const Dataset& data, double tau);

/// Median regression with lasso-type weights ell_j = n^(2/5)/|qlasso_j|
/// (floored).  The reported objective is the absolute-value form
///   sum_i |y_i - x_i' phi| + sum_j ell_j |phi_j|,
/// which the tau = 1/2 check-loss solver minimizes up to the factor 1/2.
FitResult fit_lad_lassotype(const Dataset& data);

/// SCAD penalty p_lambda(|x|) with knot parameter a (> 2).
double scad_penalty_value(double x, double lambda, double a = 5.0);
/// Its derivative lambda 1{x <= lambda} + (a lambda - x)_+ / (a-1) 1{x > lambda}.
double scad_penalty_derivative(double x, double lambda, double a = 5.0);

struct ScadConfig {
  double a = 5.0;
  double weight_floor = 1e-10;  // floors |qlasso_j| in lambda_j = 1/|qlasso_j|
  double tol = 1e-8;            // max |phi change| between LLA iterates
  int max_iterations = 50;
};

struct ScadFit {
  FitResult fit;  // best iterate under the true SCAD objective
  VectorXd lambda;
  std::vector<double> objective_trace;  // true SCAD objective per iterate
};

/// SCAD-penalized quantile fit via local linear approximation started at the
/// qlasso pilot.  fit.converged records whether the iterates settled within
/// tol before the iteration cap; the returned coefficients are the best
/// iterate seen under the exact SCAD objective either way.
ScadFit fit_scad_lla_detail(const Dataset& data, double tau,
                            const ScadConfig& config = {});
FitResult fit_scad_lla(const Dataset& data, double tau,
                       const ScadConfig& config = {});

}  // namespace quantseg
