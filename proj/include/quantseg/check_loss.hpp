#pragma once

#include "quantseg/types.hpp"

namespace quantseg {

/// Check loss rho_tau(r) = r * (tau * 1{r>0} - (1-tau) * 1{r<=0}).
/// Piecewise linear, nonnegative, zero exactly at r = 0.
inline double check_loss(double r, double tau) {
  return r > 0.0 ? tau * r : (tau - 1.0) * r;
}

/// sum_i rho_tau(y_i - b - x_i' phi), no penalty.
double check_loss_sum(const Dataset& data, double b, const VectorXd& phi,
                      double tau);

/// Penalized objective sum_i rho_tau(y_i - b - x_i' phi) + lambda * w'|phi|.
double objective_value(const Dataset& data, double b, const VectorXd& phi,
                       double tau, const PenaltySpec& penalty);

}  // namespace quantseg
