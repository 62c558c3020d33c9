#include "quantseg/check_loss.hpp"

namespace quantseg {

double check_loss_sum(const Dataset& data, double b, const VectorXd& phi,
                      double tau) {
  if (phi.size() != data.p())
    throw std::invalid_argument("phi size does not match dataset p");
  QuantileLevel check_tau(tau);
  const VectorXd resid = data.y - VectorXd::Constant(data.n(), b) - data.x * phi;
  double s = 0.0;
  for (Eigen::Index i = 0; i < resid.size(); ++i) s += check_loss(resid[i], tau);
  return s;
}

double objective_value(const Dataset& data, double b, const VectorXd& phi,
                       double tau, const PenaltySpec& penalty) {
  penalty.validate(data.p());
  return check_loss_sum(data, b, phi, tau) +
         penalty.multiplier * penalty.weights.dot(phi.cwiseAbs());
}

}  // namespace quantseg
