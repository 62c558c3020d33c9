#include "quantseg/adaptive_lasso.hpp"

#include <cmath>

namespace quantseg {

FitResult pilot_fit(const Dataset& data, double tau) {
  return fit(data, tau, PenaltySpec::none(data.p()));
}

VectorXd compute_weights(const VectorXd& phi_pilot, double g,
                         double weight_floor) {
  if (!(g > 0.0) || !(weight_floor > 0.0))
    throw std::invalid_argument("compute_weights: need g > 0 and floor > 0");
  VectorXd w(phi_pilot.size());
  for (Eigen::Index j = 0; j < phi_pilot.size(); ++j)
    w[j] = std::pow(std::max(std::abs(phi_pilot[j]), weight_floor), -g);
  return w;
}

AdaptiveFit fit_adaptive_detail(const Dataset& data, double tau,
                                const AdaptiveConfig& config) {
  config.validate();
  AdaptiveFit out;
  out.pilot = pilot_fit(data, tau);
  out.penalty.multiplier = config.lambda_rule(data.n());
  out.penalty.weights =
      compute_weights(out.pilot.coefficients, config.g, config.weight_floor);
  out.penalty.validate(data.p());
  out.fit = fit(data, tau, out.penalty);
  return out;
}

FitResult fit_adaptive(const Dataset& data, double tau,
                       const AdaptiveConfig& config) {
  return fit_adaptive_detail(data, tau, config).fit;
}

KktReport kkt_verify(const Dataset& data, double tau,
                     const PenaltySpec& penalty, const FitResult& fit) {
  QuantileLevel check_tau(tau);
  penalty.validate(data.p());
  if (fit.coefficients.size() != data.p())
    throw std::invalid_argument("kkt_verify: fit does not match dataset p");

  const VectorXd fitted = VectorXd::Constant(data.n(), fit.intercept) +
                          data.x * fit.coefficients;
  KktReport report;
  report.coefficients.resize(data.p());

  // rows whose residual is zero at the pinned tolerance contribute an
  // ambiguous indicator value, so they widen the acceptance band instead
  std::vector<bool> ambiguous(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i)
    ambiguous[i] = is_zero_residual(data.y[i] - fitted[i], data.y[i]);

  const std::vector<int> act = active_set(fit.coefficients);
  std::vector<bool> is_active(data.p(), false);
  for (int j : act) is_active[j] = true;

  for (Eigen::Index j = 0; j < data.p(); ++j) {
    auto& kc = report.coefficients[j];
    double score = 0.0;
    double slack = 1e-6;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const double xij = data.x(i, j);
      score += tau * xij;
      if (data.y[i] < fitted[i]) score -= xij;
      if (ambiguous[i]) slack += std::abs(xij);
    }
    kc.score = score;
    kc.bound = penalty.multiplier * penalty.weights[j];
    kc.slack_tolerance = slack;
    kc.active = is_active[j];
    if (kc.active) {
      const double sgn = fit.coefficients[j] > 0.0 ? 1.0 : -1.0;
      kc.satisfied = std::abs(score - kc.bound * sgn) <= slack;
    } else {
      kc.satisfied = std::abs(score) <= kc.bound + slack;
    }
    report.all_satisfied = report.all_satisfied && kc.satisfied;
  }
  return report;
}

}  // namespace quantseg
