#include "quantseg/baselines.hpp"

#include <cmath>

#include "quantseg/check_loss.hpp"
#include "quantseg/qr_solver.hpp"

namespace quantseg {

namespace {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

VectorXd floored_abs(const VectorXd& v, double floor) {
  return v.cwiseAbs().cwiseMax(floor);
}

}  // namespace

double response_scale(const VectorXd& y) {
  if (y.size() < 2) return 1.0;
  const double mean = y.mean();
  const double var = (y.array() - mean).matrix().squaredNorm() /
                     static_cast<double>(y.size() - 1);
  return var > 0.0 ? std::sqrt(var) : 1.0;
}

FitResult fit_ls_alasso(const Dataset& data, const LsAlassoConfig& config) {
  data.validate();
  const Eigen::Index n = data.n(), p = data.p();

  const VectorXd ols = data.x.colPivHouseholderQr().solve(data.y);
  const VectorXd w =
      floored_abs(ols, config.weight_floor).array().pow(-config.chi);
  // the fit standardizes the response, which on the original scale turns the
  // multiplier into lambda * s^(1+chi); a fixed multiplier against an
  // unnormalized squared loss is not scale equivariant and drops the
  // published selection rates to coin flips
  const double lambda = config.lambda_rule(n) *
                        std::pow(response_scale(data.y), 1.0 + config.chi);

  const VectorXd col_sq = data.x.colwise().squaredNorm();
  VectorXd phi = VectorXd::Zero(p);
  VectorXd resid = data.y;
  bool converged = false;
  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq[j] <= 0.0) continue;  // degenerate all-zero column
      const double z = data.x.col(j).dot(resid) + col_sq[j] * phi[j];
      const double updated = soft_threshold(z, 0.5 * lambda * w[j]) / col_sq[j];
      const double delta = updated - phi[j];
      if (delta != 0.0) {
        resid -= delta * data.x.col(j);
        phi[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (max_change <= config.tol) {
      converged = true;
      break;
    }
  }

  FitResult out;
  out.coefficients = phi;
  out.objective = resid.squaredNorm() + lambda * w.dot(phi.cwiseAbs());
  out.active_set = active_set(phi);
  out.n_zero_residuals = count_zero_residuals(resid, data.y);
  out.converged = converged;
  return out;
}

FitResult fit_qlasso(const Dataset& data, double tau) {
  data.validate();
  const PenaltySpec penalty{std::log(static_cast<double>(data.n())),
                            VectorXd::Ones(data.p())};
  FitOptions opts;
  opts.intercept = false;
  return fit(data, tau, penalty, opts);
}

FitResult fit_lad_lassotype(const Dataset& data) {
  data.validate();
  const Eigen::Index n = data.n();
  const FitResult pilot = fit_qlasso(data, 0.5);

  const VectorXd ell = std::pow(static_cast<double>(n), 0.4) *
                       floored_abs(pilot.coefficients, 1e-10)
                           .array()
                           .inverse()
                           .matrix();
  // rho_{1/2}(r) = |r| / 2, so weights ell/2 make the LP minimize half the
  // absolute-value objective reported below
  const PenaltySpec penalty{0.5, ell};
  FitOptions opts;
  opts.intercept = false;
  FitResult out = fit(data, 0.5, penalty, opts);
  const VectorXd resid = data.y - data.x * out.coefficients;
  out.objective =
      resid.lpNorm<1>() + ell.dot(out.coefficients.cwiseAbs());
  return out;
}

double scad_penalty_value(double x, double lambda, double a) {
  x = std::abs(x);
  if (x <= lambda) return lambda * x;
  if (x <= a * lambda)
    return -(x * x - 2.0 * a * lambda * x + lambda * lambda) /
           (2.0 * (a - 1.0));
  return 0.5 * (a + 1.0) * lambda * lambda;
}

double scad_penalty_derivative(double x, double lambda, double a) {
  x = std::abs(x);
  if (x <= lambda) return lambda;
  return std::max(a * lambda - x, 0.0) / (a - 1.0);
}

ScadFit fit_scad_lla_detail(const Dataset& data, double tau,
                            const ScadConfig& config) {
  data.validate();
  const Eigen::Index p = data.p();

  const FitResult pilot = fit_qlasso(data, tau);
  const VectorXd lambda =
      floored_abs(pilot.coefficients, config.weight_floor)
          .array()
          .inverse()
          .matrix();

  const auto scad_objective = [&](const VectorXd& phi) {
    double pen = 0.0;
    for (Eigen::Index j = 0; j < p; ++j)
      pen += scad_penalty_value(phi[j], lambda[j], config.a);
    return check_loss_sum(data, 0.0, phi, tau) + pen;
  };

  FitOptions opts;
  opts.intercept = false;

  ScadFit out;
  out.lambda = lambda;

  VectorXd phi = pilot.coefficients;
  VectorXd best_phi = phi;
  double best_obj = scad_objective(phi);
  out.objective_trace.push_back(best_obj);

  bool converged = false;
  for (int it = 0; it < config.max_iterations; ++it) {
    VectorXd w(p);
    for (Eigen::Index j = 0; j < p; ++j)
      w[j] = scad_penalty_derivative(phi[j], lambda[j], config.a);
    const PenaltySpec penalty{1.0, w};
    const FitResult step = fit(data, tau, penalty, opts);

    const double change =
        (step.coefficients - phi).lpNorm<Eigen::Infinity>();
    phi = step.coefficients;
    const double obj = scad_objective(phi);
    out.objective_trace.push_back(obj);
    if (obj < best_obj) {
      best_obj = obj;
      best_phi = phi;
    }
    if (change <= config.tol) {
      converged = true;
      break;
    }
  }

  FitResult& fitted = out.fit;
  fitted.coefficients = best_phi;
  fitted.objective = best_obj;
  fitted.active_set = active_set(best_phi);
  const VectorXd resid = data.y - data.x * best_phi;
  fitted.n_zero_residuals = count_zero_residuals(resid, data.y);
  fitted.converged = converged;
  return out;
}

FitResult fit_scad_lla(const Dataset& data, double tau,
                       const ScadConfig& config) {
  return fit_scad_lla_detail(data, tau, config).fit;
}

}  // namespace quantseg
