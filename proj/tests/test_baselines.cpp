#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "quantseg/baselines.hpp"
#include "quantseg/check_loss.hpp"
#include "quantseg/qr_solver.hpp"
#include "quantseg/simulation.hpp"
#include "support/oracles.hpp"
#include "support/test_rng.hpp"

using namespace quantseg;
using testsupport::TestRng;

namespace {

Dataset random_instance(TestRng& rng, Eigen::Index n, Eigen::Index p,
                        double noise_sd = 1.0) {
  MatrixXd x(n, p);
  VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
    y[i] = rng.normal(0.0, noise_sd);
  }
  return Dataset(std::move(y), std::move(x));
}

struct ZeroRates {
  double true_zero = 0.0;   // share of truly-zero coefficients estimated zero
  double false_zero = 0.0;  // share of truly-nonzero coefficients estimated zero
};

template <typename Fitter>
ZeroRates d1_zero_rates(const ErrorLaw& law, int reps, std::uint64_t master,
                        Fitter&& fitter) {
  const Design d1 = design_d1(law);
  const VectorXd& truth = d1.phases[0].phi;
  int tz_hit = 0, tz_all = 0, fz_hit = 0, fz_all = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const Dataset data = generate(d1, child_seed(master, rep));
    const FitResult fit = fitter(data);
    for (Eigen::Index j = 0; j < truth.size(); ++j) {
      const bool est_zero =
          std::find(fit.active_set.begin(), fit.active_set.end(),
                    static_cast<int>(j)) == fit.active_set.end();
      if (truth[j] == 0.0) {
        ++tz_all;
        tz_hit += est_zero;
      } else {
        ++fz_all;
        fz_hit += est_zero;
      }
    }
  }
  return ZeroRates{static_cast<double>(tz_hit) / tz_all,
                   static_cast<double>(fz_hit) / fz_all};
}

}  // namespace

TEST_CASE("scad penalty worked values and knot continuity") {
  // lambda 1, a 5
  CHECK(scad_penalty_value(0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(scad_penalty_value(-0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(scad_penalty_value(2.0, 1.0) == doctest::Approx(1.875).epsilon(1e-12));
  CHECK(scad_penalty_value(10.0, 1.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(scad_penalty_derivative(0.5, 1.0) == 1.0);
  CHECK(scad_penalty_derivative(0.0, 1.0) == 1.0);
  CHECK(scad_penalty_derivative(2.0, 1.0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(scad_penalty_derivative(10.0, 1.0) == 0.0);

  // continuity at both knots and derivative consistency by central difference
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double knot : {lambda, 5.0 * lambda}) {
      CHECK(scad_penalty_value(knot - 1e-9, lambda) ==
            doctest::Approx(scad_penalty_value(knot + 1e-9, lambda))
                .epsilon(1e-6));
    }
    for (double x : {0.2, 0.9, 1.7, 3.3, 4.9, 7.0}) {
      const double h = 1e-6;
      const double fd = (scad_penalty_value(x * lambda + h, lambda) -
                         scad_penalty_value(x * lambda - h, lambda)) /
                        (2.0 * h);
      CHECK(fd == doctest::Approx(scad_penalty_derivative(x * lambda, lambda))
                      .epsilon(1e-4));
    }
  }

  // concavity of the penalty in |x|: derivative nonincreasing
  double prev = scad_penalty_derivative(0.0, 1.3);
  for (double x = 0.05; x < 9.0; x += 0.05) {
    const double cur = scad_penalty_derivative(x, 1.3);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

namespace {

// the estimator standardizes the response: effective multiplier on the
// original scale is lambda_rule(n) * sd(y)^(1+chi)
double ls_effective_lambda(const Dataset& data) {
  const double mean = data.y.mean();
  const double sd = std::sqrt((data.y.array() - mean).matrix().squaredNorm() /
                              static_cast<double>(data.n() - 1));
  return std::pow(static_cast<double>(data.n()), 0.4) * std::pow(sd, 1.225);
}

}  // namespace

TEST_CASE("ls alasso single column has the closed soft-threshold solution") {
  TestRng rng(5);
  for (int inst = 0; inst < 20; ++inst) {
    const Eigen::Index n = 30;
    MatrixXd x(n, 1);
    VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, 0) = rng.normal();
      y[i] = 0.8 * x(i, 0) + rng.normal();
    }
    const Dataset data(y, x);
    const FitResult fit = fit_ls_alasso(data);
    CHECK(fit.converged);

    const double ols = x.col(0).dot(y) / x.col(0).squaredNorm();
    const double w = std::pow(std::max(std::abs(ols), 1e-10), -0.225);
    const double z = x.col(0).dot(y);
    const double gamma = 0.5 * ls_effective_lambda(data) * w;
    const double closed =
        (z > gamma ? z - gamma : (z < -gamma ? z + gamma : 0.0)) /
        x.col(0).squaredNorm();
    CHECK(fit.coefficients[0] == doctest::Approx(closed).epsilon(1e-9));

    // brute-force grid oracle over the 1-d objective
    const auto objective = [&](double phi) {
      return (y - x.col(0) * phi).squaredNorm() +
             ls_effective_lambda(data) * w * std::abs(phi);
    };
    const double grid_best = testsupport::grid_argmin(objective, -3.0, 3.0, 60000);
    CHECK(objective(fit.coefficients[0]) <= objective(grid_best) + 1e-9);
  }
}

TEST_CASE("ls alasso minimizes its objective against probes and grid") {
  TestRng rng(15);
  for (int inst = 0; inst < 10; ++inst) {
    const Dataset data = random_instance(rng, 40, 3);
    const FitResult fit = fit_ls_alasso(data);
    REQUIRE(fit.converged);

    const VectorXd ols = data.x.colPivHouseholderQr().solve(data.y);
    const VectorXd w = ols.cwiseAbs().cwiseMax(1e-10).array().pow(-0.225);
    const double lambda = ls_effective_lambda(data);
    const auto objective = [&](const VectorXd& phi) {
      return (data.y - data.x * phi).squaredNorm() +
             lambda * w.dot(phi.cwiseAbs());
    };
    const double at_fit = objective(fit.coefficients);
    CHECK(at_fit == doctest::Approx(fit.objective).epsilon(1e-10));
    for (int probe = 0; probe < 200; ++probe) {
      VectorXd phi = fit.coefficients;
      for (Eigen::Index j = 0; j < 3; ++j) phi[j] += rng.normal(0.0, 0.05);
      CHECK(objective(phi) >= at_fit - 1e-9);
    }
  }
}

TEST_CASE("ls alasso with zero penalty returns ordinary least squares") {
  TestRng rng(25);
  const Dataset data = random_instance(rng, 50, 4);
  LsAlassoConfig cfg;
  cfg.lambda_rule = [](Eigen::Index) { return 0.0; };
  const FitResult fit = fit_ls_alasso(data, cfg);
  const VectorXd ols = data.x.colPivHouseholderQr().solve(data.y);
  CHECK((fit.coefficients - ols).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("qlasso shrinks relative to the unpenalized fit") {
  TestRng rng(35);
  MatrixXd x(60, 3);
  VectorXd y(60);
  for (Eigen::Index i = 0; i < 60; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) x(i, j) = rng.normal();
    y[i] = 2.0 * x(i, 0) - 1.0 * x(i, 1) + rng.normal();
  }
  const Dataset data(y, x);

  const FitResult penalized = fit_qlasso(data, 0.5);
  FitOptions no_intercept;
  no_intercept.intercept = false;
  const FitResult free_fit =
      fit(data, 0.5, PenaltySpec::none(3), no_intercept);
  CHECK(penalized.coefficients.lpNorm<1>() <=
        free_fit.coefficients.lpNorm<1>() + 1e-9);
  CHECK(penalized.intercept == 0.0);

  // optimality of the qlasso vertex under its own objective
  const PenaltySpec penalty{std::log(60.0), VectorXd::Ones(3)};
  const double at_fit =
      objective_value(data, 0.0, penalized.coefficients, 0.5, penalty);
  CHECK(at_fit == doctest::Approx(penalized.objective).epsilon(1e-10));
  for (int probe = 0; probe < 300; ++probe) {
    VectorXd phi = penalized.coefficients;
    for (Eigen::Index j = 0; j < 3; ++j) phi[j] += rng.normal(0.0, 0.1);
    CHECK(objective_value(data, 0.0, phi, 0.5, penalty) >= at_fit - 1e-9);
  }
}

TEST_CASE("lad lassotype reports the absolute-value objective and minimizes it") {
  TestRng rng(45);
  for (int inst = 0; inst < 8; ++inst) {
    const Dataset data = random_instance(rng, 50, 4);
    const FitResult fit = fit_lad_lassotype(data);

    const FitResult pilot = fit_qlasso(data, 0.5);
    const VectorXd ell = std::pow(50.0, 0.4) *
                         pilot.coefficients.cwiseAbs()
                             .cwiseMax(1e-10)
                             .array()
                             .inverse()
                             .matrix();
    const auto objective = [&](const VectorXd& phi) {
      return (data.y - data.x * phi).lpNorm<1>() + ell.dot(phi.cwiseAbs());
    };
    const double at_fit = objective(fit.coefficients);
    CHECK(at_fit == doctest::Approx(fit.objective).epsilon(1e-9));

    // directional probes around the vertex, dense enough to catch a wrong
    // weight convention (doubling instead of halving moves the minimizer)
    for (int probe = 0; probe < 300; ++probe) {
      VectorXd phi = fit.coefficients;
      for (Eigen::Index j = 0; j < 4; ++j) phi[j] += rng.normal(0.0, 0.02);
      CHECK(objective(phi) >= at_fit - 1e-9);
    }
    for (Eigen::Index j = 0; j < 4; ++j) {
      for (double step : {1e-4, -1e-4, 1e-2, -1e-2}) {
        VectorXd phi = fit.coefficients;
        phi[j] += step;
        CHECK(objective(phi) >= at_fit - 1e-9);
      }
    }
  }
}

TEST_CASE("scad lla descends its exact objective and flags convergence") {
  TestRng rng(55);
  for (int inst = 0; inst < 10; ++inst) {
    const Dataset data = random_instance(rng, 40, 4);
    const ScadFit res = fit_scad_lla_detail(data, 0.5);
    REQUIRE(res.objective_trace.size() >= 2);
    for (size_t i = 1; i < res.objective_trace.size(); ++i)
      CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-7);
    CHECK(res.fit.converged);
    CHECK(res.fit.objective ==
          doctest::Approx(
              *std::min_element(res.objective_trace.begin(),
                                res.objective_trace.end()))
              .epsilon(1e-12));
  }

  // iteration cap of zero cannot converge and must still return the pilot
  const Dataset data = random_instance(rng, 30, 3);
  ScadConfig cramped;
  cramped.max_iterations = 0;
  const ScadFit res = fit_scad_lla_detail(data, 0.5, cramped);
  CHECK(!res.fit.converged);
  CHECK(res.objective_trace.size() == 1);
}

TEST_CASE("scad lla on noiseless data recovers the support") {
  TestRng rng(65);
  const Eigen::Index n = 60, p = 5;
  MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
  const VectorXd phi0{{3.0, 0.0, -2.0, 0.0, 1.5}};
  const Dataset data(x * phi0, x);

  const FitResult fit = fit_scad_lla(data, 0.5);
  CHECK(fit.active_set == std::vector<int>{0, 2, 4});
  CHECK((fit.coefficients - phi0).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("baseline selection rates on the single-phase design") {
  // desk-scale versions of the comparison study, generous bands
  const int reps = 40;

  SUBCASE("least squares variant is sharp under normal errors") {
    const ZeroRates r =
        d1_zero_rates(normal_law(0, 1), reps, 9001,
                      [](const Dataset& d) { return fit_ls_alasso(d); });
    CHECK(r.true_zero >= 0.9);
    CHECK(r.false_zero <= 0.05);
  }

  SUBCASE("least squares variant degrades under cauchy errors") {
    const ZeroRates r =
        d1_zero_rates(cauchy_law(0, 1), reps, 9002,
                      [](const Dataset& d) { return fit_ls_alasso(d); });
    CHECK(r.true_zero <= 0.7);
  }

  SUBCASE("lad lassotype is sharp under normal errors") {
    const ZeroRates r =
        d1_zero_rates(normal_law(0, 1), reps, 9003,
                      [](const Dataset& d) { return fit_lad_lassotype(d); });
    CHECK(r.true_zero >= 0.9);
    CHECK(r.false_zero <= 0.05);
  }

  SUBCASE("lad lassotype loses ground under shifted exponential errors") {
    const ZeroRates r =
        d1_zero_rates(shifted_exponential_law(-4.5), reps, 9004,
                      [](const Dataset& d) { return fit_lad_lassotype(d); });
    CHECK(r.true_zero <= 0.85);
    CHECK(r.false_zero <= 0.05);
  }

  SUBCASE("scad screens but stays below the adaptive quantile method") {
    // the published 0.55 is indistinguishable from the bare qlasso pilot
    // (0.52 here) and reflects that study's solver failures; a clean LLA
    // lands near 0.89, still clearly below the adaptive method's ~1.0
    const ZeroRates r =
        d1_zero_rates(normal_law(0, 1), reps, 9005,
                      [](const Dataset& d) { return fit_scad_lla(d, 0.5); });
    MESSAGE("scad normal true-zero rate: ", r.true_zero);
    CHECK(r.true_zero >= 0.35);
    CHECK(r.true_zero <= 0.97);
    CHECK(r.false_zero <= 0.05);
  }

  SUBCASE("scad under cauchy errors reports its non-convergence rate") {
    const Design d1 = design_d1(cauchy_law(0, 1));
    int failed = 0;
    for (int rep = 0; rep < reps; ++rep) {
      const Dataset data = generate(d1, child_seed(9006, rep));
      try {
        if (!fit_scad_lla(data, 0.5).converged) ++failed;
      } catch (const SolverError&) {
        ++failed;
      }
    }
    MESSAGE("scad cauchy non-converged fraction: ",
            static_cast<double>(failed) / reps);
    CHECK(failed >= 0);
  }
}
