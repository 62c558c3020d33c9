#include "quantseg/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "quantseg/baselines.hpp"
#include "quantseg/model_selection.hpp"
#include "quantseg/qr_solver.hpp"
#include "quantseg/segmentation.hpp"

namespace quantseg {

namespace {

const std::vector<std::pair<Method, std::string>> kMethodNames = {
    {Method::quantile, "quantile"},
    {Method::alasso_quantile, "alasso-quantile"},
    {Method::ls_alasso, "ls-alasso"},
    {Method::lad_lassotype, "lad-lassotype"},
    {Method::scad, "scad"},
};

Eigen::Index phase_count(const std::string& design) {
  if (design == "D1") return 1;
  if (design == "M2" || design == "M2-quantile-only") return 2;
  if (design == "M3" || design == "M3-equal12") return 3;
  throw std::invalid_argument("unknown design id: " + design);
}

std::string display_name(const MethodSpec& spec) {
  if (spec.method != Method::alasso_quantile) return method_name(spec.method);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "alasso-quantile(g=%g)", spec.g);
  return buf;
}

FitResult run_method(const MethodSpec& spec, const Dataset& data, double tau) {
  switch (spec.method) {
    case Method::quantile:
      return fit(data, tau, PenaltySpec::none(data.p()));
    case Method::alasso_quantile: {
      AdaptiveConfig cfg;
      cfg.g = spec.g;
      return fit_adaptive(data, tau, cfg);
    }
    case Method::ls_alasso:
      return fit_ls_alasso(data);
    case Method::lad_lassotype:
      return fit_lad_lassotype(data);
    case Method::scad:
      return fit_scad_lla(data, tau);
  }
  throw std::logic_error("unhandled method");
}

Report run_single_phase(const ExperimentConfig& config, const Design& design) {
  Report report;
  report.config = config;
  const VectorXd& truth = design.phases[0].phi;

  struct Accumulator {
    double true_zero = 0.0, false_zero = 0.0;
    std::vector<VectorXd> estimates;
    int failures = 0, non_converged = 0;
  };
  std::vector<Accumulator> acc(config.methods.size());

  for (int rep = 0; rep < config.reps; ++rep) {
    const Dataset data = generate(design, child_seed(config.seed, rep));
    for (size_t m = 0; m < config.methods.size(); ++m) {
      try {
        const FitResult fit = run_method(config.methods[m], data, config.tau);
        const SelectionRates rates = selection_rates(fit.coefficients, truth);
        acc[m].true_zero += rates.true_zero_rate;
        acc[m].false_zero += rates.false_zero_rate;
        acc[m].estimates.push_back(fit.coefficients);
        if (!fit.converged) ++acc[m].non_converged;
      } catch (const SolverError&) {
        ++acc[m].failures;
      }
    }
  }

  for (size_t m = 0; m < config.methods.size(); ++m) {
    MethodSummary summary;
    summary.method = display_name(config.methods[m]);
    const int ok = static_cast<int>(acc[m].estimates.size());
    if (ok > 0) {
      summary.rates = {acc[m].true_zero / ok, acc[m].false_zero / ok};
      summary.spread = spread_stats(acc[m].estimates, truth);
    }
    summary.failures = acc[m].failures;
    summary.non_converged = acc[m].non_converged;
    report.methods.push_back(std::move(summary));
  }
  return report;
}

Report run_multiphase(const ExperimentConfig& config, const Design& design) {
  Report report;
  report.config = config;
  const auto n_phases = static_cast<int>(design.phases.size());
  const int k_breaks =
      config.k_breaks < 0 ? n_phases - 1 : config.k_breaks;
  if (k_breaks != n_phases - 1)
    throw std::invalid_argument(
        "multiphase runs need k_breaks = phases - 1 for per-phase stats");

  SegmentationConfig seg_cfg;
  seg_cfg.tau = config.tau;

  VectorXd stacked_truth(design.p() * n_phases);
  for (int r = 0; r < n_phases; ++r)
    stacked_truth.segment(r * design.p(), design.p()) = design.phases[r].phi;

  std::vector<double> rate_true(n_phases, 0.0), rate_false(n_phases, 0.0);
  std::vector<std::vector<int>> breaks(k_breaks);
  std::vector<VectorXd> stacked_estimates;
  int failures = 0;

  for (int rep = 0; rep < config.reps; ++rep) {
    const Dataset data = generate(design, child_seed(config.seed, rep));
    Segmentation seg;
    try {
      seg = config.oracle_breaks
                ? refit_at_breaks(data, design.break_indices(), seg_cfg)
                : best_segmentation(data, k_breaks, seg_cfg);
    } catch (const SolverError&) {
      ++failures;
      continue;
    }
    VectorXd stacked(design.p() * n_phases);
    for (int r = 0; r < n_phases; ++r) {
      const VectorXd& coef = seg.segment_fits[r].coefficients;
      const SelectionRates rates =
          selection_rates(coef, design.phases[r].phi);
      rate_true[r] += rates.true_zero_rate;
      rate_false[r] += rates.false_zero_rate;
      stacked.segment(r * design.p(), design.p()) = coef;
    }
    for (int j = 0; j < k_breaks; ++j)
      breaks[j].push_back(seg.change_points[j]);
    stacked_estimates.push_back(std::move(stacked));
  }

  const int ok = config.reps - failures;
  if (ok > 0) {
    for (int r = 0; r < n_phases; ++r)
      report.multiphase.phase_rates.push_back(
          {rate_true[r] / ok, rate_false[r] / ok});
    for (int j = 0; j < k_breaks; ++j)
      report.multiphase.break_medians.push_back(lower_median(breaks[j]));
    report.multiphase.spread = spread_stats(stacked_estimates, stacked_truth);
  }
  report.multiphase.failures = failures;
  return report;
}

Report run_select_k(const ExperimentConfig& config, const Design& design) {
  Report report;
  report.config = config;
  report.select_k.k_histogram.assign(config.k_max + 1, 0);

  SelectionConfig sel_cfg;
  sel_cfg.segmentation.tau = config.tau;

  for (int rep = 0; rep < config.reps; ++rep) {
    const Dataset data = generate(design, child_seed(config.seed, rep));
    try {
      const SelectionResult r = select_k(data, config.k_max, sel_cfg);
      ++report.select_k.k_histogram[r.chosen_k];
    } catch (const SolverError&) {
      ++report.select_k.failures;
    }
  }
  return report;
}

}  // namespace

Method method_from_name(const std::string& name) {
  for (const auto& [method, label] : kMethodNames)
    if (label == name) return method;
  throw std::invalid_argument("unknown method: " + name);
}

const std::string& method_name(Method method) {
  for (const auto& [id, label] : kMethodNames)
    if (id == method) return label;
  throw std::logic_error("unnamed method");
}

void ExperimentConfig::validate() const {
  if (kind != "single-phase" && kind != "multiphase" && kind != "select-k")
    throw std::invalid_argument("unknown experiment kind: " + kind);
  const Eigen::Index phases = phase_count(design);
  if (static_cast<Eigen::Index>(laws.size()) != phases)
    throw std::invalid_argument(design + " needs " + std::to_string(phases) +
                                " error laws, got " +
                                std::to_string(laws.size()));
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("tau must sit inside (0, 1)");
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (kind == "single-phase" && methods.empty())
    throw std::invalid_argument("single-phase runs need at least one method");
  if (kind == "single-phase" && phases != 1)
    throw std::invalid_argument("single-phase runs need a one-phase design");
  if (kind == "multiphase" && phases < 2)
    throw std::invalid_argument("multiphase runs need a multiphase design");
  if (kind == "select-k" && k_max < 0)
    throw std::invalid_argument("k_max must be >= 0");
  if (n != -1 && design != "D1")
    throw std::invalid_argument("sample-size override only applies to D1");
  if (oracle_breaks && kind != "multiphase")
    throw std::invalid_argument("oracle_breaks only applies to multiphase");
  for (const std::string& law : laws) parse_error_law(law);  // throws if bad
}

Design resolve_design(const ExperimentConfig& config) {
  config.validate();
  std::vector<ErrorLaw> laws;
  laws.reserve(config.laws.size());
  for (const std::string& s : config.laws) laws.push_back(parse_error_law(s));

  if (config.design == "D1")
    return config.n > 0 ? design_d1(laws[0], config.n) : design_d1(laws[0]);
  if (config.design == "M2") return design_m2(laws[0], laws[1], true);
  if (config.design == "M2-quantile-only")
    return design_m2(laws[0], laws[1], false);
  Design d = design_m3(laws[0], laws[1], laws[2]);
  if (config.design == "M3-equal12") {
    d.name = "M3-equal12";
    d.phases[1].phi = d.phases[0].phi;
  }
  return d;
}

Report run_experiment(const ExperimentConfig& config) {
  const Design design = resolve_design(config);
  const auto start = std::chrono::steady_clock::now();

  Report report;
  if (config.kind == "single-phase")
    report = run_single_phase(config, design);
  else if (config.kind == "multiphase")
    report = run_multiphase(config, design);
  else
    report = run_select_k(config, design);

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::fprintf(stderr, "experiment %s: %d reps in %.1f s\n",
               config.name.empty() ? config.design.c_str()
                                   : config.name.c_str(),
               config.reps, secs);
  return report;
}

}  // namespace quantseg
