#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quantseg/adaptive_lasso.hpp"
#include "quantseg/metrics.hpp"
#include "quantseg/simulation.hpp"
#include "quantseg/types.hpp"

namespace quantseg {

enum class Method { quantile, alasso_quantile, ls_alasso, lad_lassotype, scad };

Method method_from_name(const std::string& name);  // throws on unknown names
const std::string& method_name(Method method);

struct MethodSpec {
  Method method = Method::alasso_quantile;
  double g = kWeightExponentG1;  // weight exponent, used by alasso-quantile
};

/// One Monte Carlo study. kind picks the pipeline:
///   "single-phase": generate -> one fit per method -> selection/spread stats
///   "multiphase":   generate -> K-break segmentation -> per-phase stats
///   "select-k":     generate -> criterion over K = 0..k_max -> histogram
/// Multiphase pipelines always use the adaptive-LASSO quantile fit.
struct ExperimentConfig {
  std::string name;
  std::string kind = "single-phase";
  std::string design = "D1";  // D1, M2, M2-quantile-only, M3, M3-equal12
  std::vector<std::string> laws;  // shorthand, one entry per design phase
  std::vector<MethodSpec> methods;  // single-phase only
  double tau = 0.5;
  int reps = 50;
  std::uint64_t seed = 0;
  int k_breaks = -1;    // multiphase: breaks to fit; -1 means phases - 1
  int k_max = 3;        // select-k: largest K probed
  Eigen::Index n = -1;  // D1 only: sample-size override
  bool oracle_breaks = false;  // multiphase: refit at the design's true
                               // breaks instead of estimating them

  void validate() const;
};

/// Builds the catalog design named by the config with its laws filled in.
Design resolve_design(const ExperimentConfig& config);

struct MethodSummary {
  std::string method;    // display name; alasso-quantile carries its g
  SelectionRates rates;  // averaged over successful replications
  SpreadStats spread;    // pooled over successful replications
  int failures = 0;       // replications that threw a solver error
  int non_converged = 0;  // fits that returned converged = false
};

struct MultiphaseSummary {
  std::vector<SelectionRates> phase_rates;  // per phase, averaged
  std::vector<int> break_medians;           // lower medians of estimates
  SpreadStats spread;  // pooled across phases and replications
  int failures = 0;
};

struct SelectKSummary {
  std::vector<int> k_histogram;  // counts of chosen K, index 0..k_max
  int failures = 0;
};

struct Report {
  ExperimentConfig config;
  std::vector<MethodSummary> methods;  // single-phase
  MultiphaseSummary multiphase;        // multiphase
  SelectKSummary select_k;             // select-k
};

/// Runs the study. Replication r draws its data from child_seed(seed, r), so
/// the report depends only on the config; wall time goes to stderr, never
/// into the report. Per-replication solver failures are counted, not fatal.
Report run_experiment(const ExperimentConfig& config);

}  // namespace quantseg
