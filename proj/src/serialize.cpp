#include "quantseg/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace quantseg {

namespace {

json vector_to_json(const VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

VectorXd vector_from_json(const json& j) {
  VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

// fixed decimal formatting keeps CSV output byte-stable across runs
std::string fmt(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

json to_json(const FitResult& fit) {
  return json{{"intercept", fit.intercept},
              {"coefficients", vector_to_json(fit.coefficients)},
              {"objective", fit.objective},
              {"active_set", fit.active_set},
              {"n_zero_residuals", fit.n_zero_residuals},
              {"converged", fit.converged}};
}

FitResult fit_result_from_json(const json& j) {
  FitResult fit;
  fit.intercept = j.at("intercept").get<double>();
  fit.coefficients = vector_from_json(j.at("coefficients"));
  fit.objective = j.value("objective", 0.0);
  fit.active_set = j.value("active_set", std::vector<int>{});
  fit.n_zero_residuals = j.value("n_zero_residuals", 0);
  fit.converged = j.value("converged", true);
  return fit;
}

json to_json(const PenaltySpec& penalty) {
  return json{{"multiplier", penalty.multiplier},
              {"weights", vector_to_json(penalty.weights)}};
}

PenaltySpec penalty_from_json(const json& j) {
  PenaltySpec penalty;
  penalty.multiplier = j.at("multiplier").get<double>();
  penalty.weights = vector_from_json(j.at("weights"));
  return penalty;
}

json to_json(const KktReport& report) {
  json coords = json::array();
  for (const KktCoefficient& c : report.coefficients)
    coords.push_back(json{{"score", c.score},
                          {"bound", c.bound},
                          {"slack_tolerance", c.slack_tolerance},
                          {"active", c.active},
                          {"satisfied", c.satisfied}});
  return json{{"all_satisfied", report.all_satisfied},
              {"coefficients", std::move(coords)}};
}

json to_json(const Segmentation& seg) {
  json fits = json::array();
  for (const FitResult& fit : seg.segment_fits) fits.push_back(to_json(fit));
  return json{{"change_points", seg.change_points},
              {"total_objective", seg.total_objective},
              {"segments", std::move(fits)}};
}

json to_json(const CriterionRow& row) {
  json j{{"k", row.k}, {"feasible", row.feasible}};
  if (row.feasible) {
    j["s_hat"] = row.s_hat;
    j["b_value"] = row.b_value;
  } else {
    j["s_hat"] = nullptr;
    j["b_value"] = nullptr;
  }
  return j;
}

json to_json(const CriterionTrace& trace) {
  json rows = json::array();
  for (const CriterionRow& row : trace.rows) rows.push_back(to_json(row));
  return json{{"rows", std::move(rows)}, {"chosen_k", trace.chosen_k}};
}

json to_json(const SelectionRates& rates) {
  return json{{"true_zero_rate", rates.true_zero_rate},
              {"false_zero_rate", rates.false_zero_rate}};
}

json to_json(const SpreadStats& stats) {
  return json{{"mean_diff", stats.mean_diff},
              {"mean_abs_diff", stats.mean_abs_diff},
              {"msqe", stats.msqe}};
}

json to_json(const Design& design) {
  json phases = json::array();
  for (const PhaseSpec& phase : design.phases)
    phases.push_back(json{{"phi", vector_to_json(phase.phi)},
                          {"law", law_to_string(phase.law)},
                          {"length", phase.length}});
  return json{{"name", design.name},
              {"covariates",
               json{{"mean", vector_to_json(design.covariates.mean)},
                    {"sd", vector_to_json(design.covariates.sd)}}},
              {"phases", std::move(phases)},
              {"break_indices", design.break_indices()}};
}

Design design_from_json(const json& j) {
  Design design;
  design.name = j.value("name", "custom");
  const json& cov = j.at("covariates");
  design.covariates.mean = vector_from_json(cov.at("mean"));
  design.covariates.sd = vector_from_json(cov.at("sd"));
  for (const json& pj : j.at("phases")) {
    PhaseSpec phase;
    phase.phi = vector_from_json(pj.at("phi"));
    phase.law = parse_error_law(pj.at("law").get<std::string>());
    phase.length = pj.at("length").get<Eigen::Index>();
    design.phases.push_back(std::move(phase));
  }
  design.validate();
  return design;
}

json to_json(const ExperimentConfig& config) {
  json methods = json::array();
  for (const MethodSpec& spec : config.methods) {
    if (spec.method == Method::alasso_quantile)
      methods.push_back(json{{"method", method_name(spec.method)},
                             {"g", spec.g}});
    else
      methods.push_back(method_name(spec.method));
  }
  return json{{"name", config.name},     {"kind", config.kind},
              {"design", config.design}, {"laws", config.laws},
              {"methods", methods},      {"tau", config.tau},
              {"reps", config.reps},     {"seed", config.seed},
              {"k_breaks", config.k_breaks}, {"k_max", config.k_max},
              {"n", config.n},               {"oracle_breaks",
                                              config.oracle_breaks}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig config;
  config.name = j.value("name", "");
  config.kind = j.value("kind", config.kind);
  config.design = j.value("design", config.design);
  config.laws = j.value("laws", config.laws);
  if (j.contains("methods"))
    for (const json& mj : j.at("methods")) {
      MethodSpec spec;
      if (mj.is_string()) {
        spec.method = method_from_name(mj.get<std::string>());
      } else {
        spec.method = method_from_name(mj.at("method").get<std::string>());
        spec.g = mj.value("g", spec.g);
      }
      config.methods.push_back(spec);
    }
  config.tau = j.value("tau", config.tau);
  config.reps = j.value("reps", config.reps);
  config.seed = j.value("seed", config.seed);
  config.k_breaks = j.value("k_breaks", config.k_breaks);
  config.k_max = j.value("k_max", config.k_max);
  config.n = j.value("n", config.n);
  config.oracle_breaks = j.value("oracle_breaks", config.oracle_breaks);
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_config_from_json(json::parse(read_text_file(path)));
}

json to_json(const Report& report) {
  json j{{"config", to_json(report.config)}};
  if (report.config.kind == "single-phase") {
    json methods = json::array();
    for (const MethodSummary& m : report.methods)
      methods.push_back(json{{"method", m.method},
                             {"rates", to_json(m.rates)},
                             {"spread", to_json(m.spread)},
                             {"failures", m.failures},
                             {"non_converged", m.non_converged}});
    j["methods"] = std::move(methods);
  } else if (report.config.kind == "multiphase") {
    json rates = json::array();
    for (const SelectionRates& r : report.multiphase.phase_rates)
      rates.push_back(to_json(r));
    j["multiphase"] = json{{"phase_rates", std::move(rates)},
                           {"break_medians", report.multiphase.break_medians},
                           {"spread", to_json(report.multiphase.spread)},
                           {"failures", report.multiphase.failures}};
  } else {
    j["select_k"] = json{{"k_histogram", report.select_k.k_histogram},
                         {"failures", report.select_k.failures}};
  }
  return j;
}

void write_criterion_trace_csv(std::ostream& out,
                               const CriterionTrace& trace) {
  out << "K,s_hat,B\n";
  for (const CriterionRow& row : trace.rows) {
    if (row.feasible)
      out << row.k << ',' << fmt(row.s_hat) << ',' << fmt(row.b_value) << '\n';
    else
      out << row.k << ",,\n";
  }
}

void write_report_csv(std::ostream& out, const Report& report) {
  if (report.config.kind == "single-phase") {
    out << "method,true_zero_rate,false_zero_rate,mean_diff,mean_abs_diff,"
           "msqe,failures,non_converged\n";
    for (const MethodSummary& m : report.methods)
      out << m.method << ',' << fmt(m.rates.true_zero_rate) << ','
          << fmt(m.rates.false_zero_rate) << ',' << fmt(m.spread.mean_diff)
          << ',' << fmt(m.spread.mean_abs_diff) << ',' << fmt(m.spread.msqe)
          << ',' << m.failures << ',' << m.non_converged << '\n';
  } else if (report.config.kind == "multiphase") {
    out << "row,index,true_zero_rate,false_zero_rate,break_median,mean_diff,"
           "mean_abs_diff,msqe,failures\n";
    const MultiphaseSummary& s = report.multiphase;
    for (size_t r = 0; r < s.phase_rates.size(); ++r)
      out << "phase," << r + 1 << ',' << fmt(s.phase_rates[r].true_zero_rate)
          << ',' << fmt(s.phase_rates[r].false_zero_rate) << ",,,,,\n";
    for (size_t b = 0; b < s.break_medians.size(); ++b)
      out << "break," << b + 1 << ",,," << s.break_medians[b] << ",,,,\n";
    out << "summary,,,,," << fmt(s.spread.mean_diff) << ','
        << fmt(s.spread.mean_abs_diff) << ',' << fmt(s.spread.msqe) << ','
        << s.failures << '\n';
  } else {
    out << "K,count\n";
    for (size_t k = 0; k < report.select_k.k_histogram.size(); ++k)
      out << k << ',' << report.select_k.k_histogram[k] << '\n';
    out << "failures," << report.select_k.failures << '\n';
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace quantseg
