// quantseg: quantile regression with adaptive-LASSO selection and
// change-point estimation. Subcommands: fit, segment, select-k, simulate,
// reproduce, kkt-check.
//
// Exit codes: 0 success, 1 usage/parse/input error, 2 solver failure,
// 3 kkt-check ran cleanly but the certificate is violated.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quantseg/baselines.hpp"
#include "quantseg/csv.hpp"
#include "quantseg/qr_solver.hpp"
#include "quantseg/serialize.hpp"

namespace {

using namespace quantseg;

struct SeedFlag {
  std::uint64_t value = 0;
  bool given = false;
};

// precedence: --seed flag, then QUANTSEG_SEED, then 0
std::uint64_t resolve_seed(const SeedFlag& flag) {
  if (flag.given) return flag.value;
  if (const char* env = std::getenv("QUANTSEG_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(
          std::string("QUANTSEG_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_text_file(out_path, text);
}

// accepts "n^0.4" or a bare exponent like "0.4"
std::function<double(Eigen::Index)> parse_lambda_rule(const std::string& text) {
  std::string expo = text;
  if (expo.rfind("n^", 0) == 0) expo = expo.substr(2);
  size_t used = 0;
  double e = 0.0;
  try {
    e = std::stod(expo, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != expo.size())
    throw std::invalid_argument("cannot parse lambda rule '" + text +
                                "'; expected n^<exponent> or a bare exponent");
  return [e](Eigen::Index n) {
    return std::pow(static_cast<double>(n), e);
  };
}

// ---------------------------------------------------------------------- fit

struct FitArgs {
  std::string data_path;
  std::string method = "alasso-quantile";
  double tau = 0.5;
  double g = kWeightExponentG1;
  std::string lambda_rule;
  int scad_max_iterations = -1;
  std::string out;
  std::string format = "json";
};

int run_fit(const FitArgs& args) {
  const Dataset data = read_dataset_csv_file(args.data_path);
  const Method method = method_from_name(args.method);

  json out{{"method", args.method}, {"tau", args.tau}};
  FitResult fit_result;
  std::optional<PenaltySpec> penalty;  // quantile family only

  switch (method) {
    case Method::quantile: {
      PenaltySpec none = PenaltySpec::none(data.p());
      fit_result = fit(data, args.tau, none);
      penalty = std::move(none);
      break;
    }
    case Method::alasso_quantile: {
      AdaptiveConfig cfg;
      cfg.g = args.g;
      if (!args.lambda_rule.empty())
        cfg.lambda_rule = parse_lambda_rule(args.lambda_rule);
      AdaptiveFit detail = fit_adaptive_detail(data, args.tau, cfg);
      fit_result = std::move(detail.fit);
      penalty = std::move(detail.penalty);
      out["g"] = args.g;
      break;
    }
    case Method::ls_alasso: {
      LsAlassoConfig cfg;
      if (!args.lambda_rule.empty())
        cfg.lambda_rule = parse_lambda_rule(args.lambda_rule);
      fit_result = fit_ls_alasso(data, cfg);
      break;
    }
    case Method::lad_lassotype:
      fit_result = fit_lad_lassotype(data);  // median model, tau fixed at 1/2
      break;
    case Method::scad: {
      ScadConfig cfg;
      if (args.scad_max_iterations >= 0)
        cfg.max_iterations = args.scad_max_iterations;
      ScadFit detail = fit_scad_lla_detail(data, args.tau, cfg);
      fit_result = std::move(detail.fit);
      out["objective_trace"] = detail.objective_trace;
      break;
    }
  }

  out["fit"] = to_json(fit_result);
  if (penalty) {
    out["penalty"] = to_json(*penalty);
    out["kkt"] = to_json(kkt_verify(data, args.tau, *penalty, fit_result));
  }

  if (args.format == "json") {
    emit(args.out, out.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "field,index,value\n";
    csv << "intercept,," << fit_result.intercept << '\n';
    csv << "objective,," << fit_result.objective << '\n';
    csv << "converged,," << (fit_result.converged ? 1 : 0) << '\n';
    for (Eigen::Index j = 0; j < fit_result.coefficients.size(); ++j)
      csv << "coefficient," << j + 1 << ',' << fit_result.coefficients[j]
          << '\n';
    emit(args.out, csv.str());
  }
  return 0;
}

// ------------------------------------------------------------------ segment

struct SegmentArgs {
  std::string data_path;
  int k_breaks = 0;
  double tau = 0.55;
  Eigen::Index min_len = -1;
  std::string out;
  std::string format = "json";
};

int run_segment(const SegmentArgs& args) {
  const Dataset data = read_dataset_csv_file(args.data_path);
  SegmentationConfig cfg;
  cfg.tau = args.tau;
  cfg.min_len = args.min_len;
  const Segmentation seg = best_segmentation(data, args.k_breaks, cfg);

  if (args.format == "json") {
    emit(args.out, to_json(seg).dump(2) + "\n");
    return 0;
  }
  std::ostringstream csv;
  csv << "segment,start,end,objective,n_active\n";
  Eigen::Index start = 0;
  for (size_t r = 0; r < seg.segment_fits.size(); ++r) {
    const Eigen::Index end = r < seg.change_points.size()
                                 ? seg.change_points[r]
                                 : data.n();
    csv << r + 1 << ',' << start + 1 << ',' << end << ','
        << seg.segment_fits[r].objective << ','
        << seg.segment_fits[r].active_set.size() << '\n';
    start = end;
  }
  emit(args.out, csv.str());
  return 0;
}

// ----------------------------------------------------------------- select-k

struct SelectKArgs {
  std::string data_path;
  int k_max = 3;
  double tau = 0.55;
  Eigen::Index min_len = -1;
  std::string out;
  std::string format = "json";
};

int run_select_k(const SelectKArgs& args) {
  const Dataset data = read_dataset_csv_file(args.data_path);
  SelectionConfig cfg;
  cfg.segmentation.tau = args.tau;
  cfg.segmentation.min_len = args.min_len;
  const SelectionResult result = select_k(data, args.k_max, cfg);

  if (args.format == "csv") {
    std::ostringstream csv;
    write_criterion_trace_csv(csv, result.trace);
    emit(args.out, csv.str());
  } else {
    json out{{"chosen_k", result.chosen_k},
             {"trace", to_json(result.trace)},
             {"segmentation", to_json(result.best)}};
    emit(args.out, out.dump(2) + "\n");
  }
  return 0;
}

// ----------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string design = "D1";
  std::vector<std::string> laws;
  Eigen::Index n = -1;
  SeedFlag seed;
  std::string out;
  std::string truth_out;
};

Design resolve_simulate_design(const SimulateArgs& args) {
  const bool custom = args.design.size() > 5 &&
                      args.design.rfind(".json") == args.design.size() - 5;
  if (custom) {
    if (!args.laws.empty())
      throw std::invalid_argument(
          "--law does not combine with a custom design file");
    if (args.n != -1)
      throw std::invalid_argument(
          "--n does not combine with a custom design file");
    return design_from_json(json::parse(read_text_file(args.design)));
  }
  ExperimentConfig cfg;
  cfg.design = args.design;
  cfg.kind = "select-k";  // kind without extra constraints; only the design
  cfg.n = args.n;         // and laws matter here
  const Eigen::Index phases =
      args.design == "D1" ? 1
      : (args.design == "M2" || args.design == "M2-quantile-only") ? 2 : 3;
  if (args.laws.empty())
    cfg.laws.assign(phases, "normal(0,1)");
  else
    cfg.laws = args.laws;
  return resolve_design(cfg);
}

int run_simulate(const SimulateArgs& args) {
  const Design design = resolve_simulate_design(args);
  const Dataset data = generate(design, resolve_seed(args.seed));

  std::ostringstream csv;
  write_dataset_csv(csv, data);
  emit(args.out, csv.str());

  std::string truth_path = args.truth_out;
  if (truth_path.empty() && !args.out.empty() && args.out != "-")
    truth_path = args.out + ".truth.json";
  if (!truth_path.empty())
    write_text_file(truth_path, to_json(design).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceArgs {
  std::string table;
  std::string figure;
  std::string config_path;
  int reps = -1;
  SeedFlag seed;
  std::string out;
  std::string format = "csv";
};

struct LabeledReport {
  std::string label;
  Report report;
};

ExperimentConfig base_single_phase(const std::string& law, double tau,
                                   int reps, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.kind = "single-phase";
  cfg.design = "D1";
  cfg.laws = {law};
  cfg.methods = {{Method::ls_alasso, 0.0},
                 {Method::alasso_quantile, kWeightExponentG1},
                 {Method::alasso_quantile, kWeightExponentG2},
                 {Method::scad, 0.0},
                 {Method::lad_lassotype, 0.0}};
  cfg.tau = tau;
  cfg.reps = reps;
  cfg.seed = seed;
  return cfg;
}

std::vector<LabeledReport> run_reproduce_runs(const ReproduceArgs& args,
                                              std::string& csv_out) {
  const std::uint64_t seed = resolve_seed(args.seed);
  std::vector<LabeledReport> reports;
  std::ostringstream csv;

  auto reps_or = [&](int fallback) {
    return args.reps > 0 ? args.reps : fallback;
  };

  if (args.table == "1" || args.table == "2" || args.table == "3") {
    const std::string law = args.table == "1"   ? "normal(0,1)"
                            : args.table == "2" ? "exp(-4.5)"
                                                : "cauchy(0,1)";
    csv << "tau,method,true_zero_rate,false_zero_rate,mean_diff,"
           "mean_abs_diff,msqe,failures,non_converged\n";
    int row = 0;
    for (double tau : {0.15, 0.5, 0.95}) {
      ExperimentConfig cfg =
          base_single_phase(law, tau, reps_or(50), child_seed(seed, row++));
      cfg.name = "table" + args.table + "-tau" + std::to_string(tau);
      Report report = run_experiment(cfg);
      for (const MethodSummary& m : report.methods) {
        char line[256];
        std::snprintf(line, sizeof(line),
                      "%g,%s,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%d\n", tau,
                      m.method.c_str(), m.rates.true_zero_rate,
                      m.rates.false_zero_rate, m.spread.mean_diff,
                      m.spread.mean_abs_diff, m.spread.msqe, m.failures,
                      m.non_converged);
        csv << line;
      }
      reports.push_back({cfg.name, std::move(report)});
    }
  } else if (args.table == "5" || args.table == "5bis" ||
             args.table == "6" || args.table == "6bis") {
    const bool equal12 = args.table[0] == '6';
    const bool summary = args.table.size() > 1;
    // law rows as in the study: E1 = exp(-4.5), E2 = exp(1.5), E3 = exp(-6.5)
    const std::vector<std::vector<std::string>> rows =
        equal12 ? std::vector<std::vector<std::string>>{
                      {"exp(-4.5)", "normal(0,1)", "exp(-4.5)"},
                      {"normal(0,1)", "exp(-4.5)", "normal(0,1)"},
                      {"exp(-4.5)", "cauchy(0,1)", "exp(-4.5)"},
                      {"exp(1.5)", "exp(-4.5)", "exp(1.5)"},
                      {"exp(-6.5)", "exp(-4.5)", "exp(-6.5)"},
                      {"exp(-6.5)", "exp(-4.5)", "exp(-4.5)"}}
                : std::vector<std::vector<std::string>>{
                      {"exp(-4.5)", "exp(-4.5)", "exp(-4.5)"},
                      {"normal(0,1)", "normal(0,1)", "normal(0,1)"},
                      {"exp(-4.5)", "exp(-4.5)", "normal(0,1)"},
                      {"normal(0,1)", "normal(0,1)", "exp(-4.5)"},
                      {"exp(-4.5)", "normal(0,1)", "exp(-4.5)"},
                      {"normal(0,1)", "exp(-4.5)", "normal(0,1)"},
                      {"exp(-4.5)", "cauchy(0,1)", "exp(-4.5)"},
                      {"exp(1.5)", "exp(-4.5)", "exp(1.5)"},
                      {"exp(-6.5)", "exp(-4.5)", "exp(-6.5)"},
                      {"exp(-6.5)", "exp(-4.5)", "exp(-4.5)"}};
    if (summary)
      csv << "laws,median_l1,median_l2,mean_diff,mean_abs_diff,msqe,"
             "failures\n";
    else
      csv << "laws,phase,true_zero_rate,false_zero_rate\n";
    int row = 0;
    for (const auto& laws : rows) {
      ExperimentConfig cfg;
      cfg.kind = "multiphase";
      cfg.design = equal12 ? "M3-equal12" : "M3";
      cfg.laws = laws;
      cfg.tau = 0.55;
      cfg.reps = reps_or(20);
      cfg.seed = child_seed(seed, row++);
      cfg.name = "table" + args.table + "-row" + std::to_string(row);
      Report report = run_experiment(cfg);
      const std::string label = laws[0] + "|" + laws[1] + "|" + laws[2];
      const MultiphaseSummary& s = report.multiphase;
      if (summary) {
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%d,%d,%.10g,%.10g,%.10g,%d\n",
                      label.c_str(),
                      s.break_medians.size() > 0 ? s.break_medians[0] : -1,
                      s.break_medians.size() > 1 ? s.break_medians[1] : -1,
                      s.spread.mean_diff, s.spread.mean_abs_diff,
                      s.spread.msqe, s.failures);
        csv << line;
      } else {
        for (size_t r = 0; r < s.phase_rates.size(); ++r) {
          char line[256];
          std::snprintf(line, sizeof(line), "%s,%zu,%.10g,%.10g\n",
                        label.c_str(), r + 1, s.phase_rates[r].true_zero_rate,
                        s.phase_rates[r].false_zero_rate);
          csv << line;
        }
      }
      reports.push_back({label, std::move(report)});
    }
  } else if (args.table == "7") {
    struct Row {
      const char* design;
      const char* law1;
      const char* law2;
    };
    const std::vector<Row> rows = {
        {"M2-quantile-only", "exp(-4.5)", "exp(-6.5)"},
        {"M2-quantile-only", "exp(-4.5)", "normal(0,1)"},
        {"M2", "exp(-4.5)", "exp(-6.5)"},
        {"M2", "exp(-4.5)", "normal(0,1)"},
    };
    csv << "scenario,laws,k0,k1,k2,k3,failures\n";
    int row = 0;
    for (const Row& r : rows) {
      ExperimentConfig cfg;
      cfg.kind = "select-k";
      cfg.design = r.design;
      cfg.laws = {r.law1, r.law2};
      cfg.tau = 0.55;
      cfg.k_max = 3;
      cfg.reps = reps_or(50);
      cfg.seed = child_seed(seed, row++);
      cfg.name = "table7-row" + std::to_string(row);
      Report report = run_experiment(cfg);
      const auto& h = report.select_k.k_histogram;
      char line[256];
      std::snprintf(line, sizeof(line), "%s,%s|%s,%d,%d,%d,%d,%d\n",
                    std::string(r.design) == "M2" ? "distinct-phi" : "same-phi",
                    r.law1, r.law2, h[0], h[1], h[2], h[3],
                    report.select_k.failures);
      csv << line;
      reports.push_back({cfg.name, std::move(report)});
    }
  } else if (!args.figure.empty()) {
    std::string law;
    if (args.figure == "4") law = "normal(0,1)";
    else if (args.figure == "5") law = "exp(-4.5)";
    else if (args.figure == "6") law = "cauchy(0,1)";
    else if (args.figure == "7") law = "exp(-4.5)+cauchy(0,2)";
    else throw std::invalid_argument("unknown figure id: " + args.figure);
    csv << "tau,method,true_zero_rate,false_zero_rate\n";
    int row = 0;
    for (int t = 1; t <= 19; ++t) {
      const double tau = 0.05 * t;
      ExperimentConfig cfg;
      cfg.kind = "single-phase";
      cfg.design = "D1";
      cfg.laws = {law};
      cfg.methods = {{Method::ls_alasso, 0.0},
                     {Method::alasso_quantile, kWeightExponentG1},
                     {Method::lad_lassotype, 0.0}};
      cfg.tau = tau;
      cfg.reps = reps_or(20);
      cfg.seed = child_seed(seed, row++);
      cfg.name = "figure" + args.figure + "-tau" + std::to_string(tau);
      Report report = run_experiment(cfg);
      for (const MethodSummary& m : report.methods) {
        char line[192];
        std::snprintf(line, sizeof(line), "%.2f,%s,%.10g,%.10g\n", tau,
                      m.method.c_str(), m.rates.true_zero_rate,
                      m.rates.false_zero_rate);
        csv << line;
      }
      reports.push_back({cfg.name, std::move(report)});
    }
  } else {
    throw std::invalid_argument("unknown table id: " + args.table);
  }

  csv_out = csv.str();
  return reports;
}

int run_reproduce(const ReproduceArgs& args) {
  const int selectors = (!args.table.empty()) + (!args.figure.empty()) +
                        (!args.config_path.empty());
  if (selectors != 1)
    throw std::invalid_argument(
        "pass exactly one of --table, --figure, --config");

  if (!args.config_path.empty()) {
    ExperimentConfig cfg = load_experiment_config(args.config_path);
    if (args.reps > 0) cfg.reps = args.reps;
    if (args.seed.given) cfg.seed = args.seed.value;
    const Report report = run_experiment(cfg);
    if (args.format == "json") {
      emit(args.out, to_json(report).dump(2) + "\n");
    } else {
      std::ostringstream csv;
      write_report_csv(csv, report);
      emit(args.out, csv.str());
    }
    return 0;
  }

  std::string csv;
  std::vector<LabeledReport> reports = run_reproduce_runs(args, csv);
  if (args.format == "json") {
    json arr = json::array();
    for (const LabeledReport& lr : reports)
      arr.push_back(json{{"label", lr.label}, {"report", to_json(lr.report)}});
    emit(args.out, arr.dump(2) + "\n");
  } else {
    emit(args.out, csv);
  }
  return 0;
}

// ---------------------------------------------------------------- kkt-check

struct KktCheckArgs {
  std::string data_path;
  std::string fit_path;
  std::string out;
};

int run_kkt_check(const KktCheckArgs& args) {
  const Dataset data = read_dataset_csv_file(args.data_path);
  const json fit_json = json::parse(read_text_file(args.fit_path));
  if (!fit_json.contains("penalty"))
    throw std::invalid_argument(
        args.fit_path +
        ": no penalty section; kkt-check needs a quantile-family fit");
  const double tau = fit_json.at("tau").get<double>();
  const PenaltySpec penalty = penalty_from_json(fit_json.at("penalty"));
  const FitResult fit = fit_result_from_json(fit_json.at("fit"));

  const KktReport report = kkt_verify(data, tau, penalty, fit);
  emit(args.out, to_json(report).dump(2) + "\n");
  return report.all_satisfied ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive-LASSO quantile regression with change points"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --jobs trail the subcommand arguments
  int jobs = 1;  // replication results never depend on scheduling
  app.add_option("--jobs", jobs, "worker bound for replications")
      ->check(CLI::PositiveNumber);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "fit one model to a CSV dataset");
  fit_cmd->add_option("--data", fit_args.data_path, "dataset CSV")->required();
  fit_cmd->add_option("--tau", fit_args.tau, "quantile level");
  fit_cmd->add_option("--method", fit_args.method,
                      "quantile | alasso-quantile | ls-alasso | "
                      "lad-lassotype | scad");
  fit_cmd->add_option("--g", fit_args.g, "adaptive weight exponent");
  fit_cmd->add_option("--lambda-rule", fit_args.lambda_rule,
                      "penalty multiplier as n^<e>, taken at face value "
                      "(default n^0.4 / 2)");
  fit_cmd->add_option("--scad-max-iterations", fit_args.scad_max_iterations,
                      "LLA iteration cap");
  fit_cmd->add_option("--out", fit_args.out, "output path, - for stdout");
  fit_cmd->add_option("--format", fit_args.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  SegmentArgs seg_args;
  auto* seg_cmd =
      app.add_subcommand("segment", "fit a K-break segmentation");
  seg_cmd->add_option("--data", seg_args.data_path, "dataset CSV")->required();
  seg_cmd->add_option("--k", seg_args.k_breaks, "number of breaks")
      ->required();
  seg_cmd->add_option("--tau", seg_args.tau, "quantile level");
  seg_cmd->add_option("--min-len", seg_args.min_len,
                      "minimum segment length (default max(p+2, n^0.51))");
  seg_cmd->add_option("--out", seg_args.out, "output path, - for stdout");
  seg_cmd->add_option("--format", seg_args.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  SelectKArgs sel_args;
  auto* sel_cmd =
      app.add_subcommand("select-k", "pick the break count by criterion");
  sel_cmd->add_option("--data", sel_args.data_path, "dataset CSV")->required();
  sel_cmd->add_option("--k-max", sel_args.k_max, "largest K probed");
  sel_cmd->add_option("--tau", sel_args.tau, "quantile level");
  sel_cmd->add_option("--min-len", sel_args.min_len, "minimum segment length");
  sel_cmd->add_option("--out", sel_args.out, "output path, - for stdout");
  sel_cmd->add_option("--format", sel_args.format,
                      "json | csv (csv emits the criterion trace)")
      ->check(CLI::IsMember({"json", "csv"}));

  SimulateArgs sim_args;
  auto* sim_cmd =
      app.add_subcommand("simulate", "draw a dataset from a design");
  sim_cmd->add_option("--design", sim_args.design,
                      "D1 | M2 | M2-quantile-only | M3 | M3-equal12 | "
                      "path to a design .json");
  sim_cmd->add_option("--law", sim_args.laws,
                      "error law per phase, e.g. exp(-4.5); repeatable");
  sim_cmd->add_option("--n", sim_args.n, "sample size override (D1 only)");
  auto* sim_seed = sim_cmd->add_option("--seed", sim_args.seed.value,
                                       "master seed (QUANTSEG_SEED fallback)");
  sim_cmd->add_option("--out", sim_args.out, "dataset CSV path, - for stdout");
  sim_cmd->add_option("--truth-out", sim_args.truth_out,
                      "truth JSON path (default <out>.truth.json)");

  ReproduceArgs rep_args;
  auto* rep_cmd = app.add_subcommand(
      "reproduce", "rerun a study table or figure at desk scale");
  rep_cmd->add_option("--table", rep_args.table,
                      "1 | 2 | 3 | 5 | 5bis | 6 | 6bis | 7");
  rep_cmd->add_option("--figure", rep_args.figure, "4 | 5 | 6 | 7");
  rep_cmd->add_option("--config", rep_args.config_path,
                      "experiment config JSON to run as-is");
  rep_cmd->add_option("--reps", rep_args.reps, "override replication count");
  auto* rep_seed = rep_cmd->add_option("--seed", rep_args.seed.value,
                                       "master seed (QUANTSEG_SEED fallback)");
  rep_cmd->add_option("--out", rep_args.out, "output path, - for stdout");
  rep_cmd->add_option("--format", rep_args.format, "csv | json")
      ->check(CLI::IsMember({"json", "csv"}));

  KktCheckArgs kkt_args;
  auto* kkt_cmd = app.add_subcommand(
      "kkt-check", "re-verify a saved quantile-family fit");
  kkt_cmd->add_option("--data", kkt_args.data_path, "dataset CSV")->required();
  kkt_cmd->add_option("--fit", kkt_args.fit_path, "fit JSON from `fit`")
      ->required();
  kkt_cmd->add_option("--out", kkt_args.out, "output path, - for stdout");

  try {
    app.parse(argc, argv);
    sim_args.seed.given = sim_seed->count() > 0;
    rep_args.seed.given = rep_seed->count() > 0;

    if (*fit_cmd) return run_fit(fit_args);
    if (*seg_cmd) return run_segment(seg_args);
    if (*sel_cmd) return run_select_k(sel_args);
    if (*sim_cmd) return run_simulate(sim_args);
    if (*rep_cmd) return run_reproduce(rep_args);
    if (*kkt_cmd) return run_kkt_check(kkt_args);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
