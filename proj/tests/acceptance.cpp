// Acceptance gate: one [PASS]/[FAIL] line per criterion with the measured
// number next to its pinned tolerance. Criteria are selected by name on the
// command line (c1 c2 c3 c4_c6 c5 c7_c10 c8 c9 c11 c12); the grouped names
// share one Monte Carlo run. No arguments runs everything. Exit code is the
// number of failed lines.
//
// Every gate here is deterministic: fixed TestRng seeds for the batteries,
// fixed master seeds inside the checked-in configs for the studies.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "quantseg/adaptive_lasso.hpp"
#include "quantseg/check_loss.hpp"
#include "quantseg/experiment.hpp"
#include "quantseg/qr_solver.hpp"
#include "quantseg/segmentation.hpp"
#include "quantseg/serialize.hpp"
#include "quantseg/simulation.hpp"
#include "support/oracles.hpp"
#include "support/test_rng.hpp"

using namespace quantseg;
using testsupport::TestRng;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = QUANTSEG_CONFIGS_DIR;
const std::string kCli = QUANTSEG_CLI_PATH;

int g_failed = 0;

void report(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", buf);
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

Dataset random_instance(TestRng& rng, int n, int p, bool lattice_y = false) {
  MatrixXd x(n, p);
  VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    y[i] = rng.normal(0.0, 3.0);
    if (lattice_y) y[i] = std::round(y[i]);
  }
  return Dataset(std::move(y), std::move(x));
}

// --- C1: LP objective equals the brute-force interpolation minimum ---------

void criterion_c1() {
  const auto t0 = std::chrono::steady_clock::now();
  TestRng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + trial % 2;
    const int n = rng.uniform_int(p + 2, 8);
    const Dataset data = random_instance(rng, n, p);
    const double tau = rng.uniform(0.05, 0.95);
    const FitResult fr = fit(data, tau, PenaltySpec::none(p));
    const auto oracle = testsupport::brute_force_quantile_min(data, tau);
    worst = std::max(worst, std::fabs(fr.objective - oracle.objective));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(worst <= 1e-8 && secs < 10.0,
         "C1 solver exactness: max |LP - brute force| = %.3g over 200 "
         "instances (tol 1e-8) in %.2f s (cap 10 s)",
         worst, secs);
}

// --- C2: N- <= tau n <= N- + N0 for unpenalized fits ------------------------

void criterion_c2() {
  TestRng rng(202);
  int checked = 0;
  int violations = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int p = rng.uniform_int(1, 6);
    const int n = rng.uniform_int(p + 2, 60);
    const Dataset data = random_instance(rng, n, p, trial % 3 == 0);
    const double tau = rng.uniform(0.05, 0.95);
    const FitResult fr = fit(data, tau, PenaltySpec::none(p));
    const VectorXd resid = data.y -
                           VectorXd::Constant(data.n(), fr.intercept) -
                           data.x * fr.coefficients;
    int n_neg = 0;
    int n_zero = 0;
    for (Eigen::Index i = 0; i < resid.size(); ++i) {
      if (is_zero_residual(resid[i], data.y[i]))
        ++n_zero;
      else if (resid[i] < 0.0)
        ++n_neg;
    }
    const double tn = tau * static_cast<double>(n);
    if (!(n_neg <= tn && tn <= n_neg + n_zero)) ++violations;
    ++checked;
  }
  report(violations == 0,
         "C2 residual sign counts: N- <= tau n <= N- + N0 on %d/%d "
         "unpenalized fits (a third with tied responses)",
         checked - violations, checked);
}

// --- C3: KKT certificate passes, +0.1 on any active coefficient fails it ---

void criterion_c3() {
  int fits_ok = 0;
  int fits_total = 0;
  int perturb_caught = 0;
  int perturb_total = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const ErrorLaw law = trial % 3 == 0   ? normal_law()
                         : trial % 3 == 1 ? cauchy_law()
                                          : shifted_exponential_law(-4.5);
    const Eigen::Index n = trial % 2 == 0 ? 200 : 100;
    const Dataset data = generate(design_d1(law, n), child_seed(3003, trial));
    const double tau = 0.15 + 0.175 * (trial % 5);
    AdaptiveConfig cfg;
    cfg.g = trial % 2 == 0 ? kWeightExponentG1 : kWeightExponentG2;
    const AdaptiveFit af = fit_adaptive_detail(data, tau, cfg);
    ++fits_total;
    if (kkt_verify(data, tau, af.penalty, af.fit).all_satisfied) ++fits_ok;
    for (int j : af.fit.active_set) {
      FitResult bad = af.fit;
      bad.coefficients[j] += 0.1;
      ++perturb_total;
      if (!kkt_verify(data, tau, af.penalty, bad).all_satisfied)
        ++perturb_caught;
    }
  }
  report(fits_ok == fits_total && perturb_caught == perturb_total,
         "C3 KKT certification: %d/%d adaptive fits satisfied, %d/%d active "
         "+0.1 perturbations rejected",
         fits_ok, fits_total, perturb_caught, perturb_total);
}

// --- shared config-driven studies -------------------------------------------

Report run_config(const std::string& name) {
  return run_experiment(load_experiment_config(kConfigs + "/" + name));
}

const MethodSummary* find_method(const Report& report, const std::string& name) {
  for (const auto& m : report.methods)
    if (m.method == name) return &m;
  return nullptr;
}

void criterion_c4_c6() {
  const Report rep = run_config("accept-d1-normal.json");
  const MethodSummary* g1 = find_method(rep, "alasso-quantile(g=1.225)");
  const MethodSummary* g2 = find_method(rep, "alasso-quantile(g=0.225)");
  if (g1 == nullptr || g2 == nullptr) {
    report(false, "C4 accept-d1-normal.json lacks the two adaptive methods");
    report(false, "C6 accept-d1-normal.json lacks the two adaptive methods");
    return;
  }
  report(g1->rates.true_zero_rate >= 0.97 && g1->rates.false_zero_rate <= 0.01,
         "C4 D1 Normal tau=0.5, g=1.225, %d reps: true-zero %.4f (>= 0.97), "
         "false-zero %.4f (<= 0.01)",
         rep.config.reps, g1->rates.true_zero_rate, g1->rates.false_zero_rate);
  const double gap = g1->rates.true_zero_rate - g2->rates.true_zero_rate;
  report(gap >= 0.15,
         "C6 g-condition effect: true-zero %.4f (g=1.225) - %.4f (g=0.225) "
         "= %.4f (>= 0.15)",
         g1->rates.true_zero_rate, g2->rates.true_zero_rate, gap);
}

void criterion_c5() {
  const Report rep = run_config("accept-d1-cauchy.json");
  const MethodSummary* aq = find_method(rep, "alasso-quantile(g=1.225)");
  const MethodSummary* ls = find_method(rep, "ls-alasso");
  if (aq == nullptr || ls == nullptr) {
    report(false, "C5 accept-d1-cauchy.json lacks the two compared methods");
    return;
  }
  report(aq->rates.true_zero_rate >= 0.95 &&
             aq->rates.false_zero_rate <= 0.02 &&
             ls->rates.true_zero_rate <= 0.6,
         "C5 D1 Cauchy tau=0.5, %d reps: quantile true-zero %.4f (>= 0.95), "
         "false-zero %.4f (<= 0.02); LS true-zero %.4f (<= 0.6)",
         rep.config.reps, aq->rates.true_zero_rate, aq->rates.false_zero_rate,
         ls->rates.true_zero_rate);
}

void criterion_c7_c10() {
  const Report est = run_config("accept-m3-breaks.json");
  const Report orc = run_config("accept-m3-oracle-breaks.json");
  const auto& med = est.multiphase.break_medians;
  const bool c7 = med.size() == 2 && 29 <= med[0] && med[0] <= 31 &&
                  99 <= med[1] && med[1] <= 101;
  report(c7,
         "C7 M3 localization, %d reps: median breaks [%d, %d] "
         "(gates [29,31] and [99,101]), %d solver failures",
         est.config.reps, med.empty() ? -1 : med[0],
         med.size() < 2 ? -1 : med[1], est.multiphase.failures);

  double worst = 0.0;
  const size_t phases = std::min(est.multiphase.phase_rates.size(),
                                 orc.multiphase.phase_rates.size());
  for (size_t r = 0; r < phases; ++r) {
    const auto& a = est.multiphase.phase_rates[r];
    const auto& b = orc.multiphase.phase_rates[r];
    worst = std::max(worst, std::fabs(a.true_zero_rate - b.true_zero_rate));
    worst = std::max(worst, std::fabs(a.false_zero_rate - b.false_zero_rate));
  }
  report(phases == 3 && worst <= 0.05,
         "C10 post-segmentation sparsity: max |rate(est breaks) - rate(true "
         "breaks)| = %.4f over %zu phases (tol 0.05)",
         worst, phases);
}

// --- C8: DP equals exhaustive enumeration -----------------------------------

double total_at_breaks(SegmentCostTable& table, const std::vector<int>& breaks) {
  double total = 0.0;
  Eigen::Index prev = 0;
  for (int l : breaks) {
    total += table.cost(prev, l);
    prev = l;
  }
  return total + table.cost(prev, table.n());
}

void criterion_c8() {
  TestRng rng(808);
  int agree = 0;
  int trials = 0;
  double worst = 0.0;
  while (trials < 50) {
    const int n = rng.uniform_int(24, 40);
    const int k_breaks = trials % 3;

    Design d;
    d.name = "accept-c8";
    d.covariates.mean = VectorXd::Zero(2);
    d.covariates.sd = VectorXd::Ones(2);
    VectorXd phi_a(2), phi_b(2);
    phi_a << rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0);
    phi_b << rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0);
    const int cut = n / 2;
    d.phases = {PhaseSpec{phi_a, normal_law(), cut},
                PhaseSpec{phi_b, normal_law(), n - cut}};
    const Dataset data = generate(d, child_seed(8080, trials));

    SegmentationConfig cfg;
    SegmentCostTable table(data, cfg);
    if ((k_breaks + 1) * table.min_len() > n) continue;
    ++trials;

    const Segmentation best = best_segmentation(table, k_breaks);
    double enum_best = std::numeric_limits<double>::infinity();
    for (const auto& breaks : testsupport::enumerate_breaks(
             n, k_breaks, static_cast<int>(table.min_len())))
      enum_best = std::min(enum_best, total_at_breaks(table, breaks));

    const double diff = std::fabs(best.total_objective - enum_best);
    worst = std::max(worst, diff);
    // same association order on both sides, so the doubles must agree to
    // roundoff; the DP's own breaks must also reproduce its total
    if (diff <= 1e-9 * (1.0 + std::fabs(enum_best)) &&
        std::fabs(total_at_breaks(table, best.change_points) -
                  best.total_objective) <= 1e-12 * (1.0 + std::fabs(enum_best)))
      ++agree;
  }
  report(agree == trials,
         "C8 DP oracle: %d/%d random datasets (n <= 40, K <= 2) match "
         "exhaustive enumeration, max |diff| = %.3g",
         agree, trials, worst);
}

// --- C9: K selection on M2 ---------------------------------------------------

double k1_rate(const Report& rep, int* reps_used) {
  int total = 0;
  for (int c : rep.select_k.k_histogram) total += c;
  *reps_used = total;
  return total == 0 ? 0.0
                    : static_cast<double>(rep.select_k.k_histogram[1]) / total;
}

void criterion_c9() {
  const Report distinct = run_config("accept-m2-distinct.json");
  const Report qonly = run_config("accept-m2-quantile-only.json");
  int n_distinct = 0;
  int n_qonly = 0;
  const double rate_distinct = k1_rate(distinct, &n_distinct);
  const double rate_qonly = k1_rate(qonly, &n_qonly);
  report(rate_distinct >= 0.90 && rate_qonly >= 0.4 && rate_qonly <= 0.8,
         "C9 K selection: distinct-phi K=1 rate %.2f over %d reps (>= 0.90); "
         "quantile-only K=1 rate %.2f over %d reps (in [0.4, 0.8])",
         rate_distinct, n_distinct, rate_qonly, n_qonly);
}

// --- C11: E[R] >= 0 Monte Carlo ---------------------------------------------

double draw_error(TestRng& rng, int law) {
  if (law == 0) return rng.normal();
  if (law == 1) return -4.5 - std::log(1.0 - rng.uniform01());
  return std::tan(M_PI * (rng.uniform01() - 0.5));
}

double law_quantile(int law, double tau) {
  if (law == 0) return normal_quantile(tau);
  if (law == 1) return -4.5 - std::log(1.0 - tau);
  return std::tan(M_PI * (tau - 0.5));
}

void criterion_c11() {
  TestRng rng(1111);
  const int draws = 100000;
  const double taus[] = {0.15, 0.3, 0.5, 0.75, 0.95};
  double worst_z = std::numeric_limits<double>::infinity();
  int ok_trials = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int law = trial % 3;
    const double tau = taus[trial % 5];
    const double b0 = law_quantile(law, tau);
    const double b = b0 + rng.uniform(-2.0, 2.0);
    VectorXd delta(3);
    for (int j = 0; j < 3; ++j) delta[j] = rng.uniform(-1.0, 1.0);

    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double eps = draw_error(rng, law);
      double xd = 0.0;
      for (int j = 0; j < 3; ++j) xd += rng.normal() * delta[j];
      const double r =
          check_loss(eps - b - xd, tau) - check_loss(eps - b0, tau);
      sum += r;
      sumsq += r * r;
    }
    const double mean = sum / draws;
    const double var = (sumsq - sum * sum / draws) / (draws - 1);
    const double se = std::sqrt(var / draws);
    const double z = se > 0.0 ? mean / se
                              : (mean >= 0.0 ? 0.0 : -4.0);
    worst_z = std::min(worst_z, z);
    if (mean >= -3.0 * se) ++ok_trials;
  }
  report(ok_trials == 20,
         "C11 E[R] >= 0: %d/20 random (b, phi) have mean R >= -3 SE over 1e5 "
         "draws; worst z = %.2f",
         ok_trials, worst_z);
}

// --- C12: reproduce is --jobs invariant --------------------------------------

std::string run_cli_to_file(const std::string& args, const fs::path& out,
                            bool* ok) {
  const std::string cmd = kCli + " " + args + " --out " + out.string() +
                          " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  if (WEXITSTATUS(raw) != 0) {
    *ok = false;
    return {};
  }
  return read_text_file(out.string());
}

void criterion_c12() {
  const fs::path dir = fs::temp_directory_path() / "quantseg-acceptance";
  fs::create_directories(dir);
  const std::string commands[] = {
      "reproduce --config " + kConfigs + "/smoke-d1.json --seed 7",
      "reproduce --table 1 --reps 1 --seed 11",
  };
  bool ok = true;
  int identical = 0;
  for (int c = 0; c < 2; ++c) {
    const std::string a = run_cli_to_file(
        commands[c] + " --jobs 1", dir / ("c12-" + std::to_string(c) + "a.csv"),
        &ok);
    const std::string b = run_cli_to_file(
        commands[c] + " --jobs 4", dir / ("c12-" + std::to_string(c) + "b.csv"),
        &ok);
    if (!a.empty() && a == b) ++identical;
  }
  report(ok && identical == 2,
         "C12 determinism: %d/2 reproduce commands byte-identical under "
         "--jobs 1 vs --jobs 4",
         identical);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> selected(argv + 1, argv + argc);
  const std::vector<std::string> known = {"c1", "c2",     "c3", "c4_c6",
                                          "c5", "c7_c10", "c8", "c9",
                                          "c11", "c12"};
  for (const auto& s : selected)
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      std::fprintf(stderr, "unknown criterion '%s'\n", s.c_str());
      return 64;
    }
  const auto want = [&](const char* name) {
    return selected.empty() ||
           std::find(selected.begin(), selected.end(), name) != selected.end();
  };

  if (want("c1")) criterion_c1();
  if (want("c2")) criterion_c2();
  if (want("c3")) criterion_c3();
  if (want("c4_c6")) criterion_c4_c6();
  if (want("c5")) criterion_c5();
  if (want("c7_c10")) criterion_c7_c10();
  if (want("c8")) criterion_c8();
  if (want("c9")) criterion_c9();
  if (want("c11")) criterion_c11();
  if (want("c12")) criterion_c12();
  return g_failed;
}
