#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quantseg/types.hpp"

namespace quantseg {

// Reproducibility scheme: splitmix64 streams.  A master seed plus a
// replication index derive an independent child stream through the splitmix
// finalizer (child_seed below), so replication r's data never depends on how
// work was scheduled across --jobs.  All transforms (Box-Muller normals,
// inverse-CDF exponentials and Cauchys) are implemented here; std::
// distributions are implementation-defined and would break reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform01();  // [0,1), 53-bit mantissa
  double normal(double mean = 0.0, double sd = 1.0);
  double exponential();  // rate 1, via -log(1-u)
  double cauchy(double location, double scale);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index);
inline Rng child_rng(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(child_seed(master_seed, index));
}

// ---------------------------------------------------------------------------

enum class LawKind { normal, shifted_exponential, cauchy, sum_of, dirac };

/// Error distribution.  shifted_exponential(s) has density exp(-(x-s)) on
/// x > s (sampled as s + E with E standard exponential), so Exp(-4.5,1) has
/// support x > -4.5, mean -3.5 and tau-quantile -4.5 - log(1-tau).  dirac(c)
/// exists only so tests can build exactly-noiseless data; the public design
/// catalog never uses it.
struct ErrorLaw {
  LawKind kind = LawKind::normal;
  double a = 0.0;  // mean / shift / location / constant
  double b = 1.0;  // sd / scale
  std::vector<ErrorLaw> terms;  // the two summands for sum_of
};

ErrorLaw normal_law(double mean = 0.0, double sd = 1.0);
ErrorLaw shifted_exponential_law(double shift);
ErrorLaw cauchy_law(double location = 0.0, double scale = 1.0);
ErrorLaw sum_law(const ErrorLaw& first, const ErrorLaw& second);
ErrorLaw dirac_law(double value);

double sample_error(const ErrorLaw& law, Rng& rng);

/// Closed-form tau-quantile where one exists (no closed form for sums).
std::optional<double> law_tau_quantile(const ErrorLaw& law, double tau);
/// Closed-form CDF where one exists.
std::optional<double> law_cdf(const ErrorLaw& law, double x);

/// Shorthand grammar used by the CLI and config files:
///   "normal(m,s)" | "exp(shift)" | "cauchy(loc,scale)" | "dirac(c)"
///   | law "+" law  (one level of summation)
ErrorLaw parse_error_law(const std::string& text);
std::string law_to_string(const ErrorLaw& law);

/// Standard normal quantile (Acklam's rational approximation, |err| < 2e-9;
/// used for truth records and tests, never inside estimators).
double normal_quantile(double prob);

// ---------------------------------------------------------------------------

struct PhaseSpec {
  VectorXd phi;
  ErrorLaw law;
  Eigen::Index length = 0;
};

/// Covariate columns are independent normals, column j ~ N(mean_j, sd_j).
struct CovariateSpec {
  VectorXd mean;
  VectorXd sd;
  Eigen::Index p() const { return mean.size(); }
};

struct Design {
  std::string name;
  CovariateSpec covariates;
  std::vector<PhaseSpec> phases;

  Eigen::Index n() const;
  Eigen::Index p() const { return covariates.p(); }
  /// 1-based last indices of all but the final phase (the paper's l_r).
  std::vector<int> break_indices() const;
  const PhaseSpec& phase_of_row(Eigen::Index i) const;  // 0-based row
  void validate() const;
};

/// Row draw order, per observation i: the p covariates left to right, then
/// the error; y_i = x_i' phi_phase + eps_i.
Dataset generate(const Design& design, std::uint64_t seed);

// Design catalog from the simulation study.
// D1: n=200, p=10, phi = (1,0,4,0,-3,5,6,0,-1,0), covariate means
//     (0,0,2,-1,1,0,...,0), unit sds.
Design design_d1(const ErrorLaw& law, Eigen::Index n = 200);
// M3: three phases of lengths 30/70/100 (breaks 30 and 100), second phase
//     phi = (0,3,-4,-3,0,1,2,-3,0,10), third phi = (1,3,4,0,0,1,0,0,0,1).
Design design_m3(const ErrorLaw& law1, const ErrorLaw& law2,
                 const ErrorLaw& law3);
// M2: two phases 30/70 (break 30, n=100); distinct_phi picks the M3 phase-2
//     vector for the second phase, otherwise both phases share the D1 phi.
Design design_m2(const ErrorLaw& law1, const ErrorLaw& law2, bool distinct_phi);

}  // namespace quantseg
