#include "quantseg/simulation.hpp"

#include <cmath>
#include <numbers>

namespace quantseg {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
  return mix64(state_ += 0x9E3779B97F4A7C15ULL);
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal(double mean, double sd) {
  if (have_spare_) {
    have_spare_ = false;
    return mean + sd * spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return mean + sd * r * std::cos(a);
}

double Rng::exponential() {
  return -std::log1p(-uniform01());
}

double Rng::cauchy(double location, double scale) {
  return location + scale * std::tan(std::numbers::pi * (uniform01() - 0.5));
}

std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(master_seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

// ---------------------------------------------------------------------------

ErrorLaw normal_law(double mean, double sd) {
  if (!(sd > 0)) throw std::invalid_argument("normal law needs sd > 0");
  return ErrorLaw{LawKind::normal, mean, sd, {}};
}

ErrorLaw shifted_exponential_law(double shift) {
  return ErrorLaw{LawKind::shifted_exponential, shift, 1.0, {}};
}

ErrorLaw cauchy_law(double location, double scale) {
  if (!(scale > 0)) throw std::invalid_argument("cauchy law needs scale > 0");
  return ErrorLaw{LawKind::cauchy, location, scale, {}};
}

ErrorLaw sum_law(const ErrorLaw& first, const ErrorLaw& second) {
  ErrorLaw law{LawKind::sum_of, 0.0, 0.0, {first, second}};
  return law;
}

ErrorLaw dirac_law(double value) {
  return ErrorLaw{LawKind::dirac, value, 0.0, {}};
}

double sample_error(const ErrorLaw& law, Rng& rng) {
  switch (law.kind) {
    case LawKind::normal:
      return rng.normal(law.a, law.b);
    case LawKind::shifted_exponential:
      return law.a + rng.exponential();
    case LawKind::cauchy:
      return rng.cauchy(law.a, law.b);
    case LawKind::sum_of:
      return sample_error(law.terms[0], rng) + sample_error(law.terms[1], rng);
    case LawKind::dirac:
      return law.a;  // constant, consumes no randomness
  }
  throw std::logic_error("unreachable");
}

std::optional<double> law_tau_quantile(const ErrorLaw& law, double tau) {
  QuantileLevel check_tau(tau);
  switch (law.kind) {
    case LawKind::normal:
      return law.a + law.b * normal_quantile(tau);
    case LawKind::shifted_exponential:
      return law.a - std::log(1.0 - tau);
    case LawKind::cauchy:
      return law.a + law.b * std::tan(std::numbers::pi * (tau - 0.5));
    case LawKind::dirac:
      return law.a;
    case LawKind::sum_of:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> law_cdf(const ErrorLaw& law, double x) {
  switch (law.kind) {
    case LawKind::normal:
      return 0.5 * std::erfc(-(x - law.a) / (law.b * std::numbers::sqrt2));
    case LawKind::shifted_exponential:
      return x <= law.a ? 0.0 : 1.0 - std::exp(-(x - law.a));
    case LawKind::cauchy:
      return 0.5 + std::atan((x - law.a) / law.b) / std::numbers::pi;
    case LawKind::dirac:
      return x < law.a ? 0.0 : 1.0;
    case LawKind::sum_of:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// parses "name(a[,b])", leaving pos after the closing parenthesis
ErrorLaw parse_single_law(const std::string& s, size_t& pos) {
  const size_t open = s.find('(', pos);
  if (open == std::string::npos)
    throw std::invalid_argument("cannot parse error law: " + s);
  const std::string name = s.substr(pos, open - pos);
  const size_t close = s.find(')', open);
  if (close == std::string::npos)
    throw std::invalid_argument("unbalanced parenthesis in error law: " + s);
  const std::string args = s.substr(open + 1, close - open - 1);
  pos = close + 1;

  std::vector<double> vals;
  size_t start = 0;
  while (start <= args.size()) {
    const size_t comma = args.find(',', start);
    const std::string tok =
        args.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    if (!tok.empty()) vals.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }

  auto want = [&](size_t lo, size_t hi) {
    if (vals.size() < lo || vals.size() > hi)
      throw std::invalid_argument("wrong number of parameters in law: " + s);
  };
  if (name == "normal" || name == "N") {
    want(0, 2);
    return normal_law(vals.size() > 0 ? vals[0] : 0.0,
                      vals.size() > 1 ? vals[1] : 1.0);
  }
  if (name == "exp") {
    want(1, 1);
    return shifted_exponential_law(vals[0]);
  }
  if (name == "cauchy") {
    want(0, 2);
    return cauchy_law(vals.size() > 0 ? vals[0] : 0.0,
                      vals.size() > 1 ? vals[1] : 1.0);
  }
  if (name == "dirac") {
    want(1, 1);
    return dirac_law(vals[0]);
  }
  throw std::invalid_argument("unknown error law '" + name + "' in: " + s);
}

std::string format_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

ErrorLaw parse_error_law(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  size_t pos = 0;
  ErrorLaw first = parse_single_law(s, pos);
  if (pos >= s.size()) return first;
  if (s[pos] != '+')
    throw std::invalid_argument("trailing characters in error law: " + text);
  ++pos;
  ErrorLaw second = parse_single_law(s, pos);
  if (pos < s.size())
    throw std::invalid_argument("only one '+' is supported in error laws: " + text);
  return sum_law(first, second);
}

std::string law_to_string(const ErrorLaw& law) {
  switch (law.kind) {
    case LawKind::normal:
      return "normal(" + format_num(law.a) + "," + format_num(law.b) + ")";
    case LawKind::shifted_exponential:
      return "exp(" + format_num(law.a) + ")";
    case LawKind::cauchy:
      return "cauchy(" + format_num(law.a) + "," + format_num(law.b) + ")";
    case LawKind::dirac:
      return "dirac(" + format_num(law.a) + ")";
    case LawKind::sum_of:
      return law_to_string(law.terms[0]) + "+" + law_to_string(law.terms[1]);
  }
  return "?";
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("normal_quantile needs p in (0,1)");
  // Acklam's rational approximation
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (prob < plow) {
    q = std::sqrt(-2.0 * std::log(prob));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (prob > 1.0 - plow) {
    q = std::sqrt(-2.0 * std::log(1.0 - prob));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = prob - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// ---------------------------------------------------------------------------

Eigen::Index Design::n() const {
  Eigen::Index total = 0;
  for (const auto& ph : phases) total += ph.length;
  return total;
}

std::vector<int> Design::break_indices() const {
  std::vector<int> breaks;
  int cum = 0;
  for (size_t r = 0; r + 1 < phases.size(); ++r) {
    cum += static_cast<int>(phases[r].length);
    breaks.push_back(cum);
  }
  return breaks;
}

const PhaseSpec& Design::phase_of_row(Eigen::Index i) const {
  Eigen::Index cum = 0;
  for (const auto& ph : phases) {
    cum += ph.length;
    if (i < cum) return ph;
  }
  throw std::out_of_range("row beyond design length");
}

void Design::validate() const {
  if (phases.empty()) throw std::invalid_argument("design needs phases");
  if (covariates.mean.size() != covariates.sd.size() || covariates.p() < 1)
    throw std::invalid_argument("bad covariate spec");
  for (const auto& ph : phases) {
    if (ph.length < 1) throw std::invalid_argument("phase length must be >= 1");
    if (ph.phi.size() != covariates.p())
      throw std::invalid_argument("phase phi size does not match p");
  }
}

Dataset generate(const Design& design, std::uint64_t seed) {
  design.validate();
  Rng rng(seed);
  const Eigen::Index n = design.n();
  const Eigen::Index p = design.p();
  MatrixXd x(n, p);
  VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j)
      x(i, j) = rng.normal(design.covariates.mean[j], design.covariates.sd[j]);
    const PhaseSpec& ph = design.phase_of_row(i);
    y[i] = x.row(i).dot(ph.phi) + sample_error(ph.law, rng);
  }
  return Dataset(std::move(y), std::move(x));
}

// ---------------------------------------------------------------------------

namespace {

VectorXd d1_phi() {
  return VectorXd{{1, 0, 4, 0, -3, 5, 6, 0, -1, 0}};
}

VectorXd m3_phase2_phi() {
  return VectorXd{{0, 3, -4, -3, 0, 1, 2, -3, 0, 10}};
}

VectorXd m3_phase3_phi() {
  return VectorXd{{1, 3, 4, 0, 0, 1, 0, 0, 0, 1}};
}

CovariateSpec d1_covariates() {
  CovariateSpec cov;
  cov.mean = VectorXd{{0, 0, 2, -1, 1, 0, 0, 0, 0, 0}};
  cov.sd = VectorXd::Ones(10);
  return cov;
}

}  // namespace

Design design_d1(const ErrorLaw& law, Eigen::Index n) {
  Design d;
  d.name = "D1";
  d.covariates = d1_covariates();
  d.phases = {PhaseSpec{d1_phi(), law, n}};
  d.validate();
  return d;
}

Design design_m3(const ErrorLaw& law1, const ErrorLaw& law2,
                 const ErrorLaw& law3) {
  Design d;
  d.name = "M3";
  d.covariates = d1_covariates();
  d.phases = {PhaseSpec{d1_phi(), law1, 30},
              PhaseSpec{m3_phase2_phi(), law2, 70},
              PhaseSpec{m3_phase3_phi(), law3, 100}};
  d.validate();
  return d;
}

Design design_m2(const ErrorLaw& law1, const ErrorLaw& law2, bool distinct_phi) {
  Design d;
  d.name = distinct_phi ? "M2" : "M2-quantile-only";
  d.covariates = d1_covariates();
  d.phases = {PhaseSpec{d1_phi(), law1, 30},
              PhaseSpec{distinct_phi ? m3_phase2_phi() : d1_phi(), law2, 70}};
  d.validate();
  return d;
}

}  // namespace quantseg
