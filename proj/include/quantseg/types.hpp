#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace quantseg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Zero-classification tolerances used everywhere a coefficient or residual
// is tested against zero.  Relative form: a coefficient phi_j counts as zero
// iff |phi_j| <= kCoefZeroTol * (1 + max_j |phi_j|), a residual r_i as zero
// iff |r_i| <= kResidualZeroTol * (1 + |y_i|).
inline constexpr double kCoefZeroTol = 1e-9;
inline constexpr double kResidualZeroTol = 1e-8;

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quantile level tau, restricted to the open interval (0,1).
class QuantileLevel {
 public:
  explicit QuantileLevel(double tau) : tau_(tau) {
    if (!(tau > 0.0 && tau < 1.0))
      throw std::invalid_argument("quantile level must lie in (0,1), got " +
                                  std::to_string(tau));
  }
  double value() const { return tau_; }
  operator double() const { return tau_; }

 private:
  double tau_;
};

/// Regression sample: response y (n) and design X (n x p), all entries finite.
struct Dataset {
  VectorXd y;
  MatrixXd x;

  Dataset() = default;
  Dataset(VectorXd y_in, MatrixXd x_in) : y(std::move(y_in)), x(std::move(x_in)) {
    validate();
  }

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return x.cols(); }

  void validate() const {
    if (y.size() < 1) throw std::invalid_argument("dataset needs n >= 1");
    if (x.cols() < 1) throw std::invalid_argument("dataset needs p >= 1");
    if (x.rows() != y.size())
      throw std::invalid_argument("dataset dimension mismatch: X has " +
                                  std::to_string(x.rows()) + " rows, y has " +
                                  std::to_string(y.size()));
    if (!y.allFinite() || !x.allFinite())
      throw std::invalid_argument("dataset entries must all be finite");
  }

  /// Contiguous row range [l, k) as a copy (0-based, half-open).
  Dataset rows(Eigen::Index l, Eigen::Index k) const {
    if (!(0 <= l && l < k && k <= n()))
      throw std::invalid_argument("invalid row range [" + std::to_string(l) +
                                  "," + std::to_string(k) + ")");
    return Dataset(y.segment(l, k - l), x.middleRows(l, k - l));
  }
};

/// Weighted L1 penalty lambda * sum_j w_j |phi_j|.
struct PenaltySpec {
  double multiplier = 0.0;
  VectorXd weights;  // size p, all >= 0

  static PenaltySpec none(Eigen::Index p) {
    return PenaltySpec{0.0, VectorXd::Zero(p)};
  }

  void validate(Eigen::Index p) const {
    if (!(multiplier >= 0.0) || !std::isfinite(multiplier))
      throw std::invalid_argument("penalty multiplier must be finite and >= 0");
    if (weights.size() != p)
      throw std::invalid_argument("penalty weights size " +
                                  std::to_string(weights.size()) +
                                  " does not match p = " + std::to_string(p));
    for (Eigen::Index j = 0; j < p; ++j)
      if (!(weights[j] >= 0.0) || !std::isfinite(weights[j]))
        throw std::invalid_argument("penalty weights must be finite and >= 0");
  }
};

/// Indices j with |phi_j| > kCoefZeroTol * (1 + ||phi||_inf).
inline std::vector<int> active_set(const VectorXd& phi) {
  std::vector<int> act;
  const double thr =
      kCoefZeroTol * (1.0 + (phi.size() ? phi.cwiseAbs().maxCoeff() : 0.0));
  for (Eigen::Index j = 0; j < phi.size(); ++j)
    if (std::abs(phi[j]) > thr) act.push_back(static_cast<int>(j));
  return act;
}

inline bool is_zero_residual(double r, double y) {
  return std::abs(r) <= kResidualZeroTol * (1.0 + std::abs(y));
}

inline int count_zero_residuals(const VectorXd& resid, const VectorXd& y) {
  int n0 = 0;
  for (Eigen::Index i = 0; i < resid.size(); ++i)
    if (is_zero_residual(resid[i], y[i])) ++n0;
  return n0;
}

/// Output of every fitting routine in the library.
struct FitResult {
  double intercept = 0.0;
  VectorXd coefficients;
  double objective = 0.0;
  std::vector<int> active_set;
  int n_zero_residuals = 0;
  bool converged = true;  // only iterative fitters (LLA, coordinate descent) unset this
};

}  // namespace quantseg
