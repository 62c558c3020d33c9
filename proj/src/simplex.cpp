#include "quantseg/simplex.hpp"

#include <cmath>
#include <limits>

namespace quantseg {

namespace {
constexpr double kEnterTol = 1e-9;   // reduced cost must beat this to enter
constexpr double kPivTol = 1e-9;     // smallest acceptable pivot element
constexpr double kDegenTol = 1e-11;  // step length below this counts degenerate
constexpr double kTieTol = 1e-10;    // ratio-test tie window (relative)
}  // namespace

SimplexSolver::SimplexSolver(const Dataset& data, double tau, bool intercept,
                             Eigen::Index reserve_rows)
    : tau_(QuantileLevel(tau)), intercept_(intercept), p_(data.p()) {
  cap_ = reserve_rows < data.n() ? data.n() : reserve_rows;
  n_struct_ = (intercept_ ? 2 : 0) + 2 * static_cast<int>(p_);
  w_ = VectorXd::Zero(p_);

  x_.setZero(cap_, p_);
  y_.setZero(cap_);
  T_.setZero(cap_, n_struct_ + cap_);
  rhs_.setZero(cap_);
  d_.setZero(n_struct_ + cap_);
  basis_.assign(cap_, -1);
  var_of_slot_.assign(n_struct_ + cap_, -1);
  slot_of_.assign(n_struct_ + 2 * cap_, -1);

  // structural columns occupy the first slots, then one u column per row
  for (int v = 0; v < n_struct_; ++v) {
    var_of_slot_[v] = v;
    slot_of_[v] = v;
  }
  for (Eigen::Index i = 0; i < data.n(); ++i) push_row(data.x.row(i), data.y[i]);
}

double SimplexSolver::cost_of(int var) const {
  if (intercept_) {
    if (var < 2) return 0.0;
    var -= 2;
  }
  if (var < 2 * p_) return mult_ * w_[var % p_];
  var -= 2 * static_cast<int>(p_);
  return (var % 2 == 0) ? tau_ : 1.0 - tau_;
}

double SimplexSolver::raw_coef(int var, Eigen::Index row) const {
  if (intercept_) {
    if (var == 0) return 1.0;
    if (var == 1) return -1.0;
    var -= 2;
  }
  if (var < p_) return x_(row, var);
  if (var < 2 * p_) return -x_(row, var - p_);
  var -= 2 * static_cast<int>(p_);
  if (var / 2 != row) return 0.0;
  return (var % 2 == 0) ? 1.0 : -1.0;
}

void SimplexSolver::push_row(const Eigen::RowVectorXd& x_row, double y_new) {
  if (n_ >= cap_) throw std::logic_error("simplex row capacity exhausted");
  if (x_row.size() != p_) throw std::invalid_argument("push_row: bad x size");
  const Eigen::Index r = n_;
  x_.row(r) = x_row;
  y_[r] = y_new;

  // new constraint row expressed in the current basis: subtract the rows of
  // structural basic variables scaled by their raw coefficient here
  const Eigen::Index wa = n_struct_ + r;  // stored width before this row
  Eigen::RowVectorXd t = Eigen::RowVectorXd::Zero(wa + 1);
  for (Eigen::Index s = 0; s < wa; ++s) {
    const int v = var_of_slot_[s];
    if (is_structural(v)) t[s] = raw_coef(v, r);
  }
  double rhs = y_new;
  for (Eigen::Index i = 0; i < n_; ++i) {
    const int v = basis_[i];
    if (!is_structural(v)) continue;
    const double c = raw_coef(v, r);
    if (c == 0.0) continue;
    t.head(wa) -= c * T_.row(i).head(wa);
    rhs -= c * rhs_[i];
  }

  const bool plus = rhs >= 0.0;
  if (!plus) {
    t = -t;
    rhs = -rhs;
  }
  const int vb = plus ? u_plus_id(r) : u_minus_id(r);
  const int vn = plus ? u_minus_id(r) : u_plus_id(r);

  T_.row(r).head(wa) = t.head(wa);
  rhs_[r] = rhs;
  basis_[r] = vb;
  slot_of_[vb] = -1;

  // existing reduced costs pick up the new basic variable's cost
  d_.head(wa) -= cost_of(vb) * t.head(wa);

  // the unused u of the pair becomes a stored column: -1 in this row only,
  // and its reduced cost is cost(u+) + cost(u-) = 1 regardless of penalty
  var_of_slot_[wa] = vn;
  slot_of_[vn] = static_cast<int>(wa);
  T_.col(wa).head(r).setZero();
  T_(r, wa) = -1.0;
  d_[wa] = 1.0;

  ++n_;
}

void SimplexSolver::reprice() {
  const Eigen::Index wa = n_struct_ + n_;
  VectorXd cb(n_);
  for (Eigen::Index i = 0; i < n_; ++i) cb[i] = cost_of(basis_[i]);
  for (Eigen::Index s = 0; s < wa; ++s) d_[s] = cost_of(var_of_slot_[s]);
  d_.head(wa).noalias() -= cb.transpose() * T_.topLeftCorner(n_, wa);
}

void SimplexSolver::set_penalty(double multiplier, const VectorXd& weights) {
  PenaltySpec{multiplier, weights}.validate(p_);
  mult_ = multiplier;
  w_ = weights;
  reprice();
}

int SimplexSolver::choose_entering(bool bland) const {
  const Eigen::Index wa = n_struct_ + n_;
  int best_slot = -1;
  if (bland) {
    int best_var = std::numeric_limits<int>::max();
    for (Eigen::Index s = 0; s < wa; ++s)
      if (d_[s] < -kEnterTol && var_of_slot_[s] < best_var) {
        best_var = var_of_slot_[s];
        best_slot = static_cast<int>(s);
      }
  } else {
    double best = -kEnterTol;
    for (Eigen::Index s = 0; s < wa; ++s) {
      const double dj = d_[s];
      if (dj < best ||
          (dj == best && best_slot >= 0 && var_of_slot_[s] < var_of_slot_[best_slot])) {
        best = dj;
        best_slot = static_cast<int>(s);
      }
    }
  }
  return best_slot;
}

void SimplexSolver::pivot(Eigen::Index r, Eigen::Index e) {
  const Eigen::Index wa = n_struct_ + n_;
  const double piv = T_(r, e);
  const VectorXd pcol = T_.col(e).head(n_);
  const double de = d_[e];
  const Eigen::RowVectorXd prow = T_.row(r).head(wa) / piv;
  const double prhs = rhs_[r] / piv;

  T_.topLeftCorner(n_, wa).noalias() -= pcol * prow;
  rhs_.head(n_).noalias() -= pcol * prhs;
  d_.head(wa).noalias() -= de * prow;

  T_.row(r).head(wa) = prow;
  rhs_[r] = prhs;

  // slot e now carries the leaving variable's column
  T_.col(e).head(n_) = -pcol / piv;
  T_(r, e) = 1.0 / piv;
  d_[e] = -de / piv;

  const int entering = var_of_slot_[e];
  const int leaving = basis_[r];
  basis_[r] = entering;
  slot_of_[entering] = -1;
  var_of_slot_[e] = leaving;
  slot_of_[leaving] = static_cast<int>(e);
}

LpSolution SimplexSolver::solve(int max_pivots) {
  if (max_pivots < 0) max_pivots = 50 * static_cast<int>(n_ + p_);

  LpSolution sol;
  bool bland = false;
  int degenerate = 0;
  int pivots = 0;
  while (true) {
    const int e = choose_entering(bland);
    if (e < 0) {
      sol.status = LpStatus::optimal;
      break;
    }
    // ratio test
    Eigen::Index best_r = -1;
    double best_theta = 0.0;
    double best_piv = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double a = T_(i, e);
      if (a <= kPivTol) continue;
      const double theta = std::max(rhs_[i], 0.0) / a;
      if (best_r < 0) {
        best_r = i;
        best_theta = theta;
        best_piv = a;
        continue;
      }
      const double window = kTieTol * (1.0 + best_theta);
      if (theta < best_theta - window) {
        best_r = i;
        best_theta = theta;
        best_piv = a;
      } else if (theta <= best_theta + window) {
        const bool take =
            bland ? basis_[i] < basis_[best_r]
                  : (a > best_piv + kTieTol ||
                     (std::abs(a - best_piv) <= kTieTol && basis_[i] < basis_[best_r]));
        if (take) {
          best_r = i;
          best_theta = std::min(best_theta, theta);
          best_piv = a;
        }
      }
    }
    if (best_r < 0) {
      sol.status = LpStatus::unbounded;
      break;
    }
    if (best_theta <= kDegenTol) {
      if (++degenerate >= 3 * n_) bland = true;
    }
    pivot(best_r, e);
    if (++pivots > max_pivots) {
      sol.status = LpStatus::iteration_limit;
      break;
    }
  }
  sol.n_pivots = pivots;

  // read off variable values: basic ones from rhs, the rest are zero
  VectorXd val = VectorXd::Zero(n_struct_ + 2 * n_);
  for (Eigen::Index i = 0; i < n_; ++i)
    val[basis_[i]] = std::max(rhs_[i], 0.0);
  int off = 0;
  if (intercept_) {
    sol.b = val[0] - val[1];
    off = 2;
  }
  sol.phi_plus = val.segment(off, p_);
  sol.phi_minus = val.segment(off + p_, p_);
  sol.u_plus.resize(n_);
  sol.u_minus.resize(n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    sol.u_plus[i] = val[u_plus_id(i)];
    sol.u_minus[i] = val[u_minus_id(i)];
  }
  return sol;
}

void SimplexSolver::rebuild_from_basis() {
  const Eigen::Index wa = n_struct_ + n_;
  MatrixXd B(n_, n_);
  for (Eigen::Index i = 0; i < n_; ++i)
    for (Eigen::Index r = 0; r < n_; ++r) B(r, i) = raw_coef(basis_[i], r);
  Eigen::PartialPivLU<MatrixXd> lu(B);

  MatrixXd raw(n_, wa + 1);
  for (Eigen::Index s = 0; s < wa; ++s)
    for (Eigen::Index r = 0; r < n_; ++r) raw(r, s) = raw_coef(var_of_slot_[s], r);
  raw.col(wa) = y_.head(n_);
  MatrixXd solved = lu.solve(raw);
  T_.topLeftCorner(n_, wa) = solved.leftCols(wa);
  rhs_.head(n_) = solved.col(wa);
  reprice();
}

}  // namespace quantseg
