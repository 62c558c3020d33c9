#pragma once

#include "quantseg/types.hpp"

namespace quantseg {

enum class LpStatus { optimal, unbounded, iteration_limit };

/// Raw solution of the quantile-regression LP in split form.
struct LpSolution {
  double b = 0.0;          // b_plus - b_minus (0 when built without intercept)
  VectorXd phi_plus;
  VectorXd phi_minus;
  VectorXd u_plus;
  VectorXd u_minus;
  LpStatus status = LpStatus::optimal;
  int n_pivots = 0;
};

// Primal simplex on the LP
//   min  tau * sum u+  +  (1-tau) * sum u-  +  lambda * sum_j w_j (phi+_j + phi-_j)
//   s.t. y_i = b + x_i'(phi+ - phi-) + u+_i - u-_i,   all variables >= 0,
// with the free intercept split as b = b+ - b-.  The initial basis takes
// u+_i or u-_i per row depending on sign(y_i), which is feasible outright, so
// there is no phase 1.  Dantzig pricing switches to Bland's rule permanently
// once 3n degenerate steps have accumulated in one solve call.
//
// The tableau is kept over nonbasic columns only.  The object is copyable
// (snapshots are cheap enough) and supports two warm paths used heavily by
// the segmentation sweep: set_penalty() swaps the cost vector and reprices,
// and push_row() appends one observation while preserving primal feasibility.
class SimplexSolver {
 public:
  // reserve_rows: total row capacity for later push_row calls (>= data.n()).
  SimplexSolver(const Dataset& data, double tau, bool intercept,
                Eigen::Index reserve_rows = -1);

  void set_penalty(double multiplier, const VectorXd& weights);
  void push_row(const Eigen::RowVectorXd& x_row, double y_new);

  // Continues from the current basis.  max_pivots < 0 picks 50 * (n + p).
  LpSolution solve(int max_pivots = -1);

  // Rebuilds the tableau from the raw data at the current basis (drift reset).
  void rebuild_from_basis();

  Eigen::Index rows() const { return n_; }
  Eigen::Index cols() const { return p_; }
  double tau() const { return tau_; }

 private:
  // variable ids: [b+, b-,] phi+_0..phi+_{p-1}, phi-_0..phi-_{p-1}, then
  // u+_i, u-_i interleaved per observation.
  int u_plus_id(Eigen::Index i) const { return n_struct_ + 2 * static_cast<int>(i); }
  int u_minus_id(Eigen::Index i) const { return n_struct_ + 2 * static_cast<int>(i) + 1; }
  double cost_of(int var) const;
  double raw_coef(int var, Eigen::Index row) const;
  bool is_structural(int var) const { return var < n_struct_; }

  void reprice();
  int choose_entering(bool bland) const;
  void pivot(Eigen::Index r, Eigen::Index e_slot);

  double tau_;
  double mult_ = 0.0;
  VectorXd w_;
  bool intercept_;
  Eigen::Index p_ = 0;
  Eigen::Index n_ = 0;
  Eigen::Index cap_ = 0;
  int n_struct_ = 0;

  MatrixXd x_;    // raw rows, cap_ x p_
  VectorXd y_;    // raw responses, cap_
  MatrixXd T_;    // tableau over stored (nonbasic) columns, cap_ x (n_struct_+cap_)
  VectorXd rhs_;  // basic values, cap_
  Eigen::RowVectorXd d_;  // reduced costs per stored column
  std::vector<int> basis_;        // row -> basic var id
  std::vector<int> var_of_slot_;  // stored column slot -> var id
  std::vector<int> slot_of_;      // var id -> slot, or -1 when basic
};

}  // namespace quantseg
