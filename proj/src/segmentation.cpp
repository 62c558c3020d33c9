#include "quantseg/segmentation.hpp"

#include <cmath>
#include <limits>

#include "quantseg/qr_solver.hpp"
#include "quantseg/simplex.hpp"

namespace quantseg {

Eigen::Index default_min_len(Eigen::Index n, Eigen::Index p) {
  const auto growth = static_cast<Eigen::Index>(
      std::ceil(std::pow(static_cast<double>(n), 0.51)));
  return std::max(p + 2, growth);
}

SegmentCostTable::SegmentCostTable(Dataset data, const SegmentationConfig& config)
    : data_(std::move(data)), config_(config) {
  data_.validate();
  config_.adaptive.validate();
  QuantileLevel check_tau(config_.tau);
  min_len_ = config_.min_len > 0 ? config_.min_len
                                 : default_min_len(data_.n(), data_.p());
  if (min_len_ < data_.p() + 2)
    throw std::invalid_argument("min_len must be at least p + 2");
  const size_t cells = static_cast<size_t>(data_.n() + 1) *
                       static_cast<size_t>(data_.n() + 1);
  have_.assign(cells, 0);
  fits_.resize(cells);
}

void SegmentCostTable::require_admissible(Eigen::Index l, Eigen::Index k) const {
  if (!admissible(l, k))
    throw std::invalid_argument("segment [" + std::to_string(l) + "," +
                                std::to_string(k) + ") inadmissible for n = " +
                                std::to_string(n()) +
                                ", min_len = " + std::to_string(min_len_));
}

void SegmentCostTable::store(Eigen::Index l, Eigen::Index k, FitResult fit) {
  const size_t s = slot(l, k);
  fits_[s] = std::move(fit);
  have_[s] = 1;
}

const FitResult& SegmentCostTable::fit(Eigen::Index l, Eigen::Index k) {
  require_admissible(l, k);
  const size_t s = slot(l, k);
  if (!have_[s])
    store(l, k, fit_adaptive(data_.rows(l, k), config_.tau, config_.adaptive));
  return fits_[s];
}

double SegmentCostTable::cost(Eigen::Index l, Eigen::Index k) {
  return fit(l, k).objective;
}

void SegmentCostTable::build_all() {
  if (built_all_) return;
  const Eigen::Index n = this->n();
  for (Eigen::Index l = 0; l + min_len_ <= n; ++l) {
    // one warm pilot chain per segment start: push rows as k grows, and
    // solve each penalized problem from a snapshot of the pilot basis
    SimplexSolver pilot(data_.rows(l, l + min_len_), config_.tau,
                        /*intercept=*/true, n - l);
    LpSolution pilot_sol = pilot.solve();
    for (Eigen::Index k = l + min_len_; k <= n; ++k) {
      if (k > l + min_len_) {
        pilot.push_row(data_.x.row(k - 1), data_.y[k - 1]);
        pilot_sol = pilot.solve();
      }
      if (pilot_sol.status != LpStatus::optimal)
        throw SolverError("pilot solve failed in cost-table sweep at [" +
                          std::to_string(l) + "," + std::to_string(k) + ")");
      if (have_[slot(l, k)]) continue;  // keep earlier lazily computed entries

      const VectorXd pilot_phi = pilot_sol.phi_plus - pilot_sol.phi_minus;
      PenaltySpec penalty{config_.adaptive.lambda_rule(k - l),
                          compute_weights(pilot_phi, config_.adaptive.g,
                                          config_.adaptive.weight_floor)};
      SimplexSolver penalized = pilot;
      penalized.set_penalty(penalty.multiplier, penalty.weights);
      const LpSolution sol = penalized.solve();
      store(l, k,
            make_fit_result(data_.rows(l, k), config_.tau, penalty, sol));
    }
  }
  built_all_ = true;
}

// ---------------------------------------------------------------------------

SegmentDp::SegmentDp(SegmentCostTable& table, int max_breaks)
    : n_(table.n()), min_len_(table.min_len()), max_breaks_(max_breaks) {
  if (max_breaks_ < 0)
    throw std::invalid_argument("max_breaks must be >= 0");
  const double inf = std::numeric_limits<double>::infinity();
  best_ = MatrixXd::Constant(max_breaks_ + 1, n_ + 1, inf);
  arg_ = Eigen::MatrixXi::Constant(max_breaks_ + 1, n_ + 1, -1);
  if (n_ < min_len_) return;  // nothing feasible, every query will throw

  if (max_breaks_ >= 1 && 2 * min_len_ <= n_) {
    table.build_all();
    for (Eigen::Index m = min_len_; m <= n_; ++m)
      best_(0, m) = table.cost(0, m);
  } else {
    best_(0, n_) = table.cost(0, n_);
  }

  for (int j = 1; j <= max_breaks_; ++j) {
    const Eigen::Index lo = static_cast<Eigen::Index>(j + 1) * min_len_;
    for (Eigen::Index m = lo; m <= n_; ++m) {
      double best = inf;
      int arg = -1;
      for (Eigen::Index l = static_cast<Eigen::Index>(j) * min_len_;
           l <= m - min_len_; ++l) {
        const double v = best_(j - 1, l) + table.cost(l, m);
        if (v < best) {  // strict: ties keep the smallest split
          best = v;
          arg = static_cast<int>(l);
        }
      }
      best_(j, m) = best;
      arg_(j, m) = arg;
    }
  }
}

bool SegmentDp::feasible(int k_breaks) const {
  return 0 <= k_breaks && k_breaks <= max_breaks_ &&
         static_cast<Eigen::Index>(k_breaks + 1) * min_len_ <= n_;
}

void SegmentDp::require_feasible(int k_breaks) const {
  if (!feasible(k_breaks))
    throw std::invalid_argument(
        std::to_string(k_breaks) + " breaks infeasible: n = " +
        std::to_string(n_) + ", min_len = " + std::to_string(min_len_) +
        ", max_breaks = " + std::to_string(max_breaks_));
}

double SegmentDp::total_cost(int k_breaks) const {
  require_feasible(k_breaks);
  return best_(k_breaks, n_);
}

std::vector<int> SegmentDp::change_points(int k_breaks) const {
  require_feasible(k_breaks);
  std::vector<int> breaks(k_breaks);
  Eigen::Index m = n_;
  for (int j = k_breaks; j >= 1; --j) {
    const int l = arg_(j, m);
    breaks[j - 1] = l;
    m = l;
  }
  return breaks;
}

// ---------------------------------------------------------------------------

namespace {

Segmentation assemble(SegmentCostTable& table, const std::vector<int>& breaks) {
  Segmentation seg;
  seg.change_points = breaks;
  Eigen::Index start = 0;
  for (size_t r = 0; r <= breaks.size(); ++r) {
    const Eigen::Index end =
        r < breaks.size() ? static_cast<Eigen::Index>(breaks[r]) : table.n();
    seg.segment_fits.push_back(table.fit(start, end));
    seg.total_objective += table.cost(start, end);
    start = end;
  }
  return seg;
}

void validate_breaks(const SegmentCostTable& table,
                     const std::vector<int>& breaks) {
  Eigen::Index prev = 0;
  for (int b : breaks) {
    if (b <= prev || b >= table.n())
      throw std::invalid_argument("change points must be strictly increasing "
                                  "inside (0, n)");
    if (b - prev < table.min_len())
      throw std::invalid_argument("segment [" + std::to_string(prev) + "," +
                                  std::to_string(b) + ") shorter than min_len " +
                                  std::to_string(table.min_len()));
    prev = b;
  }
  if (table.n() - prev < table.min_len())
    throw std::invalid_argument("final segment shorter than min_len");
}

}  // namespace

Segmentation best_segmentation(SegmentCostTable& table, int k_breaks) {
  if (k_breaks < 0) throw std::invalid_argument("K must be >= 0");
  if (static_cast<Eigen::Index>(k_breaks + 1) * table.min_len() > table.n())
    throw std::invalid_argument(
        "n = " + std::to_string(table.n()) + " too short for " +
        std::to_string(k_breaks + 1) + " segments of min_len " +
        std::to_string(table.min_len()));
  if (k_breaks == 0) return assemble(table, {});
  SegmentDp dp(table, k_breaks);
  return assemble(table, dp.change_points(k_breaks));
}

Segmentation best_segmentation(const Dataset& data, int k_breaks,
                               const SegmentationConfig& config) {
  SegmentCostTable table(data, config);
  return best_segmentation(table, k_breaks);
}

Segmentation refit_at_breaks(SegmentCostTable& table,
                             const std::vector<int>& change_points) {
  validate_breaks(table, change_points);
  return assemble(table, change_points);
}

Segmentation refit_at_breaks(const Dataset& data,
                             const std::vector<int>& change_points,
                             const SegmentationConfig& config) {
  SegmentCostTable table(data, config);
  return refit_at_breaks(table, change_points);
}

}  // namespace quantseg
