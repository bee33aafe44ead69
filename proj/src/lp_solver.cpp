#include "sparsetree/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

#include "sparsetree/errors.hpp"

namespace sparsetree::lp {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kOptTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;

void validate(const LpProblem& pb) {
  const Eigen::Index n = pb.num_vars();
  auto check_block = [n](const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs, const char* what) {
    if (a.rows() != rhs.size()) {
      fail(ErrorCode::kDimensionMismatch, std::string(what) + ": row count differs from rhs length");
    }
    if (a.rows() > 0 && a.cols() != n) {
      fail(ErrorCode::kDimensionMismatch, std::string(what) + ": column count differs from objective length");
    }
    if (!a.allFinite() || !rhs.allFinite()) {
      fail(ErrorCode::kInvalidArgument, std::string(what) + ": non-finite entry");
    }
  };
  check_block(pb.ineq_matrix, pb.ineq_rhs, "inequalities");
  check_block(pb.eq_matrix, pb.eq_rhs, "equalities");
  if (!pb.objective.allFinite()) fail(ErrorCode::kInvalidArgument, "objective: non-finite entry");
  if (!pb.nonnegative.empty() && static_cast<Eigen::Index>(pb.nonnegative.size()) != n) {
    fail(ErrorCode::kDimensionMismatch, "nonnegative flags length differs from objective length");
  }
}

// Dense tableau. Rows [0, rows) are constraints, row `rows` holds the reduced
// costs; the last column is the right-hand side (in the cost row: -objective).
class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(RowMatrix::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
  double at(Eigen::Index r, Eigen::Index c) const { return t_(r, c); }
  double& rhs(Eigen::Index r) { return t_(r, t_.cols() - 1); }
  double rhs(Eigen::Index r) const { return t_(r, t_.cols() - 1); }
  double cost(Eigen::Index c) const { return t_(rows(), c); }
  double objective() const { return -t_(rows(), t_.cols() - 1); }
  std::vector<Eigen::Index>& basis() { return basis_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  auto cost_row() { return t_.row(rows()); }
  auto row(Eigen::Index r) { return t_.row(r); }

  void pivot(Eigen::Index r, Eigen::Index c) {
    const double p = t_(r, c);
    t_.row(r) /= p;
    t_(r, c) = 1.0;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      t_.row(i) -= f * t_.row(r);
      t_(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Keeps columns [0, keep) plus the rhs column.
  void truncate_columns(Eigen::Index keep) {
    RowMatrix next(t_.rows(), keep + 1);
    next.leftCols(keep) = t_.leftCols(keep);
    next.col(keep) = t_.col(t_.cols() - 1);
    t_.swap(next);
  }

  void drop_rows(const std::vector<bool>& drop) {
    Eigen::Index kept = 0;
    for (bool d : drop) kept += d ? 0 : 1;
    RowMatrix next(kept + 1, t_.cols());
    std::vector<Eigen::Index> next_basis;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows(); ++i) {
      if (drop[i]) continue;
      next.row(k++) = t_.row(i);
      next_basis.push_back(basis_[i]);
    }
    next.row(k) = t_.row(rows());
    t_.swap(next);
    basis_.swap(next_basis);
  }

 private:
  RowMatrix t_;
  std::vector<Eigen::Index> basis_;
};

enum class PhaseResult { kOptimal, kUnbounded };

class PivotLoop {
 public:
  PivotLoop(long max_iterations, std::ostream* dump) : max_iterations_(max_iterations), dump_(dump) {}

  int iterations() const { return static_cast<int>(iterations_); }

  // Pivots until no column in [0, allowed) has a negative reduced cost.
  PhaseResult run(Tableau& tab, Eigen::Index allowed, int phase) {
    const long stall_threshold = 2 * static_cast<long>(std::max<Eigen::Index>(tab.rows(), 1));
    long degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run >= stall_threshold;
      const Eigen::Index enter = choose_entering(tab, allowed, bland);
      if (enter < 0) return PhaseResult::kOptimal;
      const Eigen::Index leave = choose_leaving(tab, enter, bland);
      if (leave < 0) return PhaseResult::kUnbounded;
      if (++iterations_ > max_iterations_) {
        fail(ErrorCode::kMaxIterationsExceeded,
             "simplex exceeded " + std::to_string(max_iterations_) + " pivots");
      }
      const double step = std::max(tab.rhs(leave), 0.0) / tab.at(leave, enter);
      degenerate_run = step <= kDegenerateStep ? degenerate_run + 1 : 0;
      if (dump_ != nullptr) {
        *dump_ << "phase " << phase << " iter " << iterations_ << " enter " << enter << " leave_row " << leave
               << " leave_var " << tab.basis()[leave] << " step " << step << (bland ? " bland" : "")
               << " obj " << tab.objective() << '\n';
      }
      tab.pivot(leave, enter);
    }
  }

 private:
  static Eigen::Index choose_entering(const Tableau& tab, Eigen::Index allowed, bool bland) {
    Eigen::Index best = -1;
    double best_cost = -kOptTol;
    for (Eigen::Index c = 0; c < allowed; ++c) {
      const double d = tab.cost(c);
      if (d < best_cost) {
        best = c;
        if (bland) break;
        best_cost = d;
      }
    }
    return best;
  }

  static Eigen::Index choose_leaving(const Tableau& tab, Eigen::Index enter, bool bland) {
    Eigen::Index best = -1;
    double best_ratio = 0.0;
    double best_pivot = 0.0;
    for (Eigen::Index r = 0; r < tab.rows(); ++r) {
      const double a = tab.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(tab.rhs(r), 0.0) / a;
      if (best < 0 || ratio < best_ratio - kDegenerateStep) {
        best = r;
        best_ratio = ratio;
        best_pivot = a;
        continue;
      }
      if (ratio <= best_ratio + kDegenerateStep) {
        const bool take = bland ? tab.basis()[r] < tab.basis()[best] : a > best_pivot;
        if (take) {
          best = r;
          best_ratio = std::min(ratio, best_ratio);
          best_pivot = a;
        }
      }
    }
    return best;
  }

  long max_iterations_;
  long iterations_ = 0;
  std::ostream* dump_;
};

}  // namespace

double max_violation(const LpProblem& problem, const Eigen::VectorXd& x) {
  double worst = 0.0;
  if (problem.ineq_matrix.rows() > 0) {
    const Eigen::VectorXd r = problem.ineq_matrix * x - problem.ineq_rhs;
    worst = std::max(worst, r.maxCoeff());
  }
  if (problem.eq_matrix.rows() > 0) {
    const Eigen::VectorXd r = problem.eq_matrix * x - problem.eq_rhs;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  for (std::size_t j = 0; j < problem.nonnegative.size(); ++j) {
    if (problem.nonnegative[j]) worst = std::max(worst, -x[static_cast<Eigen::Index>(j)]);
  }
  return worst;
}

LpOutcome solve(const LpProblem& problem, const SolverOptions& options) {
  validate(problem);
  const Eigen::Index n = problem.num_vars();
  const Eigen::Index m = problem.ineq_matrix.rows();
  const Eigen::Index p = problem.eq_matrix.rows();
  const Eigen::Index rows = m + p;

  // Column layout: structural parts, slacks, artificials.
  std::vector<Eigen::Index> pos_col(n), neg_col(n, -1);
  Eigen::Index ncols = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    pos_col[j] = ncols++;
    const bool nonneg = !problem.nonnegative.empty() && problem.nonnegative[static_cast<std::size_t>(j)];
    if (!nonneg) neg_col[j] = ncols++;
  }
  const Eigen::Index slack_start = ncols;
  ncols += m;
  const Eigen::Index art_start = ncols;

  std::vector<double> row_sign(rows, 1.0);
  std::vector<bool> needs_art(rows, false);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (problem.ineq_rhs[i] < 0.0) {
      row_sign[i] = -1.0;
      needs_art[i] = true;
    }
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (problem.eq_rhs[i] < 0.0) row_sign[m + i] = -1.0;
    needs_art[m + i] = true;
  }
  const Eigen::Index num_art = std::count(needs_art.begin(), needs_art.end(), true);
  ncols += num_art;

  Tableau tab(rows, ncols);
  Eigen::Index art = art_start;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const bool is_eq = i >= m;
    const double s = row_sign[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = s * (is_eq ? problem.eq_matrix(i - m, j) : problem.ineq_matrix(i, j));
      tab.at(i, pos_col[j]) = a;
      if (neg_col[j] >= 0) tab.at(i, neg_col[j]) = -a;
    }
    if (!is_eq) tab.at(i, slack_start + i) = s;
    tab.rhs(i) = s * (is_eq ? problem.eq_rhs[i - m] : problem.ineq_rhs[i]);
    if (needs_art[i]) {
      tab.at(i, art) = 1.0;
      tab.basis()[i] = art++;
    } else {
      tab.basis()[i] = slack_start + i;
    }
  }

  std::unique_ptr<std::ofstream> dump;
  if (!options.debug_dump_path.empty()) {
    dump = std::make_unique<std::ofstream>(options.debug_dump_path, std::ios::app);
    *dump << "# lp n=" << n << " m=" << m << " p=" << p << '\n';
  }
  PivotLoop loop(50L * (n + m + p) + 50, dump.get());
  LpOutcome out;

  if (num_art > 0) {
    auto cost = tab.cost_row();
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (needs_art[i]) cost -= tab.row(i);
    }
    for (Eigen::Index c = art_start; c < ncols; ++c) cost[c] = 0.0;
    loop.run(tab, art_start, 1);
    if (tab.objective() > kFeasTol) {
      out.status = LpStatus::kInfeasible;
      out.iterations = loop.iterations();
      return out;
    }
    // Pivot remaining (zero-level) artificials out; rows with no usable entry
    // are linearly dependent and dropped.
    std::vector<bool> drop(rows, false);
    bool any_drop = false;
    for (Eigen::Index r = 0; r < tab.rows(); ++r) {
      if (tab.basis()[r] < art_start) continue;
      Eigen::Index best = -1;
      double best_abs = kPivotTol;
      for (Eigen::Index c = 0; c < art_start; ++c) {
        const double a = std::abs(tab.at(r, c));
        if (a > best_abs) {
          best_abs = a;
          best = c;
        }
      }
      if (best >= 0) {
        tab.pivot(r, best);
      } else {
        drop[r] = true;
        any_drop = true;
      }
    }
    if (any_drop) tab.drop_rows(drop);
    tab.truncate_columns(art_start);
  }

  // Phase 2 costs.
  Eigen::VectorXd col_cost = Eigen::VectorXd::Zero(art_start);
  for (Eigen::Index j = 0; j < n; ++j) {
    col_cost[pos_col[j]] = problem.objective[j];
    if (neg_col[j] >= 0) col_cost[neg_col[j]] = -problem.objective[j];
  }
  {
    auto cost = tab.cost_row();
    cost.setZero();
    cost.head(art_start) = col_cost.transpose();
    for (Eigen::Index r = 0; r < tab.rows(); ++r) {
      const double cb = col_cost[tab.basis()[r]];
      if (cb != 0.0) cost -= cb * tab.row(r);
    }
  }
  const PhaseResult phase2 = loop.run(tab, art_start, 2);
  out.iterations = loop.iterations();
  if (phase2 == PhaseResult::kUnbounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(art_start);
  for (Eigen::Index r = 0; r < tab.rows(); ++r) y[tab.basis()[r]] = std::max(tab.rhs(r), 0.0);
  Eigen::VectorXd x(n);
  for (Eigen::Index j = 0; j < n; ++j) x[j] = y[pos_col[j]] - (neg_col[j] >= 0 ? y[neg_col[j]] : 0.0);

  out.status = LpStatus::kOptimal;
  out.objective_value = problem.objective.dot(x);
  out.solution = std::move(x);
  return out;
}

}  // namespace sparsetree::lp
