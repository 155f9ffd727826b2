#include "epicut/lp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace epicut {

namespace {

std::atomic<std::uint64_t> g_total_pivots{0};

bool is_finite(double v) { return std::isfinite(v); }

}  // namespace

std::uint64_t SimplexSolver::total_pivots() { return g_total_pivots.load(std::memory_order_relaxed); }

std::string LinearProgram::check() const {
  const int n = num_vars();
  for (int j = 0; j < n; ++j) {
    if (!is_finite(obj[j])) return "objective coefficient " + std::to_string(j) + " not finite";
    if (lower[j] > upper[j]) return "crossed bounds on variable " + std::to_string(j);
    if (std::isnan(lower[j]) || std::isnan(upper[j])) return "NaN bound on variable " + std::to_string(j);
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    const SparseRow& row = rows[r];
    if (row.index.size() != row.value.size()) return "row " + std::to_string(r) + " index/value size mismatch";
    if (!is_finite(row.rhs)) return "row " + std::to_string(r) + " rhs not finite";
    for (size_t t = 0; t < row.index.size(); ++t) {
      if (row.index[t] < 0 || row.index[t] >= n)
        return "row " + std::to_string(r) + " references variable " + std::to_string(row.index[t]);
      if (!is_finite(row.value[t])) return "row " + std::to_string(r) + " has non-finite coefficient";
    }
  }
  return {};
}

SimplexSolver::SimplexSolver(LinearProgram lp, SimplexOptions opt) : lp_(std::move(lp)), opt_(opt) {
  std::string err = lp_.check();
  if (!err.empty()) throw std::invalid_argument("SimplexSolver: " + err);
  build_columns();
}

void SimplexSolver::build_columns() {
  const int n = nvars(), m = nrows();
  lb_.assign(n + m, 0.0);
  ub_.assign(n + m, 0.0);
  cost_.assign(n + m, 0.0);
  rhs_.assign(m, 0.0);
  cols_.assign(n, {});
  for (int j = 0; j < n; ++j) {
    lb_[j] = lp_.lower[j];
    ub_[j] = lp_.upper[j];
    cost_[j] = lp_.obj[j];
  }
  for (int i = 0; i < m; ++i) {
    const SparseRow& row = lp_.rows[i];
    rhs_[i] = row.rhs;
    for (size_t t = 0; t < row.index.size(); ++t)
      if (row.value[t] != 0.0) cols_[row.index[t]].emplace_back(i, row.value[t]);
    const int s = n + i;
    switch (row.sense) {
      case RowSense::LE: lb_[s] = 0.0;    ub_[s] = kInf; break;
      case RowSense::EQ: lb_[s] = 0.0;    ub_[s] = 0.0;  break;
      case RowSense::GE: lb_[s] = -kInf;  ub_[s] = 0.0;  break;
    }
  }
  warm_ok_ = false;
}

void SimplexSolver::reset_to_logical_basis() {
  const int n = nvars(), m = nrows();
  basis_.resize(m);
  basis_pos_.assign(n + m, -1);
  stat_.assign(n + m, BasisStatus::AtLower);
  val_.assign(n + m, 0.0);
  for (int j = 0; j < n + m; ++j) {
    if (is_finite(lb_[j])) {
      stat_[j] = BasisStatus::AtLower;
      val_[j] = lb_[j];
    } else if (is_finite(ub_[j])) {
      stat_[j] = BasisStatus::AtUpper;
      val_[j] = ub_[j];
    } else {
      stat_[j] = BasisStatus::Free;
      val_[j] = 0.0;
    }
  }
  for (int i = 0; i < m; ++i) {
    basis_[i] = n + i;
    basis_pos_[n + i] = i;
    stat_[n + i] = BasisStatus::Basic;
  }
  binv_.assign(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) binv_[static_cast<size_t>(i) * m + i] = 1.0;
  pivots_since_refactor_ = 0;
}

// Dense Gauss-Jordan inversion of the current basis matrix.
bool SimplexSolver::factorize() {
  const int n = nvars(), m = nrows();
  std::vector<double> a(static_cast<size_t>(m) * m, 0.0);
  for (int p = 0; p < m; ++p) {
    const int j = basis_[p];
    if (j >= n) {
      a[static_cast<size_t>(j - n) * m + p] = 1.0;
    } else {
      for (const auto& [row, coef] : cols_[j]) a[static_cast<size_t>(row) * m + p] = coef;
    }
  }
  std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) inv[static_cast<size_t>(i) * m + i] = 1.0;
  for (int c = 0; c < m; ++c) {
    int piv = c;
    double best = std::abs(a[static_cast<size_t>(c) * m + c]);
    for (int r = c + 1; r < m; ++r) {
      const double v = std::abs(a[static_cast<size_t>(r) * m + c]);
      if (v > best) { best = v; piv = r; }
    }
    if (best < 1e-12) return false;
    if (piv != c) {
      for (int k = 0; k < m; ++k) {
        std::swap(a[static_cast<size_t>(piv) * m + k], a[static_cast<size_t>(c) * m + k]);
        std::swap(inv[static_cast<size_t>(piv) * m + k], inv[static_cast<size_t>(c) * m + k]);
      }
    }
    const double d = 1.0 / a[static_cast<size_t>(c) * m + c];
    for (int k = 0; k < m; ++k) {
      a[static_cast<size_t>(c) * m + k] *= d;
      inv[static_cast<size_t>(c) * m + k] *= d;
    }
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = a[static_cast<size_t>(r) * m + c];
      if (f == 0.0) continue;
      for (int k = 0; k < m; ++k) {
        a[static_cast<size_t>(r) * m + k] -= f * a[static_cast<size_t>(c) * m + k];
        inv[static_cast<size_t>(r) * m + k] -= f * inv[static_cast<size_t>(c) * m + k];
      }
    }
  }
  binv_ = std::move(inv);
  pivots_since_refactor_ = 0;
  return true;
}

void SimplexSolver::refactor_or_reset() {
  if (!factorize()) {
    reset_to_logical_basis();
    restart_pending_ = true;
  }
}

void SimplexSolver::compute_basic_values() {
  const int n = nvars(), m = nrows();
  std::vector<double> r = rhs_;
  for (int j = 0; j < n; ++j) {
    if (stat_[j] == BasisStatus::Basic || val_[j] == 0.0) continue;
    for (const auto& [row, coef] : cols_[j]) r[row] -= coef * val_[j];
  }
  for (int i = 0; i < m; ++i) {
    const int s = n + i;
    if (stat_[s] != BasisStatus::Basic && val_[s] != 0.0) r[i] -= val_[s];
  }
  for (int p = 0; p < m; ++p) {
    double v = 0.0;
    const double* row = binv_.data() + static_cast<size_t>(p) * m;
    for (int i = 0; i < m; ++i) v += row[i] * r[i];
    val_[basis_[p]] = v;
  }
}

void SimplexSolver::compute_duals(const std::vector<double>& cost, std::vector<double>& y) const {
  const int m = nrows();
  y.assign(m, 0.0);
  for (int p = 0; p < m; ++p) {
    const double cb = cost[basis_[p]];
    if (cb == 0.0) continue;
    const double* row = binv_.data() + static_cast<size_t>(p) * m;
    for (int i = 0; i < m; ++i) y[i] += cb * row[i];
  }
}

double SimplexSolver::reduced_cost(int j, const std::vector<double>& y, const std::vector<double>& cost) const {
  const int n = nvars();
  double d = cost[j];
  if (j >= n) {
    d -= y[j - n];
  } else {
    for (const auto& [row, coef] : cols_[j]) d -= y[row] * coef;
  }
  return d;
}

void SimplexSolver::ftran(int j, std::vector<double>& w) const {
  const int n = nvars(), m = nrows();
  w.assign(m, 0.0);
  if (j >= n) {
    const int r = j - n;
    for (int p = 0; p < m; ++p) w[p] = binv_[static_cast<size_t>(p) * m + r];
  } else {
    for (const auto& [row, coef] : cols_[j])
      for (int p = 0; p < m; ++p) w[p] += binv_[static_cast<size_t>(p) * m + row] * coef;
  }
}

// Basis change: `leaving` (at position leave_pos) exits with status
// leave_stat, `entering` becomes basic. Caller has already updated values.
void SimplexSolver::pivot(int entering, int leave_pos, const std::vector<double>& w, BasisStatus leave_stat) {
  const int m = nrows();
  const int leaving = basis_[leave_pos];
  stat_[leaving] = leave_stat;
  const double piv = w[leave_pos];
  double* prow = binv_.data() + static_cast<size_t>(leave_pos) * m;
  const double inv = 1.0 / piv;
  for (int k = 0; k < m; ++k) prow[k] *= inv;
  for (int p = 0; p < m; ++p) {
    if (p == leave_pos) continue;
    const double f = w[p];
    if (f == 0.0) continue;
    double* row = binv_.data() + static_cast<size_t>(p) * m;
    for (int k = 0; k < m; ++k) row[k] -= f * prow[k];
  }
  basis_[leave_pos] = entering;
  basis_pos_[entering] = leave_pos;
  basis_pos_[leaving] = -1;
  stat_[entering] = BasisStatus::Basic;
  ++pivots_since_refactor_;
  ++call_pivots_;
  ++lifetime_pivots_;
  g_total_pivots.fetch_add(1, std::memory_order_relaxed);
  if (pivots_since_refactor_ >= opt_.refactor_every) {
    refactor_or_reset();
    if (!restart_pending_) compute_basic_values();
  }
}

double SimplexSolver::bound_violation(int j) const {
  if (val_[j] < lb_[j]) return lb_[j] - val_[j];
  if (val_[j] > ub_[j]) return val_[j] - ub_[j];
  return 0.0;
}

double SimplexSolver::total_infeasibility() const {
  double s = 0.0;
  for (int p = 0; p < nrows(); ++p) {
    const double v = bound_violation(basis_[p]);
    if (v > opt_.feas_tol) s += v;
  }
  return s;
}

bool SimplexSolver::pivot_budget_exhausted() const { return call_pivots_ >= call_budget_; }

// Primal simplex. In phase one the cost of each basic variable is the
// infeasibility gradient (-1 below lower, +1 above upper) and steps stop at
// the first event so the gradient stays valid.
SimplexSolver::LoopResult SimplexSolver::primal_loop(bool phase_one) {
  const int n = nvars(), m = nrows(), nt = ntotal();
  std::vector<double> y, w;
  std::vector<double> ph1_cost;
  while (true) {
    if (restart_pending_) return LoopResult::Restart;
    if (pivot_budget_exhausted()) return LoopResult::PivotLimit;
    const std::vector<double>* cost = &cost_;
    if (phase_one) {
      ph1_cost.assign(nt, 0.0);
      bool any = false;
      for (int p = 0; p < m; ++p) {
        const int j = basis_[p];
        if (val_[j] < lb_[j] - opt_.feas_tol) { ph1_cost[j] = -1.0; any = true; }
        else if (val_[j] > ub_[j] + opt_.feas_tol) { ph1_cost[j] = 1.0; any = true; }
      }
      if (!any) return LoopResult::Converged;
      cost = &ph1_cost;
    }
    compute_duals(*cost, y);

    const bool bland = degenerate_run_ >= opt_.bland_after;
    int entering = -1;
    int edir = 0;
    double best = opt_.opt_tol;
    for (int j = 0; j < nt; ++j) {
      if (stat_[j] == BasisStatus::Basic) continue;
      if (lb_[j] == ub_[j]) continue;  // fixed
      const double d = reduced_cost(j, y, *cost);
      int dir = 0;
      if (stat_[j] == BasisStatus::AtLower && d < -opt_.opt_tol) dir = 1;
      else if (stat_[j] == BasisStatus::AtUpper && d > opt_.opt_tol) dir = -1;
      else if (stat_[j] == BasisStatus::Free && std::abs(d) > opt_.opt_tol) dir = d < 0 ? 1 : -1;
      if (dir == 0) continue;
      if (bland) { entering = j; edir = dir; break; }
      if (std::abs(d) > best) { best = std::abs(d); entering = j; edir = dir; }
    }
    if (entering < 0) {
      if (!phase_one) return LoopResult::Converged;
      return total_infeasibility() > opt_.feas_tol ? LoopResult::Stuck : LoopResult::Converged;
    }

    ftran(entering, w);
    double step = kInf;
    int leave_pos = -1;
    bool leave_at_upper = false;
    double leave_pivot = 0.0;
    for (int p = 0; p < m; ++p) {
      const double g = -edir * w[p];  // basic p rate per unit entering step
      if (std::abs(g) <= opt_.pivot_tol) continue;
      const int j = basis_[p];
      const double x = val_[j];
      double t = kInf;
      bool at_upper = false;
      if (phase_one && x < lb_[j] - opt_.feas_tol) {
        if (g > 0) { t = (lb_[j] - x) / g; at_upper = false; }
      } else if (phase_one && x > ub_[j] + opt_.feas_tol) {
        if (g < 0) { t = (x - ub_[j]) / (-g); at_upper = true; }
      } else if (g > 0) {
        if (is_finite(ub_[j])) { t = (ub_[j] - x) / g; at_upper = true; }
      } else {
        if (is_finite(lb_[j])) { t = (x - lb_[j]) / (-g); at_upper = false; }
      }
      if (t == kInf) continue;
      if (t < 0) t = 0;
      const bool better =
          (t < step - 1e-12) ||
          (t < step + 1e-12 &&
           (leave_pos < 0 || std::abs(w[p]) > std::abs(leave_pivot) + 1e-12 ||
            (std::abs(w[p]) > std::abs(leave_pivot) - 1e-12 && j < basis_[leave_pos])));
      if (better) {
        step = t;
        leave_pos = p;
        leave_at_upper = at_upper;
        leave_pivot = w[p];
      }
    }
    double own_range = ub_[entering] - lb_[entering];
    if (std::isnan(own_range)) own_range = kInf;
    if (own_range < step) {
      // bound flip, no basis change
      val_[entering] = edir > 0 ? ub_[entering] : lb_[entering];
      stat_[entering] = edir > 0 ? BasisStatus::AtUpper : BasisStatus::AtLower;
      for (int p = 0; p < m; ++p) val_[basis_[p]] += -edir * w[p] * own_range;
      degenerate_run_ = own_range <= 1e-12 ? degenerate_run_ + 1 : 0;
      ++call_pivots_;  // flips count against the budget too
      continue;
    }
    if (leave_pos < 0) {
      // no blocking event: certifies an unbounded improving ray (phase two)
      unbounded_ray_.assign(n, 0.0);
      if (entering < n) unbounded_ray_[entering] = edir;
      for (int p = 0; p < m; ++p)
        if (basis_[p] < n) unbounded_ray_[basis_[p]] = -edir * w[p];
      return LoopResult::Unbounded;
    }
    const int leaving = basis_[leave_pos];
    for (int p = 0; p < m; ++p) val_[basis_[p]] += -edir * w[p] * step;
    val_[entering] += edir * step;
    val_[leaving] = leave_at_upper ? ub_[leaving] : lb_[leaving];
    pivot(entering, leave_pos, w, leave_at_upper ? BasisStatus::AtUpper : BasisStatus::AtLower);
    degenerate_run_ = step <= 1e-12 ? degenerate_run_ + 1 : 0;
  }
}

// Dual simplex; requires a dual-feasible basis (true after any optimal solve
// regardless of later bound changes or appended rows).
SimplexSolver::LoopResult SimplexSolver::dual_loop() {
  const int n = nvars(), m = nrows(), nt = ntotal();
  std::vector<double> y, w, rho(m);
  int tiny_pivot_retries = 0;
  while (true) {
    if (restart_pending_) return LoopResult::Restart;
    if (pivot_budget_exhausted()) return LoopResult::PivotLimit;
    int leave_pos = -1;
    double worst = opt_.feas_tol;
    for (int p = 0; p < m; ++p) {
      const double v = bound_violation(basis_[p]);
      if (v > worst) { worst = v; leave_pos = p; }
    }
    if (leave_pos < 0) return LoopResult::Converged;
    const int leaving = basis_[leave_pos];
    const bool below = val_[leaving] < lb_[leaving];

    rho.assign(m, 0.0);
    for (int i = 0; i < m; ++i) rho[i] = binv_[static_cast<size_t>(leave_pos) * m + i];
    compute_duals(cost_, y);

    const bool bland = degenerate_run_ >= opt_.bland_after;
    int entering = -1;
    double best_ratio = kInf;
    double best_alpha = 0.0;
    for (int j = 0; j < nt; ++j) {
      if (stat_[j] == BasisStatus::Basic) continue;
      if (lb_[j] == ub_[j]) continue;
      double a;
      if (j >= n) {
        a = rho[j - n];
      } else {
        a = 0.0;
        for (const auto& [row, coef] : cols_[j]) a += rho[row] * coef;
      }
      if (std::abs(a) <= opt_.pivot_tol) continue;
      // x_leaving moves by -a * dx_j when nonbasic j moves by dx_j
      bool ok = false;
      if (below) {
        if (stat_[j] == BasisStatus::AtLower && a < 0) ok = true;
        if (stat_[j] == BasisStatus::AtUpper && a > 0) ok = true;
        if (stat_[j] == BasisStatus::Free) ok = true;
      } else {
        if (stat_[j] == BasisStatus::AtLower && a > 0) ok = true;
        if (stat_[j] == BasisStatus::AtUpper && a < 0) ok = true;
        if (stat_[j] == BasisStatus::Free) ok = true;
      }
      if (!ok) continue;
      double d = reduced_cost(j, y, cost_);
      if (stat_[j] == BasisStatus::AtLower && d < 0) d = 0;  // clip tolerance noise
      if (stat_[j] == BasisStatus::AtUpper && d > 0) d = 0;
      const double ratio = std::abs(d) / std::abs(a);
      if (bland) {
        if (entering < 0 || j < entering) { entering = j; best_ratio = ratio; best_alpha = a; }
      } else {
        const bool better =
            (ratio < best_ratio - 1e-12) ||
            (ratio < best_ratio + 1e-12 &&
             (entering < 0 || std::abs(a) > std::abs(best_alpha) + 1e-12 ||
              (std::abs(a) > std::abs(best_alpha) - 1e-12 && j < entering)));
        if (better) { entering = j; best_ratio = ratio; best_alpha = a; }
      }
    }
    if (entering < 0) return LoopResult::Stuck;  // the row certifies primal infeasibility

    ftran(entering, w);
    if (std::abs(w[leave_pos]) < opt_.pivot_tol) {
      // disagreement between the priced row and the ftran column; refresh
      if (++tiny_pivot_retries > 3) {
        restart_pending_ = true;
        return LoopResult::Restart;
      }
      refactor_or_reset();
      if (restart_pending_) return LoopResult::Restart;
      compute_basic_values();
      continue;
    }
    tiny_pivot_retries = 0;
    const double target = below ? lb_[leaving] : ub_[leaving];
    const double delta = (val_[leaving] - target) / w[leave_pos];
    for (int p = 0; p < m; ++p) val_[basis_[p]] -= delta * w[p];
    val_[entering] += delta;
    val_[leaving] = target;
    pivot(entering, leave_pos, w, below ? BasisStatus::AtLower : BasisStatus::AtUpper);
    degenerate_run_ = std::abs(delta) <= 1e-12 ? degenerate_run_ + 1 : 0;
  }
}

void SimplexSolver::begin_call() {
  call_pivots_ = 0;
  call_budget_ = opt_.max_pivots > 0 ? opt_.max_pivots : 100LL * (nrows() + nvars());
  degenerate_run_ = 0;
}

// Runs to a final status from the current state. try_dual_first is set on
// warm paths where the basis is dual feasible but may be primal infeasible.
void SimplexSolver::run(bool try_dual_first) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (!warm_ok_) {
      reset_to_logical_basis();
      warm_ok_ = true;
      try_dual_first = false;
    }
    restart_pending_ = false;
    compute_basic_values();
    LoopResult r;
    if (try_dual_first) {
      r = dual_loop();
      if (r == LoopResult::Stuck) { extract_solution(SolveStatus::PrimalInfeasible); return; }
      if (r == LoopResult::PivotLimit) { extract_solution(SolveStatus::IterationLimit); return; }
      if (r == LoopResult::Restart) { try_dual_first = false; continue; }
    }
    r = primal_loop(true);
    if (r == LoopResult::Stuck) { extract_solution(SolveStatus::PrimalInfeasible); return; }
    if (r == LoopResult::PivotLimit) { extract_solution(SolveStatus::IterationLimit); return; }
    if (r == LoopResult::Restart) { try_dual_first = false; continue; }
    r = primal_loop(false);
    if (r == LoopResult::Unbounded) { extract_solution(SolveStatus::Unbounded); return; }
    if (r == LoopResult::PivotLimit) { extract_solution(SolveStatus::IterationLimit); return; }
    if (r == LoopResult::Restart) { try_dual_first = false; continue; }
    extract_solution(SolveStatus::Optimal);
    return;
  }
  extract_solution(SolveStatus::IterationLimit);
}

void SimplexSolver::extract_solution(SolveStatus status) {
  const int n = nvars(), m = nrows();
  sol_ = LPSolution{};
  sol_.status = status;
  if (status == SolveStatus::Unbounded) sol_.ray = unbounded_ray_;
  sol_.x.assign(n, 0.0);
  sol_.var_status.assign(n, BasisStatus::AtLower);
  sol_.row_status.assign(m, BasisStatus::Basic);
  sol_.row_dual.assign(m, 0.0);
  sol_.reduced_cost.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    sol_.x[j] = val_[j];
    sol_.var_status[j] = stat_[j];
  }
  for (int i = 0; i < m; ++i) sol_.row_status[i] = stat_[n + i];
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += cost_[j] * val_[j];
  sol_.objective = obj;
  if (status == SolveStatus::Optimal) {
    std::vector<double> y;
    compute_duals(cost_, y);
    sol_.row_dual = y;
    for (int j = 0; j < n; ++j) sol_.reduced_cost[j] = reduced_cost(j, y, cost_);
  }
}

const LPSolution& SimplexSolver::solve() {
  begin_call();
  run(false);
  return sol_;
}

const LPSolution& SimplexSolver::update_bounds_and_resolve(std::span<const BoundChange> changes) {
  const int n = nvars();
  for (const BoundChange& ch : changes) {
    if (ch.var < 0 || ch.var >= n) throw std::invalid_argument("bound change: bad variable index");
    if (ch.lower > ch.upper) throw std::invalid_argument("bound change: crossed bounds");
    lp_.lower[ch.var] = ch.lower;
    lp_.upper[ch.var] = ch.upper;
    lb_[ch.var] = ch.lower;
    ub_[ch.var] = ch.upper;
  }
  begin_call();
  if (!warm_ok_) {
    run(false);
    return sol_;
  }
  bool dual_safe = true;
  for (int j = 0; j < n; ++j) {
    if (stat_[j] == BasisStatus::Basic) continue;
    switch (stat_[j]) {
      case BasisStatus::AtLower:
        if (is_finite(lb_[j])) val_[j] = lb_[j];
        else if (is_finite(ub_[j])) { stat_[j] = BasisStatus::AtUpper; val_[j] = ub_[j]; dual_safe = false; }
        else { stat_[j] = BasisStatus::Free; val_[j] = 0.0; dual_safe = false; }
        break;
      case BasisStatus::AtUpper:
        if (is_finite(ub_[j])) val_[j] = ub_[j];
        else if (is_finite(lb_[j])) { stat_[j] = BasisStatus::AtLower; val_[j] = lb_[j]; dual_safe = false; }
        else { stat_[j] = BasisStatus::Free; val_[j] = 0.0; dual_safe = false; }
        break;
      case BasisStatus::Free:
        if (is_finite(lb_[j]) || is_finite(ub_[j])) {
          stat_[j] = is_finite(lb_[j]) ? BasisStatus::AtLower : BasisStatus::AtUpper;
          val_[j] = is_finite(lb_[j]) ? lb_[j] : ub_[j];
          dual_safe = false;
        }
        break;
      default: break;
    }
  }
  run(dual_safe && sol_.status == SolveStatus::Optimal);
  return sol_;
}

const LPSolution& SimplexSolver::add_rows_and_resolve(std::span<const SparseRow> rows) {
  const int n = nvars();
  for (const SparseRow& row : rows) {
    for (int idx : row.index)
      if (idx < 0 || idx >= n) throw std::invalid_argument("add_rows: bad variable index");
  }
  if (!warm_ok_) {
    for (const SparseRow& row : rows) lp_.add_row(row);
    build_columns();
    begin_call();
    run(false);
    return sol_;
  }
  const bool was_optimal = sol_.status == SolveStatus::Optimal;
  for (const SparseRow& row : rows) {
    const int m_old = nrows();
    lp_.add_row(row);
    rhs_.push_back(row.rhs);
    double slb = 0.0, sub = 0.0;
    switch (row.sense) {
      case RowSense::LE: slb = 0.0;   sub = kInf; break;
      case RowSense::EQ: slb = 0.0;   sub = 0.0;  break;
      case RowSense::GE: slb = -kInf; sub = 0.0;  break;
    }
    // logical ids are n + row index, so appending keeps existing ids stable
    lb_.push_back(slb);
    ub_.push_back(sub);
    cost_.push_back(0.0);
    val_.push_back(0.0);
    stat_.push_back(BasisStatus::Basic);
    basis_pos_.push_back(static_cast<int>(basis_.size()));
    for (size_t t = 0; t < row.index.size(); ++t)
      if (row.value[t] != 0.0) cols_[row.index[t]].emplace_back(m_old, row.value[t]);
    // grow Binv:  [ B^-1 0 ; -aB^T B^-1  1 ]
    const int m_new = m_old + 1;
    std::vector<double> nb(static_cast<size_t>(m_new) * m_new, 0.0);
    for (int p = 0; p < m_old; ++p)
      for (int k = 0; k < m_old; ++k)
        nb[static_cast<size_t>(p) * m_new + k] = binv_[static_cast<size_t>(p) * m_old + k];
    std::vector<double> arow_b(m_old, 0.0);
    for (int p = 0; p < m_old; ++p) {
      const int j = basis_[p];
      if (j >= n) continue;
      for (size_t t = 0; t < row.index.size(); ++t)
        if (row.index[t] == j) arow_b[p] += row.value[t];
    }
    for (int k = 0; k < m_old; ++k) {
      double v = 0.0;
      for (int p = 0; p < m_old; ++p) v -= arow_b[p] * binv_[static_cast<size_t>(p) * m_old + k];
      nb[static_cast<size_t>(m_old) * m_new + k] = v;
    }
    nb[static_cast<size_t>(m_old) * m_new + m_old] = 1.0;
    binv_ = std::move(nb);
    basis_.push_back(n + m_old);
  }
  begin_call();
  run(was_optimal);
  return sol_;
}

const LPSolution& SimplexSolver::update_objective_and_resolve(std::span<const double> obj) {
  const int n = nvars();
  if (static_cast<int>(obj.size()) != n) throw std::invalid_argument("update_objective: size mismatch");
  for (int j = 0; j < n; ++j) {
    if (!is_finite(obj[j])) throw std::invalid_argument("update_objective: non-finite coefficient");
    lp_.obj[j] = obj[j];
    cost_[j] = obj[j];
  }
  begin_call();
  run(false);  // basis stays primal feasible; phase one is a cheap no-op
  return sol_;
}

LPSolution solve_lp(const LinearProgram& lp, SimplexOptions opt) {
  SimplexSolver solver(lp, opt);
  return solver.solve();
}

}  // namespace epicut
