#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace epicut {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : char { LE = 'L', EQ = 'E', GE = 'G' };

/// One sparse linear row: sum_j value[t] * x[index[t]]  (sense)  rhs.
struct SparseRow {
  std::vector<int> index;
  std::vector<double> value;
  RowSense sense = RowSense::LE;
  double rhs = 0.0;

  void push(int j, double v) {
    index.push_back(j);
    value.push_back(v);
  }
};

/// Minimization LP over bounded variables. Rows may mix senses.
struct LinearProgram {
  std::vector<double> obj;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<SparseRow> rows;

  int add_var(double lb, double ub, double cost = 0.0) {
    lower.push_back(lb);
    upper.push_back(ub);
    obj.push_back(cost);
    return static_cast<int>(obj.size()) - 1;
  }
  void add_row(SparseRow row) { rows.push_back(std::move(row)); }

  int num_vars() const { return static_cast<int>(obj.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  /// Returns an empty string when well-formed, else a description of the
  /// first violated invariant (bad index, crossed bounds, non-finite cost).
  std::string check() const;
};

enum class SolveStatus { Optimal, PrimalInfeasible, Unbounded, IterationLimit };

enum class BasisStatus : char { Basic = 'B', AtLower = 'L', AtUpper = 'U', Free = 'F' };

struct LPSolution {
  SolveStatus status = SolveStatus::IterationLimit;
  double objective = 0.0;
  std::vector<double> x;             // primal values, structural variables
  std::vector<double> row_dual;      // y, one per row
  std::vector<double> reduced_cost;  // structural variables
  std::vector<BasisStatus> var_status;
  std::vector<BasisStatus> row_status;  // status of the row's logical
  std::vector<double> ray;  // improving direction over structurals when Unbounded
};

struct BoundChange {
  int var;
  double lower;
  double upper;
};

struct SimplexOptions {
  double feas_tol = 1e-7;    // primal feasibility
  double opt_tol = 1e-9;     // reduced-cost entering threshold
  double pivot_tol = 1e-9;   // minimum pivot magnitude
  int refactor_every = 100;  // dense refactorization cadence
  int bland_after = 1000;    // degenerate pivots before Bland's rule
  std::int64_t max_pivots = -1;  // <0 means 100*(rows+cols) per call
};

/// Warm-startable bounded-variable revised simplex with a dense basis
/// inverse. One instance is exclusive to one execution context; distinct
/// instances may run concurrently.
///
/// Warm paths: bound changes and row additions keep the basis dual feasible
/// and re-solve with the dual simplex; objective changes keep it primal
/// feasible and re-solve with the primal simplex.
class SimplexSolver {
 public:
  explicit SimplexSolver(LinearProgram lp, SimplexOptions opt = {});

  const LPSolution& solve();
  const LPSolution& update_bounds_and_resolve(std::span<const BoundChange> changes);
  const LPSolution& add_rows_and_resolve(std::span<const SparseRow> rows);
  const LPSolution& update_objective_and_resolve(std::span<const double> obj);

  const LPSolution& last() const { return sol_; }
  const LinearProgram& lp() const { return lp_; }
  std::int64_t pivots() const { return lifetime_pivots_; }

  /// Process-wide pivot counter; statistics only, never read by the solver.
  static std::uint64_t total_pivots();

 private:
  enum class LoopResult { Converged, Stuck, Unbounded, PivotLimit, Restart };

  int nvars() const { return static_cast<int>(lp_.obj.size()); }
  int nrows() const { return static_cast<int>(lp_.rows.size()); }
  int ntotal() const { return nvars() + nrows(); }

  void build_columns();
  void reset_to_logical_basis();
  bool factorize();
  void refactor_or_reset();
  void compute_basic_values();
  void compute_duals(const std::vector<double>& cost, std::vector<double>& y) const;
  double reduced_cost(int j, const std::vector<double>& y, const std::vector<double>& cost) const;
  void ftran(int j, std::vector<double>& w) const;  // w = Binv * column j
  void pivot(int entering, int leave_pos, const std::vector<double>& w, BasisStatus leave_stat);
  double bound_violation(int j) const;
  double total_infeasibility() const;

  LoopResult primal_loop(bool phase_one);
  LoopResult dual_loop();
  void begin_call();
  void run(bool try_dual_first);
  void extract_solution(SolveStatus status);
  bool pivot_budget_exhausted() const;

  LinearProgram lp_;
  SimplexOptions opt_;
  LPSolution sol_;

  // computational form: structurals 0..n-1, logical of row i is n+i,
  // rows read  A x + s = rhs  with the logical bounds encoding the sense.
  std::vector<double> lb_, ub_, cost_;
  std::vector<double> rhs_;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // per structural var
  std::vector<int> basis_;        // variable basic in each row position
  std::vector<int> basis_pos_;    // var -> position or -1
  std::vector<BasisStatus> stat_;
  std::vector<double> val_;
  std::vector<double> binv_;  // row-major nrows x nrows
  std::vector<double> unbounded_ray_;

  bool warm_ok_ = false;
  bool restart_pending_ = false;
  int pivots_since_refactor_ = 0;
  int degenerate_run_ = 0;
  std::int64_t call_pivots_ = 0;
  std::int64_t call_budget_ = 0;
  std::int64_t lifetime_pivots_ = 0;
};

/// One-shot cold solve.
LPSolution solve_lp(const LinearProgram& lp, SimplexOptions opt = {});

}  // namespace epicut
