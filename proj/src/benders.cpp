#include "epicut/benders.hpp"

#include <chrono>
#include <cmath>

#include "epicut/parallel.hpp"

namespace epicut {

BendersEngine::BendersEngine(const BlockDiagonalProblem& problem) : problem_(problem) {
  sub_.resize(problem.num_blocks());
}

SubproblemResult BendersEngine::solve_subproblem(int k, std::span<const double> x_hat) {
  if (static_cast<int>(x_hat.size()) != problem_.n())
    throw std::invalid_argument("solve_subproblem: x_hat size mismatch");
  if (!sub_.at(k)) sub_[k] = std::make_unique<SimplexSolver>(build_block_lp(problem_, k, false));
  SimplexSolver& solver = *sub_[k];
  std::vector<BoundChange> fix(problem_.n());
  for (int j = 0; j < problem_.n(); ++j) fix[j] = {j, x_hat[j], x_hat[j]};
  const LPSolution& sol = solver.update_bounds_and_resolve(fix);
  switch (sol.status) {
    case SolveStatus::Optimal: break;
    case SolveStatus::PrimalInfeasible: throw RecourseViolation(k);
    case SolveStatus::Unbounded:
      throw std::runtime_error("block " + std::to_string(k) + " recourse unbounded below");
    case SolveStatus::IterationLimit:
      throw std::runtime_error("block " + std::to_string(k) + " subproblem hit the pivot cap");
  }
  SubproblemResult out;
  out.value = sol.objective;
  out.dual = sol.row_dual;  // block rows only: the LP carries no R(X) rows
  return out;
}

Cut BendersEngine::make_benders_cut(int k, std::span<const double> dual) const {
  const Block& blk = problem_.blocks.at(k);
  if (dual.size() != blk.rows.size()) throw std::invalid_argument("make_benders_cut: dual size mismatch");
  std::vector<double> coef(problem_.n(), 0.0);
  double rhs = 0.0;
  for (size_t r = 0; r < blk.rows.size(); ++r) {
    const double pi = dual[r];
    if (pi == 0.0) continue;
    const BlockRow& row = blk.rows[r];
    for (size_t t = 0; t < row.t_index.size(); ++t) coef[row.t_index[t]] += pi * row.t_value[t];
    rhs += pi * row.rhs;
  }
  Cut cut;
  cut.block = k;
  cut.theta_coef = 1.0;
  cut.rhs = rhs;
  cut.origin = CutOrigin::Benders;
  for (int j = 0; j < problem_.n(); ++j)
    if (coef[j] != 0.0) {
      cut.x_index.push_back(j);
      cut.x_value.push_back(coef[j]);
    }
  return cut;
}

RootRelaxation kelley_root_loop(const BlockDiagonalProblem& problem, BendersEngine& engine, double tol,
                                const KelleyLimits& limits) {
  const auto start = std::chrono::steady_clock::now();
  const int n = problem.n(), nb = problem.num_blocks();
  RootRelaxation out{nullptr, theta_floors(problem), CutPool(nb)};
  out.master = std::make_unique<SimplexSolver>(build_master(problem, out.theta_lb));

  const LPSolution* sol = &out.master->solve();
  if (sol->status != SolveStatus::Optimal)
    throw std::runtime_error("kelley_root_loop: initial master did not solve to optimality");

  const int workers = effective_workers(limits.workers);
  std::vector<SubproblemResult> results(nb);
  for (out.iterations = 1; out.iterations <= limits.max_iterations; ++out.iterations) {
    const std::vector<double> x_hat(sol->x.begin(), sol->x.begin() + n);
    parallel_for(nb, workers, [&](int k) { results[k] = engine.solve_subproblem(k, x_hat); });

    std::vector<SparseRow> rows;
    for (int k = 0; k < nb; ++k) {
      const double theta_k = sol->x[n + k];
      if (results[k].value - theta_k > tol) {
        Cut cut = engine.make_benders_cut(k, results[k].dual);
        if (out.pool.add(cut)) rows.push_back(cut.master_row(n));
      }
    }
    if (rows.empty()) {
      out.converged = true;
      break;
    }
    sol = &out.master->add_rows_and_resolve(rows);
    if (sol->status != SolveStatus::Optimal)
      throw std::runtime_error("kelley_root_loop: master re-solve failed");
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > limits.time_limit_s) break;
  }
  out.z_lp = out.master->last().objective;
  return out;
}

}  // namespace epicut
