#include "epicut/pb.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace epicut {

namespace {

constexpr double kRowTol = 1e-9;       // term-row violation threshold
constexpr double kViolationTol = 1e-6;  // cut emission threshold

}  // namespace

PBSeparator::PBSeparator(const BlockDiagonalProblem& problem, int k) : problem_(problem), block_(k) {
  term_lp_ = std::make_unique<SimplexSolver>(build_block_lp(problem, k, true));
}

void PBSeparator::set_weights(double pi0, std::span<const double> pi) {
  const int n = problem_.n();
  const Block& blk = problem_.blocks[block_];
  std::vector<double> obj(n + blk.num_y, 0.0);
  for (int j = 0; j < n; ++j) obj[j] = pi[j];
  for (int j = 0; j < blk.num_y; ++j) obj[n + j] = pi0 * blk.d[j];
  term_lp_->update_objective_and_resolve(obj);
}

TermResult PBSeparator::solve_slice(const SupportSet& support, std::uint32_t chi) {
  const int n = problem_.n();
  std::vector<BoundChange> fix;
  fix.reserve(n);
  std::vector<char> in_support(n, 0);
  for (int t = 0; t < support.size(); ++t) in_support[support.indices[t]] = 1;
  for (int j = 0; j < n; ++j) {
    if (!in_support[j]) {
      fix.push_back({j, 0.0, 1.0});
    }
  }
  for (int t = 0; t < support.size(); ++t) {
    const double v = (chi >> t) & 1 ? 1.0 : 0.0;
    fix.push_back({support.indices[t], v, v});
  }
  const LPSolution& sol = term_lp_->update_bounds_and_resolve(fix);
  TermResult out;
  if (sol.status == SolveStatus::PrimalInfeasible) return out;  // empty slice
  if (sol.status != SolveStatus::Optimal)
    throw std::runtime_error("pb term subproblem did not solve for block " + std::to_string(block_));
  const Block& blk = problem_.blocks[block_];
  out.value = sol.objective;
  out.x.assign(sol.x.begin(), sol.x.begin() + n);
  out.theta = 0.0;
  for (int j = 0; j < blk.num_y; ++j) out.theta += blk.d[j] * sol.x[n + j];
  return out;
}

TermResult PBSeparator::term_subproblem(const SupportSet& support, std::uint32_t chi, double pi0,
                                        std::span<const double> pi) {
  if (pi0 < 0.0) throw std::invalid_argument("term_subproblem: pi0 must be nonnegative");
  set_weights(pi0, pi);
  return solve_slice(support, chi);
}

PBResult PBSeparator::separate(std::span<const double> x_hat, double theta_hat,
                               const SupportSet& support, const PBLimits& limits) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const int n = problem_.n();
  const int K = support.size();
  const std::vector<std::uint32_t> order = gray_sequence(K);

  // seed each feasible term with its theta-minimizing point (the nu point),
  // which keeps the first master LP bounded
  std::vector<double> zeros(n, 0.0);
  set_weights(1.0, zeros);
  std::vector<char> feasible(1u << K, 0);
  std::vector<std::pair<double, std::vector<double>>> seeds;  // (theta, x)
  for (const std::uint32_t chi : order) {
    const TermResult seed = solve_slice(support, chi);
    if (seed.value == kInf) continue;
    feasible[chi] = 1;
    seeds.emplace_back(seed.theta, seed.x);
  }
  PBResult out;
  if (seeds.empty()) return out;  // R(X) empty; nothing to separate

  // master over (pi0, pi+, pi-, eta): minimize the cut value at (theta, x)hat
  LinearProgram master;
  const int v_pi0 = master.add_var(0.0, kInf, theta_hat);
  std::vector<int> v_pos(n), v_neg(n);
  for (int j = 0; j < n; ++j) v_pos[j] = master.add_var(0.0, kInf, x_hat[j]);
  for (int j = 0; j < n; ++j) v_neg[j] = master.add_var(0.0, kInf, -x_hat[j]);
  const int v_eta = master.add_var(-kInf, kInf, -1.0);
  SparseRow norm;  // pi0 + sum(pi+ + pi-) <= 1
  norm.push(v_pi0, 1.0);
  for (int j = 0; j < n; ++j) {
    norm.push(v_pos[j], 1.0);
    norm.push(v_neg[j], 1.0);
  }
  norm.sense = RowSense::LE;
  norm.rhs = 1.0;
  master.add_row(std::move(norm));
  auto point_row = [&](double theta, std::span<const double> x) {
    SparseRow row;  // pi0 theta + pi^T x - eta >= 0
    row.push(v_pi0, theta);
    for (int j = 0; j < n; ++j) {
      if (x[j] != 0.0) {
        row.push(v_pos[j], x[j]);
        row.push(v_neg[j], -x[j]);
      }
    }
    row.push(v_eta, -1.0);
    row.sense = RowSense::GE;
    row.rhs = 0.0;
    return row;
  };
  for (const auto& [theta, x] : seeds) master.add_row(point_row(theta, x));
  out.points_generated = static_cast<int>(seeds.size());

  SimplexSolver solver(std::move(master));
  solver.solve();
  double pi0 = 0.0, eta = 0.0;
  std::vector<double> pi(n, 0.0);
  bool converged = false;
  while (true) {
    const LPSolution& sol = solver.last();
    if (sol.status != SolveStatus::Optimal)
      throw std::runtime_error("pb master LP did not solve");
    ++out.master_solves;
    pi0 = sol.x[v_pi0];
    for (int j = 0; j < n; ++j) pi[j] = sol.x[v_pos[j]] - sol.x[v_neg[j]];
    eta = sol.x[v_eta];

    if (out.master_solves >= limits.max_master_solves || elapsed() > limits.wall_seconds) {
      out.hit_limit = true;
      break;
    }
    set_weights(pi0, pi);
    std::vector<SparseRow> rows;
    for (const std::uint32_t chi : order) {
      if (!feasible[chi]) continue;
      const TermResult term = solve_slice(support, chi);
      if (term.value < eta - kRowTol) {
        rows.push_back(point_row(term.theta, term.x));
        ++out.points_generated;
      }
    }
    if (rows.empty()) {
      converged = true;
      break;
    }
    solver.add_rows_and_resolve(rows);
  }

  if (!converged) {
    // repair the iterate: lower eta to the exact minimum over all terms
    set_weights(pi0, pi);
    double eta_true = kInf;
    for (const std::uint32_t chi : order) {
      if (!feasible[chi]) continue;
      eta_true = std::min(eta_true, solve_slice(support, chi).value);
    }
    eta = std::min(eta, eta_true);
  }
  double objective = pi0 * theta_hat - eta;
  for (int j = 0; j < n; ++j) objective += pi[j] * x_hat[j];
  out.objective = objective;
  if (objective >= -kViolationTol) return out;  // NoViolation

  out.kind = PBResult::Kind::Cut;
  Cut cut;
  cut.block = block_;
  cut.theta_coef = pi0;
  cut.rhs = eta;
  cut.origin = CutOrigin::PB;
  for (int j = 0; j < n; ++j)
    if (std::abs(pi[j]) > 1e-12) {
      cut.x_index.push_back(j);
      cut.x_value.push_back(pi[j]);
    }
  out.cut = std::move(cut);
  return out;
}

}  // namespace epicut
