// Test-only oracles and hand-built fixtures. Everything here recomputes
// values independently of the code paths under test (cold LP solves,
// exhaustive enumeration), so expected values are never copied from the
// implementation.
#pragma once

#include <cmath>
#include <vector>

#include "epicut/lp.hpp"
#include "epicut/problem.hpp"
#include "epicut/tilting.hpp"

namespace epicut::testing {

/// Worst slack of alpha^T x + beta^T y <= gamma over the mixed-binary set:
/// enumerate binary x, maximize the left side over each continuous slice.
/// Positive slack everywhere means valid; +inf when every slice is empty.
inline double mbs_worst_slack(const MixedBinarySet& set, const BaseInequality& ineq) {
  double worst = kInf;
  for (std::uint32_t mask = 0; mask < (1u << set.n); ++mask) {
    LinearProgram lp;
    for (int j = 0; j < set.n; ++j) {
      const double v = (mask >> j) & 1 ? 1.0 : 0.0;
      lp.add_var(v, v, ineq.alpha[j]);
    }
    for (int j = 0; j < set.p; ++j) lp.add_var(set.y_lower[j], set.y_upper[j], ineq.beta[j]);
    for (int j = 0; j < set.aux; ++j) lp.add_var(set.z_lower[j], set.z_upper[j], 0.0);
    for (double& c : lp.obj) c = -c;  // maximize
    for (const SparseRow& row : set.rows) lp.add_row(row);
    const LPSolution sol = solve_lp(lp);
    if (sol.status == SolveStatus::PrimalInfeasible) continue;
    if (sol.status == SolveStatus::Unbounded) return -kInf;
    if (sol.status != SolveStatus::Optimal) throw std::runtime_error("mbs oracle LP failed");
    worst = std::min(worst, ineq.gamma + sol.objective);  // objective = -max
  }
  return worst;
}

/// All binary points of X (cardinality row plus extra rows), n <= 20.
inline std::vector<std::vector<double>> enumerate_first_stage(const BlockDiagonalProblem& problem) {
  const int n = problem.n();
  std::vector<std::vector<double>> points;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    int card = 0;
    for (int j = 0; j < n; ++j) card += (mask >> j) & 1;
    const auto& fs = problem.first_stage;
    if (fs.card_sense == RowSense::LE ? card > fs.card_rhs : card < fs.card_rhs) continue;
    std::vector<double> x(n, 0.0);
    for (int j = 0; j < n; ++j) x[j] = (mask >> j) & 1;
    bool ok = true;
    for (const SparseRow& row : fs.extra_rows) {
      double act = 0.0;
      for (size_t t = 0; t < row.index.size(); ++t) act += row.value[t] * x[row.index[t]];
      if (row.sense == RowSense::LE && act > row.rhs + 1e-9) ok = false;
      if (row.sense == RowSense::GE && act < row.rhs - 1e-9) ok = false;
      if (row.sense == RowSense::EQ && std::abs(act - row.rhs) > 1e-9) ok = false;
    }
    if (ok) points.push_back(std::move(x));
  }
  return points;
}

/// Q_k(x) by one cold LP with x pinned through bounds; +inf when infeasible.
inline double block_value_at(const BlockDiagonalProblem& problem, int k, std::span<const double> x) {
  LinearProgram lp = build_block_lp(problem, k, false);
  for (int j = 0; j < problem.n(); ++j) {
    lp.lower[j] = x[j];
    lp.upper[j] = x[j];
  }
  const LPSolution sol = solve_lp(lp);
  if (sol.status == SolveStatus::PrimalInfeasible) return kInf;
  if (sol.status != SolveStatus::Optimal) throw std::runtime_error("block_value_at: LP did not solve");
  return sol.objective;
}

/// Enumeration validity oracle: the cut must hold at every x in X.
/// Returns the worst slack (negative means violated beyond tol).
inline double worst_cut_slack(const BlockDiagonalProblem& problem, const Cut& cut) {
  double worst = kInf;
  for (const auto& x : enumerate_first_stage(problem)) {
    const double q = block_value_at(problem, cut.block, x);
    if (q == kInf) continue;
    worst = std::min(worst, cut.value_at(x, q) - cut.rhs);
  }
  return worst;
}

/// One block with recourse  y >= 1 - x_0, cost 1:  Q(x) = max(0, 1 - x_0).
inline BlockDiagonalProblem trivial_recourse_problem(double first_stage_cost = 0.0) {
  BlockDiagonalProblem p;
  p.c = {first_stage_cost};
  p.first_stage.n = 1;
  p.first_stage.card_sense = RowSense::LE;
  p.first_stage.card_rhs = 1;
  Block blk;
  blk.index = 0;
  blk.num_y = 1;
  blk.d = {1.0};
  BlockRow row;  // x + y >= 1
  row.t_index = {0};
  row.t_value = {1.0};
  row.w_index = {0};
  row.w_value = {1.0};
  row.sense = RowSense::GE;
  row.rhs = 1.0;
  blk.rows.push_back(std::move(row));
  p.blocks.push_back(std::move(blk));
  return p;
}

/// Epigraph fixture with Q(x) = max_i (a_i x_i + b) as a one-variable block
/// LP (requires the max to stay nonnegative over the box, e.g. a >= 0 and
/// b >= 0, so the y >= 0 bound never binds).
inline BlockDiagonalProblem max_affine_problem(const std::vector<double>& a, double b) {
  const int n = static_cast<int>(a.size());
  BlockDiagonalProblem p;
  p.c.assign(n, 0.0);
  p.first_stage.n = n;
  p.first_stage.card_sense = RowSense::LE;
  p.first_stage.card_rhs = n;
  Block blk;
  blk.index = 0;
  blk.num_y = 1;
  blk.d = {1.0};
  for (int i = 0; i < n; ++i) {
    BlockRow row;  // y - a_i x_i >= b
    row.t_index = {i};
    row.t_value = {-a[i]};
    row.w_index = {0};
    row.w_value = {1.0};
    row.sense = RowSense::GE;
    row.rhs = b;
    blk.rows.push_back(std::move(row));
  }
  p.blocks.push_back(std::move(blk));
  return p;
}

/// Epigraph fixture with Q(x) = a^T x + b from the single row y >= a^T x + b.
/// Exact as long as a^T x + b stays nonnegative over the box (pick
/// b >= sum of negative parts).
inline BlockDiagonalProblem single_cut_problem(const std::vector<double>& a, double b) {
  const int n = static_cast<int>(a.size());
  BlockDiagonalProblem p;
  p.c.assign(n, 0.0);
  p.first_stage.n = n;
  p.first_stage.card_sense = RowSense::LE;
  p.first_stage.card_rhs = n;
  Block blk;
  blk.index = 0;
  blk.num_y = 1;
  blk.d = {1.0};
  BlockRow row;
  row.w_index = {0};
  row.w_value = {1.0};
  for (int i = 0; i < n; ++i) {
    row.t_index.push_back(i);
    row.t_value.push_back(-a[i]);
  }
  row.sense = RowSense::GE;
  row.rhs = b;
  blk.rows.push_back(std::move(row));
  p.blocks.push_back(std::move(blk));
  return p;
}

/// Brute-force mixing-envelope value: the best right-hand side over every
/// subsequence ending at the last (largest-a) element. a must be ascending.
inline double brute_force_mixing(const std::vector<double>& a, double b, const std::vector<double>& x) {
  const int d = static_cast<int>(a.size());
  double best = -kInf;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    if (!((mask >> (d - 1)) & 1)) continue;  // subsequence must end at d
    double value = b;
    int prev = -1;
    for (int i = 0; i < d; ++i) {
      if (!((mask >> i) & 1)) continue;
      value += (prev < 0 ? a[i] : a[i] - a[prev]) * x[i];
      prev = i;
    }
    best = std::max(best, value);
  }
  return best;
}

/// Brute-force vertex enumeration for  max mu^T xhat + eta  subject to
/// mu^T chi + eta <= rhs  over all given patterns. Assumes the LP is bounded
/// (xhat inside the hull of the patterns). Exponential; test sizes only.
inline double brute_force_cglp(const std::vector<std::uint32_t>& chis, const std::vector<double>& rhs,
                               const std::vector<double>& x_hat) {
  const int K = static_cast<int>(x_hat.size());
  const int dim = K + 1;
  const int R = static_cast<int>(chis.size());
  std::vector<int> pick(dim);
  double best = -kInf;

  auto row_coef = [&](int r, int col) -> double {
    if (col == K) return 1.0;
    return (chis[r] >> col) & 1 ? 1.0 : 0.0;
  };
  // iterate over all dim-subsets of the rows
  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  if (R < dim) return best;
  while (true) {
    // solve the square system (Gaussian elimination with partial pivoting)
    std::vector<double> a(dim * dim), b(dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) a[i * dim + j] = row_coef(idx[i], j);
      b[i] = rhs[idx[i]];
    }
    bool singular = false;
    for (int c = 0; c < dim && !singular; ++c) {
      int piv = c;
      for (int r = c + 1; r < dim; ++r)
        if (std::abs(a[r * dim + c]) > std::abs(a[piv * dim + c])) piv = r;
      if (std::abs(a[piv * dim + c]) < 1e-11) { singular = true; break; }
      if (piv != c) {
        for (int j = 0; j < dim; ++j) std::swap(a[piv * dim + j], a[c * dim + j]);
        std::swap(b[piv], b[c]);
      }
      for (int r = 0; r < dim; ++r) {
        if (r == c) continue;
        const double f = a[r * dim + c] / a[c * dim + c];
        if (f == 0.0) continue;
        for (int j = 0; j < dim; ++j) a[r * dim + j] -= f * a[c * dim + j];
        b[r] -= f * b[c];
      }
    }
    if (!singular) {
      std::vector<double> z(dim);
      for (int i = 0; i < dim; ++i) z[i] = b[i] / a[i * dim + i];
      bool feasible = true;
      for (int r = 0; r < R && feasible; ++r) {
        double lhs = z[K];
        for (int i = 0; i < K; ++i) lhs += row_coef(r, i) * z[i];
        if (lhs > rhs[r] + 1e-8) feasible = false;
      }
      if (feasible) {
        double obj = z[K];
        for (int i = 0; i < K; ++i) obj += x_hat[i] * z[i];
        best = std::max(best, obj);
      }
    }
    // next combination
    int t = dim - 1;
    while (t >= 0 && idx[t] == R - dim + t) --t;
    if (t < 0) break;
    ++idx[t];
    for (int j = t + 1; j < dim; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

}  // namespace epicut::testing
