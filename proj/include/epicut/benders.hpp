#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "epicut/problem.hpp"

namespace epicut {

/// A block subproblem came back infeasible at a point of R(X): the instance
/// lacks relatively complete recourse, which the engine requires.
struct RecourseViolation : std::runtime_error {
  int block;
  explicit RecourseViolation(int k)
      : std::runtime_error("block " + std::to_string(k) + " subproblem infeasible on R(X)"), block(k) {}
};

/// Per-block cut lists with fingerprint dedup (coefficients rounded to 1e-9
/// before hashing).
class CutPool {
 public:
  explicit CutPool(int num_blocks) : cuts_(num_blocks), seen_(num_blocks) {}

  bool add(Cut cut) {
    const int k = cut.block;
    const std::uint64_t fp = cut.fingerprint();
    if (!seen_.at(k).insert(fp).second) return false;
    cuts_[k].push_back(std::move(cut));
    return true;
  }
  std::span<const Cut> for_block(int k) const { return cuts_.at(k); }
  int num_blocks() const { return static_cast<int>(cuts_.size()); }
  int total() const {
    int t = 0;
    for (const auto& v : cuts_) t += static_cast<int>(v.size());
    return t;
  }

 private:
  std::vector<std::vector<Cut>> cuts_;
  std::vector<std::unordered_set<std::uint64_t>> seen_;
};

struct SubproblemResult {
  double value = 0.0;
  std::vector<double> dual;  // one multiplier per block row
};

/// Benders machinery for one problem: warm-started subproblem solvers, cut
/// extraction, and the Kelley root loop. Subproblem solves for distinct
/// blocks may run concurrently; each block owns its solver.
class BendersEngine {
 public:
  explicit BendersEngine(const BlockDiagonalProblem& problem);

  /// Q_k(x_hat) with an optimal dual vector. Throws RecourseViolation when
  /// the subproblem is infeasible.
  SubproblemResult solve_subproblem(int k, std::span<const double> x_hat);

  /// Benders cut  theta_k + (T^T dual)^T x >= dual^T h  from any dual
  /// feasible vector for block k.
  Cut make_benders_cut(int k, std::span<const double> dual) const;

  const BlockDiagonalProblem& problem() const { return problem_; }

 private:
  const BlockDiagonalProblem& problem_;
  std::vector<std::unique_ptr<SimplexSolver>> sub_;
};

struct KelleyLimits {
  int max_iterations = 1000;
  double time_limit_s = kInf;
  int workers = 1;
};

struct RootRelaxation {
  std::unique_ptr<SimplexSolver> master;  // over (x, theta_1..theta_N)
  std::vector<double> theta_lb;
  CutPool pool;
  double z_lp = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Standard cutting-plane loop: solve the master, add one most-violated
/// Benders cut per violated block, stop when max_k Q_k(x) - theta_k <= tol.
RootRelaxation kelley_root_loop(const BlockDiagonalProblem& problem, BendersEngine& engine,
                                double tol = 1e-6, const KelleyLimits& limits = {});

}  // namespace epicut
