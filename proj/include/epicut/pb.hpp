#pragma once

#include <memory>
#include <span>
#include <vector>

#include "epicut/problem.hpp"
#include "epicut/sparse_cuts.hpp"

namespace epicut {

struct PBLimits {
  int max_master_solves = 10000;
  double wall_seconds = 60.0;
};

struct TermResult {
  double value = kInf;  // eta(pi0, pi; chi); +inf when the slice is empty
  double theta = 0.0;   // argmin epigraph point
  std::vector<double> x;
};

struct PBResult {
  enum class Kind { Cut, NoViolation };
  Kind kind = Kind::NoViolation;
  Cut cut;                 // when kind == Cut
  double objective = 0.0;  // pi0 theta_hat + pi^T x_hat - eta of the iterate
  int master_solves = 0;
  int points_generated = 0;
  bool hit_limit = false;
};

/// Row-generating separator for the dense multi-term disjunctive CGLP with
/// the l1 normalization, one instance per block. The point sets grow one
/// extreme point at a time until every term satisfies the iterate, so
/// termination is finite. On hitting a limit the last iterate is repaired by
/// a full term sweep (eta lowered to the true minimum) before it is returned.
class PBSeparator {
 public:
  PBSeparator(const BlockDiagonalProblem& problem, int k);

  /// min { pi0 d^T y + pi^T x } over the chi-slice of the block epigraph.
  TermResult term_subproblem(const SupportSet& support, std::uint32_t chi, double pi0,
                             std::span<const double> pi);

  PBResult separate(std::span<const double> x_hat, double theta_hat, const SupportSet& support,
                    const PBLimits& limits = {});

 private:
  void set_weights(double pi0, std::span<const double> pi);
  TermResult solve_slice(const SupportSet& support, std::uint32_t chi);

  const BlockDiagonalProblem& problem_;
  int block_;
  std::unique_ptr<SimplexSolver> term_lp_;  // (x, y) over block + R(X) rows
};

}  // namespace epicut
