#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epicut/benders.hpp"
#include "epicut/instances.hpp"
#include "epicut/pb.hpp"
#include "epicut/sparse_cuts.hpp"
#include "epicut/support.hpp"

namespace epicut {

enum class SelectionRule { Greedy, Cutpl };
enum class CutEngine { ISparse, PB };
enum class SolveMode { RootOnly, Ext, Bbc, Ibc };

/// K schedule: a fixed cardinality or the adaptive controller starting at 4.
struct KSpec {
  bool adaptive = false;
  int fixed = 4;
};

struct ExperimentConfig {
  SelectionRule rule = SelectionRule::Greedy;
  KSpec k;
  CutEngine engine = CutEngine::ISparse;
  SolveMode mode = SolveMode::RootOnly;
  double root_time_limit_s = 1800.0;
  double total_time_limit_s = 3600.0;
  int workers = 1;
  int max_rounds = 500;
  bool ibc_root_rule = false;  // stop when a fresh K's first two rounds close < 1%
  bool deterministic_clock = false;
  double kelley_tol = 1e-6;
  PBLimits pb_limits;
  std::optional<double> z_star;  // known optimum, for the gap column
};

struct GapInfo {
  double pct = 0.0;    // clamped to [0, 100] for reporting
  double raw = 0.0;    // unclamped value
  bool degenerate = false;  // z_star == z_lp
};
GapInfo gap_closed(double z_r, double z_lp, double z_star);

struct ProfileRow {
  double time_s = 0.0;
  double z_r = 0.0;
  double gap_closed_pct = 0.0;
  int benders_cuts = 0;
  int isparse_cuts = 0;
  int pb_cuts = 0;
  int K = 0;
};

/// Wall clock, or a deterministic clock derived from the process-wide pivot
/// count so profiles reproduce byte-identically across reruns.
class Stopwatch {
 public:
  explicit Stopwatch(bool deterministic);
  double seconds() const;

 private:
  bool det_;
  std::chrono::steady_clock::time_point wall0_;
  std::uint64_t pivots0_;
};

struct RootLoopResult {
  std::vector<ProfileRow> profile;
  std::unique_ptr<SimplexSolver> master;
  std::vector<double> theta_lb;
  std::unique_ptr<CutPool> benders_pool;
  std::shared_ptr<NuCache> cache;
  std::vector<Cut> added_cuts;  // everything appended after the Kelley phase
  double z_lp = 0.0;
  double z_final = 0.0;
  int rounds = 0;
  int benders_cuts = 0;
  int isparse_cuts = 0;
  int pb_cuts = 0;
  int final_k = 0;
  std::string stop_reason;
  std::vector<std::string> log;  // skipped blocks, unbounded certificates
};

/// Kelley initialization followed by rounds of support selection, table
/// evaluation (cache first), CGLP separation, and master re-solves.
RootLoopResult run_root_loop(const BlockDiagonalProblem& problem, const ExperimentConfig& config);

struct BranchAndCutResult {
  std::string status;  // optimal | timelimit | infeasible
  double incumbent = kInf;
  double bound = -kInf;
  double root_bound = -kInf;
  std::int64_t nodes = 0;
  double gap_pct = 0.0;
  double time_s = 0.0;
  int root_isparse_cuts = 0;
};

/// Best-bound branch and cut. EXT works on the extensive LP; BBC on the
/// Benders master with lazy cuts at integer nodes; IBC adds the I-sparse
/// root phase first (cut-and-branch).
BranchAndCutResult branch_and_cut(const BlockDiagonalProblem& problem, const ExperimentConfig& config);

void write_profile_csv(std::span<const ProfileRow> rows, std::ostream& out);
std::string summary_line(const std::string& mode, const BranchAndCutResult& result);

/// gen / root / solve / profile; returns 0, 2 on configuration errors,
/// 3 on solve failures.
int run_cli(int argc, const char* const* argv);

}  // namespace epicut
