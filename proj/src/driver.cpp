#include "epicut/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "epicut/parallel.hpp"

namespace epicut {

GapInfo gap_closed(double z_r, double z_lp, double z_star) {
  GapInfo info;
  if (z_star == z_lp) {
    info.degenerate = true;
    info.pct = 100.0;
    info.raw = 100.0;
    return info;
  }
  info.raw = (z_r - z_lp) / (z_star - z_lp) * 100.0;
  info.pct = std::min(100.0, std::max(0.0, info.raw));
  return info;
}

Stopwatch::Stopwatch(bool deterministic)
    : det_(deterministic),
      wall0_(std::chrono::steady_clock::now()),
      pivots0_(SimplexSolver::total_pivots()) {}

double Stopwatch::seconds() const {
  if (det_) return static_cast<double>(SimplexSolver::total_pivots() - pivots0_) * 1e-6;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0_).count();
}

void write_profile_csv(std::span<const ProfileRow> rows, std::ostream& out) {
  out << "time_s,z_R,gap_closed_pct,benders_cuts,isparse_cuts,pb_cuts,K\n";
  char buf[160];
  for (const ProfileRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.9g,%.4f,%d,%d,%d,%d\n", row.time_s, row.z_r,
                  row.gap_closed_pct, row.benders_cuts, row.isparse_cuts, row.pb_cuts, row.K);
    out << buf;
  }
}

std::string summary_line(const std::string& mode, const BranchAndCutResult& result) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%s,%.9g,%.9g,%.4f,%lld,%.3f", mode.c_str(),
                result.status.c_str(), result.incumbent, result.bound, result.gap_pct,
                static_cast<long long>(result.nodes), result.time_s);
  return buf;
}

namespace {

std::vector<int> candidate_indices(const CutPool& pool, int k, int n) {
  std::vector<char> seen(n, 0);
  for (const Cut& cut : pool.for_block(k)) {
    if (cut.origin != CutOrigin::Benders) continue;
    for (size_t t = 0; t < cut.x_index.size(); ++t)
      if (cut.x_value[t] != 0.0) seen[cut.x_index[t]] = 1;
  }
  std::vector<int> out;
  for (int j = 0; j < n; ++j)
    if (seen[j]) out.push_back(j);
  return out;
}

double cut_violation(const Cut& cut, std::span<const double> x, double theta) {
  return cut.rhs - cut.value_at(x, theta);
}

}  // namespace

RootLoopResult run_root_loop(const BlockDiagonalProblem& problem, const ExperimentConfig& config) {
  Stopwatch clock(config.deterministic_clock);
  const int n = problem.n(), nb = problem.num_blocks();
  const int workers = effective_workers(config.workers);

  BendersEngine engine(problem);
  KelleyLimits klim;
  klim.time_limit_s = config.root_time_limit_s;
  klim.workers = config.workers;
  RootRelaxation kelley = kelley_root_loop(problem, engine, config.kelley_tol, klim);

  RootLoopResult out;
  out.master = std::move(kelley.master);
  out.theta_lb = std::move(kelley.theta_lb);
  out.benders_pool = std::make_unique<CutPool>(std::move(kelley.pool));
  out.cache = std::make_shared<NuCache>();
  out.z_lp = kelley.z_lp;
  out.benders_cuts = out.benders_pool->total();
  if (!kelley.converged) out.log.push_back("kelley stopped before convergence");

  auto gap_pct = [&](double z) {
    return config.z_star ? gap_closed(z, out.z_lp, *config.z_star).pct : 0.0;
  };
  auto emit_row = [&](double z, int K) {
    out.profile.push_back({clock.seconds(), z, gap_pct(z), out.benders_cuts, out.isparse_cuts,
                           out.pb_cuts, K});
  };
  emit_row(out.z_lp, 0);

  std::vector<std::vector<int>> candidates(nb);
  for (int k = 0; k < nb; ++k) candidates[k] = candidate_indices(*out.benders_pool, k, n);

  NuEvaluator eval(problem);
  std::vector<std::unique_ptr<PBSeparator>> pb(nb);
  AdaptiveK controller;
  int K = config.k.adaptive ? controller.k() : config.k.fixed;

  std::unordered_set<std::uint64_t> added_fp;
  std::vector<char> warned_no_candidates(nb, 0);
  double z_prev = out.z_lp;
  double z_at_k_start = out.z_lp;
  int rounds_at_k = 0;
  bool ibc_checked_this_k = false;

  for (int round = 1; round <= config.max_rounds; ++round) {
    if (clock.seconds() > config.root_time_limit_s) {
      out.stop_reason = "time-limit";
      break;
    }
    const LPSolution& sol = out.master->last();
    const std::vector<double> x_hat(sol.x.begin(), sol.x.begin() + n);
    std::vector<double> theta_hat(nb);
    for (int k = 0; k < nb; ++k) theta_hat[k] = sol.x[n + k];

    std::vector<std::optional<Cut>> chosen(nb);
    if (config.engine == CutEngine::ISparse) {
      // cached supports first; keep the most violated cut per block
      std::vector<double> best(nb, 0.0);
      for (Cut& cut : recheck_cached_supports(x_hat, theta_hat, *out.cache)) {
        const double v = cut_violation(cut, x_hat, theta_hat[cut.block]);
        if (!chosen[cut.block] || v > best[cut.block] + 1e-12) {
          best[cut.block] = v;
          chosen[cut.block] = std::move(cut);
        }
      }
    }
    std::vector<std::string> round_log(nb);
    parallel_for(nb, workers, [&](int k) {
      if (chosen[k]) return;
      if (candidates[k].empty()) {
        if (!warned_no_candidates[k]) round_log[k] = "block " + std::to_string(k) + ": no candidates";
        return;
      }
      SupportSet support;
      if (config.rule == SelectionRule::Greedy) {
        const SingletonProfile profile = singleton_profile(eval, k, candidates[k], *out.cache);
        const Surrogate surrogate = build_surrogate(profile);
        support = greedy_support(x_hat, K, surrogate, candidates[k]);
      } else {
        support = cutpl_support(x_hat, theta_hat[k], K, out.benders_pool->for_block(k));
        if (support.size() == 0) {
          round_log[k] = "block " + std::to_string(k) + ": cutpl found no scored index";
          return;
        }
      }
      if (config.engine == CutEngine::ISparse) {
        const auto table = eval.eval(k, support, *out.cache);
        const SparseCutResult res = solve_cglp(x_hat, theta_hat[k], *table);
        if (res.kind == SparseCutResult::Kind::Cut) chosen[k] = res.cut;
        else if (res.kind == SparseCutResult::Kind::UnboundedSeparation)
          round_log[k] = "block " + std::to_string(k) + ": unbounded separation, block skipped";
      } else {
        if (!pb[k]) pb[k] = std::make_unique<PBSeparator>(problem, k);
        const PBResult res = pb[k]->separate(x_hat, theta_hat[k], support, config.pb_limits);
        if (res.kind == PBResult::Kind::Cut) chosen[k] = res.cut;
      }
    });
    for (int k = 0; k < nb; ++k) {
      if (round_log[k].empty()) continue;
      if (round_log[k].find("no candidates") != std::string::npos) warned_no_candidates[k] = 1;
      out.log.push_back(round_log[k]);
    }

    std::vector<SparseRow> rows;
    for (int k = 0; k < nb; ++k) {
      if (!chosen[k]) continue;
      Cut& cut = *chosen[k];
      if (!added_fp.insert(cut.fingerprint()).second) continue;
      rows.push_back(cut.master_row(n));
      if (cut.origin == CutOrigin::ISparse) ++out.isparse_cuts;
      else if (cut.origin == CutOrigin::PB) ++out.pb_cuts;
      out.added_cuts.push_back(std::move(cut));
    }
    out.rounds = round;
    if (rows.empty()) {
      if (config.k.adaptive && controller.k() < 10) {
        // no violated cut at this K: nothing changes until the window rule
        // fires, so feed it the (at most five) zero-gain rounds directly
        bool bumped = false;
        for (int i = 0; i < 5 && !bumped; ++i) bumped = controller.observe(0.0, z_prev - out.z_lp);
        if (bumped) {
          K = controller.k();
          z_at_k_start = z_prev;
          rounds_at_k = 0;
          ibc_checked_this_k = false;
          continue;
        }
      }
      out.stop_reason = "no-violation";
      break;
    }
    const LPSolution& re = out.master->add_rows_and_resolve(rows);
    if (re.status != SolveStatus::Optimal)
      throw std::runtime_error("root loop: master re-solve failed");
    const double z_now = re.objective;
    ++rounds_at_k;
    emit_row(z_now, K);

    if (config.ibc_root_rule && !ibc_checked_this_k && rounds_at_k == 2) {
      ibc_checked_this_k = true;
      const double delta_k = z_now - z_at_k_start;
      const double total = z_now - out.z_lp;
      if (delta_k < 0.01 * total) {
        out.stop_reason = "ibc-root-rule";
        z_prev = z_now;
        break;
      }
    }
    if (config.k.adaptive && controller.observe(z_now - z_prev, z_now - out.z_lp)) {
      K = controller.k();
      z_at_k_start = z_now;
      rounds_at_k = 0;
      ibc_checked_this_k = false;
    }
    z_prev = z_now;
    if (round == config.max_rounds) out.stop_reason = "round-cap";
  }
  if (out.stop_reason.empty()) out.stop_reason = "round-cap";
  out.z_final = out.master->last().objective;
  out.final_k = K;
  return out;
}

namespace {

struct BnbNode {
  double bound;
  std::int64_t id;
  std::vector<std::pair<int, int>> fixes;  // (variable, value)
};
struct NodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id < b.id;
  }
};

}  // namespace

BranchAndCutResult branch_and_cut(const BlockDiagonalProblem& problem, const ExperimentConfig& config) {
  Stopwatch clock(config.deterministic_clock);
  const int n = problem.n();
  const int nb = problem.num_blocks();
  const double int_tol = 1e-6;
  const int workers = effective_workers(config.workers);

  BranchAndCutResult res;
  std::unique_ptr<SimplexSolver> lp;
  std::unique_ptr<BendersEngine> engine;
  std::unique_ptr<CutPool> pool;
  const bool benders_mode = config.mode == SolveMode::Bbc || config.mode == SolveMode::Ibc;

  if (config.mode == SolveMode::Ext) {
    lp = std::make_unique<SimplexSolver>(build_extensive(problem).lp);
    lp->solve();
  } else if (config.mode == SolveMode::Bbc) {
    engine = std::make_unique<BendersEngine>(problem);
    KelleyLimits klim;
    klim.time_limit_s = config.root_time_limit_s;
    klim.workers = config.workers;
    RootRelaxation kelley = kelley_root_loop(problem, *engine, config.kelley_tol, klim);
    lp = std::move(kelley.master);
    pool = std::make_unique<CutPool>(std::move(kelley.pool));
  } else {
    ExperimentConfig root_cfg = config;
    root_cfg.mode = SolveMode::RootOnly;
    root_cfg.ibc_root_rule = true;
    RootLoopResult root = run_root_loop(problem, root_cfg);
    lp = std::move(root.master);
    pool = std::move(root.benders_pool);
    engine = std::make_unique<BendersEngine>(problem);
    res.root_isparse_cuts = root.isparse_cuts;
  }
  if (benders_mode && !engine) engine = std::make_unique<BendersEngine>(problem);

  const LPSolution* sol = &lp->last();
  if (sol->status == SolveStatus::PrimalInfeasible) {
    res.status = "infeasible";
    res.time_s = clock.seconds();
    return res;
  }
  if (sol->status != SolveStatus::Optimal) throw std::runtime_error("branch_and_cut: root LP failed");
  res.root_bound = sol->objective;

  std::set<BnbNode, NodeOrder> open;
  std::int64_t next_id = 0;
  open.insert({res.root_bound, next_id++, {}});
  std::vector<int> applied(n, -1);  // -1 free, 0, 1
  double incumbent = kInf;
  double best_bound = res.root_bound;
  std::vector<SubproblemResult> sub(nb);
  const auto prune_tol = [&](double v) { return v - 1e-6 * std::max(1.0, std::abs(v)); };
  std::string status = "optimal";

  while (!open.empty()) {
    if (clock.seconds() > config.total_time_limit_s) {
      status = "timelimit";
      break;
    }
    BnbNode node = *open.begin();
    open.erase(open.begin());
    best_bound = std::max(best_bound, node.bound);
    if (incumbent < kInf && node.bound >= prune_tol(incumbent)) {
      open.clear();  // best-bound order: everything else is at least as bad
      break;
    }
    ++res.nodes;

    // switch the LP to this node's fixings
    std::vector<int> target(n, -1);
    for (const auto& [var, val] : node.fixes) target[var] = val;
    std::vector<BoundChange> changes;
    for (int j = 0; j < n; ++j) {
      if (applied[j] == target[j]) continue;
      if (target[j] < 0) changes.push_back({j, 0.0, 1.0});
      else changes.push_back({j, static_cast<double>(target[j]), static_cast<double>(target[j])});
      applied[j] = target[j];
    }
    if (!changes.empty()) lp->update_bounds_and_resolve(changes);

    for (int pass = 0;; ++pass) {
      sol = &lp->last();
      if (sol->status == SolveStatus::PrimalInfeasible) break;  // prune
      if (sol->status != SolveStatus::Optimal) throw std::runtime_error("node LP failed");
      const double node_obj = sol->objective;
      if (incumbent < kInf && node_obj >= prune_tol(incumbent)) break;

      int branch_var = -1;
      double most_frac = int_tol;
      for (int j = 0; j < n; ++j) {
        const double f = std::min(sol->x[j], 1.0 - sol->x[j]);
        if (f > most_frac) {
          most_frac = f;
          branch_var = j;
        }
      }
      if (branch_var >= 0) {
        for (int val = 0; val < 2; ++val) {
          BnbNode child;
          child.bound = node_obj;
          child.id = next_id++;
          child.fixes = node.fixes;
          child.fixes.emplace_back(branch_var, val);
          open.insert(std::move(child));
        }
        break;
      }
      // integral candidate
      if (!benders_mode) {
        incumbent = std::min(incumbent, node_obj);
        break;
      }
      const std::vector<double> x_hat(sol->x.begin(), sol->x.begin() + n);
      parallel_for(nb, workers, [&](int k) { sub[k] = engine->solve_subproblem(k, x_hat); });
      std::vector<SparseRow> rows;
      for (int k = 0; k < nb; ++k) {
        if (sub[k].value - sol->x[n + k] > 1e-6) {
          Cut cut = engine->make_benders_cut(k, sub[k].dual);
          if (pool->add(cut)) rows.push_back(cut.master_row(n));
        }
      }
      if (rows.empty()) {
        double value = 0.0;
        for (int j = 0; j < n; ++j) value += problem.c[j] * x_hat[j];
        for (int k = 0; k < nb; ++k) value += sub[k].value;
        incumbent = std::min(incumbent, value);
        break;
      }
      if (pass > 500) throw std::runtime_error("lazy cut loop did not settle");
      lp->add_rows_and_resolve(rows);
    }
    if (!open.empty()) {
      best_bound = std::max(best_bound, open.begin()->bound);
      if (incumbent < kInf &&
          (incumbent - best_bound) / std::max(1.0, std::abs(incumbent)) <= 1e-6)
        break;
    }
  }
  if (status == "optimal" && incumbent == kInf) status = "infeasible";
  if (status == "optimal" && open.empty() && incumbent < kInf) best_bound = incumbent;

  res.status = status;
  res.incumbent = incumbent;
  res.bound = std::min(best_bound, incumbent);
  res.gap_pct = incumbent == kInf
                    ? 100.0
                    : (incumbent - res.bound) / std::max(1.0, std::abs(incumbent)) * 100.0;
  res.time_s = clock.seconds();
  return res;
}

}  // namespace epicut
