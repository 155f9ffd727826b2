#include <CLI11.hpp>
#include <fstream>
#include <mutex>
#include <iostream>
#include <map>
#include <sstream>

#include "epicut/driver.hpp"

namespace epicut {

namespace {

KSpec parse_kspec(const std::string& text) {
  if (text == "adaptive") return KSpec{true, 4};
  const int k = std::stoi(text);
  if (k < 1 || k > 20) throw CLI::ValidationError("--k", "K must be in [1, 20] or 'adaptive'");
  return KSpec{false, k};
}

SelectionRule parse_rule(const std::string& text) {
  if (text == "greedy") return SelectionRule::Greedy;
  if (text == "cutpl") return SelectionRule::Cutpl;
  throw CLI::ValidationError("--rule", "expected greedy or cutpl");
}

SolveMode parse_mode(const std::string& text) {
  if (text == "ext") return SolveMode::Ext;
  if (text == "bbc") return SolveMode::Bbc;
  if (text == "ibc") return SolveMode::Ibc;
  throw CLI::ValidationError("--mode", "expected ext, bbc or ibc");
}

// z* from an extensive-form solve, cached per instance fingerprint so a
// profile run pays for it once
double z_star_for(const BlockDiagonalProblem& problem, double time_limit, bool det_clock) {
  static std::map<std::uint64_t, double> cache;
  static std::mutex mu;
  const std::uint64_t fp = fingerprint(problem);
  {
    std::lock_guard<std::mutex> lock(mu);
    const auto it = cache.find(fp);
    if (it != cache.end()) return it->second;
  }
  ExperimentConfig cfg;
  cfg.mode = SolveMode::Ext;
  cfg.total_time_limit_s = time_limit;
  cfg.deterministic_clock = det_clock;
  const BranchAndCutResult res = branch_and_cut(problem, cfg);
  if (res.status != "optimal")
    std::cerr << "warning: z* solve ended with status " << res.status
              << "; gap profile uses the incumbent\n";
  std::lock_guard<std::mutex> lock(mu);
  cache[fp] = res.incumbent;
  return res.incumbent;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"sparse multi-term disjunctive cut experiments on block-diagonal binary MILPs"};
  app.require_subcommand(1);

  // ------------------------------------------------------------------ gen
  auto* gen = app.add_subcommand("gen", "generate a seeded instance file");
  std::string gen_family, gen_out;
  std::uint64_t gen_seed = 1;
  SnipParams snip;
  LlaParams lla;
  CapParams cap;
  gen->add_option("--family", gen_family, "snip | lla | cap")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output path (.bdz)")->required();
  gen->add_option("--nodes", snip.nodes, "snip: node count");
  gen->add_option("--arcs", snip.arcs, "snip: arc count");
  gen->add_option("--interdictable", snip.interdictable, "snip: interdictable arcs");
  gen->add_option("--budget", snip.budget, "snip: sensor budget");
  gen->add_option("--scenarios", snip.scenarios, "snip/cap: scenario count");
  gen->add_option("--n", lla.n, "lla: product count");
  gen->add_option("--segments", lla.segments, "lla: customer segments");
  gen->add_option("--consideration", lla.consideration, "lla: consideration size (even)");
  gen->add_option("--profit-cap", lla.profit_cap, "lla: upper profit bound");
  gen->add_option("--capacity-frac", lla.capacity_frac, "lla: display capacity fraction");
  gen->add_option("--facilities", cap.facilities, "cap: facility count");
  gen->add_option("--customers", cap.customers, "cap: customer count");

  // ----------------------------------------------------------------- root
  auto* root = app.add_subcommand("root", "run the root cut loop and write a gap profile");
  std::string root_in, root_rule = "greedy", root_k = "4", root_engine = "isparse", root_out;
  std::string root_dump_nu;
  double root_time = 1800.0, root_total = 3600.0;
  int root_workers = 1;
  bool root_det = false, root_no_zstar = false;
  root->add_option("instance", root_in, "instance file")->required();
  root->add_option("--rule", root_rule, "greedy | cutpl");
  root->add_option("--k", root_k, "4 | 7 | 10 | adaptive");
  root->add_option("--engine", root_engine, "isparse | pb");
  root->add_option("--time-limit", root_time, "root loop limit in seconds");
  root->add_option("--zstar-time-limit", root_total, "limit for the z* pre-solve");
  root->add_option("--out", root_out, "profile CSV path (stdout when omitted)");
  root->add_option("--workers", root_workers, "per-block worker threads");
  root->add_flag("--det-clock", root_det, "deterministic pivot-based clock");
  root->add_flag("--no-zstar", root_no_zstar, "skip the z* pre-solve; gap column reads 0");
  root->add_option("--dump-nu", root_dump_nu, "write the nu-table cache as CSV");

  // ---------------------------------------------------------------- solve
  auto* solve = app.add_subcommand("solve", "solve to optimality (ext, bbc or ibc)");
  std::string solve_in, solve_mode, solve_rule = "greedy", solve_k = "adaptive", solve_out;
  double solve_time = 3600.0, solve_root_time = 1800.0;
  int solve_workers = 1;
  bool solve_det = false;
  solve->add_option("instance", solve_in, "instance file")->required();
  solve->add_option("--mode", solve_mode, "ext | bbc | ibc")->required();
  solve->add_option("--rule", solve_rule, "ibc support rule");
  solve->add_option("--k", solve_k, "ibc K spec");
  solve->add_option("--time-limit", solve_time, "total limit in seconds");
  solve->add_option("--root-time-limit", solve_root_time, "root phase limit in seconds");
  solve->add_option("--out", solve_out, "summary path (stdout when omitted)");
  solve->add_option("--workers", solve_workers, "per-block worker threads");
  solve->add_flag("--det-clock", solve_det, "deterministic pivot-based clock");

  // -------------------------------------------------------------- profile
  auto* profile = app.add_subcommand("profile", "gap profiles across rules and K values");
  std::string prof_in, prof_rules = "greedy,cutpl", prof_ks = "4,7,10,adaptive", prof_out;
  double prof_time = 1800.0;
  int prof_workers = 1;
  bool prof_det = false;
  profile->add_option("instance", prof_in, "instance file")->required();
  profile->add_option("--rules", prof_rules, "comma list of rules");
  profile->add_option("--ks", prof_ks, "comma list of K specs");
  profile->add_option("--time-limit", prof_time, "root loop limit per variant");
  profile->add_option("--out", prof_out, "combined CSV path (stdout when omitted)");
  profile->add_option("--workers", prof_workers, "per-block worker threads");
  profile->add_flag("--det-clock", prof_det, "deterministic pivot-based clock");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      BlockDiagonalProblem problem;
      if (gen_family == "snip") problem = gen_snip(snip, gen_seed);
      else if (gen_family == "lla") problem = gen_lla(lla, gen_seed);
      else if (gen_family == "cap") {
        cap.scenarios = snip.scenarios;  // shared flag
        problem = gen_cap(cap, gen_seed);
      } else {
        std::cerr << "unknown family '" << gen_family << "'\n";
        return 2;
      }
      write_instance(problem, gen_out);
      return 0;
    }
    if (root->parsed()) {
      const BlockDiagonalProblem problem = read_instance(root_in);
      ExperimentConfig cfg;
      cfg.rule = parse_rule(root_rule);
      cfg.k = parse_kspec(root_k);
      cfg.engine = root_engine == "pb" ? CutEngine::PB : CutEngine::ISparse;
      cfg.root_time_limit_s = root_time;
      cfg.workers = root_workers;
      cfg.deterministic_clock = root_det;
      if (!root_no_zstar) cfg.z_star = z_star_for(problem, root_total, root_det);
      const RootLoopResult res = run_root_loop(problem, cfg);
      std::ostringstream csv;
      write_profile_csv(res.profile, csv);
      write_text(root_out, csv.str());
      if (!root_dump_nu.empty()) {
        std::ofstream dump(root_dump_nu);
        if (!dump) throw std::runtime_error("cannot open " + root_dump_nu);
        dump_nu_tables(*res.cache, dump);
      }
      for (const std::string& line : res.log) std::cerr << line << '\n';
      return 0;
    }
    if (solve->parsed()) {
      const BlockDiagonalProblem problem = read_instance(solve_in);
      ExperimentConfig cfg;
      cfg.mode = parse_mode(solve_mode);
      cfg.rule = parse_rule(solve_rule);
      cfg.k = parse_kspec(solve_k);
      cfg.total_time_limit_s = solve_time;
      cfg.root_time_limit_s = solve_root_time;
      cfg.workers = solve_workers;
      cfg.deterministic_clock = solve_det;
      const BranchAndCutResult res = branch_and_cut(problem, cfg);
      write_text(solve_out, summary_line(solve_mode, res) + "\n");
      return res.status == "optimal" || res.status == "timelimit" ? 0 : 3;
    }
    if (profile->parsed()) {
      const BlockDiagonalProblem problem = read_instance(prof_in);
      const double z_star = z_star_for(problem, 3600.0, prof_det);
      std::ostringstream csv;
      csv << "variant,time_s,z_R,gap_closed_pct,benders_cuts,isparse_cuts,pb_cuts,K\n";
      for (const std::string& rule : split_list(prof_rules)) {
        for (const std::string& k : split_list(prof_ks)) {
          ExperimentConfig cfg;
          cfg.rule = parse_rule(rule);
          cfg.k = parse_kspec(k);
          cfg.root_time_limit_s = prof_time;
          cfg.workers = prof_workers;
          cfg.deterministic_clock = prof_det;
          cfg.z_star = z_star;
          const RootLoopResult res = run_root_loop(problem, cfg);
          std::ostringstream rows;
          write_profile_csv(res.profile, rows);
          std::istringstream in(rows.str());
          std::string line;
          std::getline(in, line);  // drop the inner header
          while (std::getline(in, line)) csv << rule << '-' << k << ',' << line << '\n';
        }
      }
      write_text(prof_out, csv.str());
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace epicut
