#include "epicut/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace epicut {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFF;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::int64_t quantize(double v) {
  const double q = v / 1e-9;
  if (q > 9.2e18) return INT64_MAX;
  if (q < -9.2e18) return INT64_MIN;
  return std::llround(q);
}

}  // namespace

SparseRow Cut::master_row(int n) const {
  SparseRow row;
  if (block >= 0 && theta_coef != 0.0) row.push(n + block, theta_coef);
  for (size_t t = 0; t < x_index.size(); ++t)
    if (x_value[t] != 0.0) row.push(x_index[t], x_value[t]);
  row.sense = RowSense::GE;
  row.rhs = rhs;
  return row;
}

std::uint64_t Cut::fingerprint() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  h = fnv1a(h, static_cast<std::uint64_t>(block));
  h = fnv1a(h, static_cast<std::uint64_t>(quantize(theta_coef)));
  for (size_t t = 0; t < x_index.size(); ++t) {
    if (x_value[t] == 0.0) continue;
    h = fnv1a(h, static_cast<std::uint64_t>(x_index[t]));
    h = fnv1a(h, static_cast<std::uint64_t>(quantize(x_value[t])));
  }
  h = fnv1a(h, static_cast<std::uint64_t>(quantize(rhs)));
  return h;
}

std::vector<std::string> validate(const BlockDiagonalProblem& problem) {
  std::vector<std::string> out;
  const int n = problem.n();
  if (n < 1) out.push_back("first stage has no variables");
  if (static_cast<int>(problem.c.size()) != n) out.push_back("first-stage cost size != n");
  if (problem.first_stage.card_rhs < 0 || problem.first_stage.card_rhs > n)
    out.push_back("cardinality rhs outside [0, n]");
  if (problem.first_stage.card_sense == RowSense::EQ)
    out.push_back("cardinality sense must be <= or >=");
  for (size_t r = 0; r < problem.first_stage.extra_rows.size(); ++r) {
    const SparseRow& row = problem.first_stage.extra_rows[r];
    if (row.index.size() != row.value.size())
      out.push_back("extra row " + std::to_string(r) + " index/value mismatch");
    for (int idx : row.index)
      if (idx < 0 || idx >= n)
        out.push_back("extra row " + std::to_string(r) + " references x" + std::to_string(idx));
  }
  if (problem.blocks.empty()) out.push_back("no blocks");
  for (const Block& blk : problem.blocks) {
    const std::string tag = "block " + std::to_string(blk.index);
    if (blk.num_y < 1) out.push_back(tag + ": no recourse variables");
    if (static_cast<int>(blk.d.size()) != blk.num_y) out.push_back(tag + ": cost size != num_y");
    for (size_t r = 0; r < blk.rows.size(); ++r) {
      const BlockRow& row = blk.rows[r];
      if (row.t_index.size() != row.t_value.size() || row.w_index.size() != row.w_value.size()) {
        out.push_back(tag + " row " + std::to_string(r) + ": index/value mismatch");
        continue;
      }
      for (int idx : row.t_index)
        if (idx < 0 || idx >= n)
          out.push_back(tag + " row " + std::to_string(r) + ": T column " + std::to_string(idx) +
                        " outside first stage");
      for (int idx : row.w_index)
        if (idx < 0 || idx >= blk.num_y)
          out.push_back(tag + " row " + std::to_string(r) + ": W column " + std::to_string(idx) +
                        " outside block");
      if (!std::isfinite(row.rhs)) out.push_back(tag + " row " + std::to_string(r) + ": rhs not finite");
    }
  }
  return out;
}

std::vector<SparseRow> relaxation_rows(const FirstStageSet& fs) {
  std::vector<SparseRow> rows;
  SparseRow card;
  for (int j = 0; j < fs.n; ++j) card.push(j, 1.0);
  card.sense = fs.card_sense;
  card.rhs = fs.card_rhs;
  rows.push_back(std::move(card));
  for (const SparseRow& row : fs.extra_rows) rows.push_back(row);
  return rows;
}

ExtensiveForm build_extensive(const BlockDiagonalProblem& problem) {
  std::vector<std::string> diags = validate(problem);
  if (!diags.empty()) throw std::invalid_argument("build_extensive: " + diags.front());
  const int n = problem.n();
  ExtensiveForm ext;
  for (int j = 0; j < n; ++j) {
    ext.lp.add_var(0.0, 1.0, problem.c[j]);
    ext.binary_vars.push_back(j);
  }
  for (const SparseRow& row : relaxation_rows(problem.first_stage)) ext.lp.add_row(row);
  for (const Block& blk : problem.blocks) {
    const int off = ext.lp.num_vars();
    ext.y_offset.push_back(off);
    for (int j = 0; j < blk.num_y; ++j) ext.lp.add_var(0.0, kInf, blk.d[j]);
    for (const BlockRow& brow : blk.rows) {
      SparseRow row;
      for (size_t t = 0; t < brow.t_index.size(); ++t) row.push(brow.t_index[t], brow.t_value[t]);
      for (size_t t = 0; t < brow.w_index.size(); ++t) row.push(off + brow.w_index[t], brow.w_value[t]);
      row.sense = brow.sense;
      row.rhs = brow.rhs;
      ext.lp.add_row(std::move(row));
    }
  }
  return ext;
}

LinearProgram build_master(const BlockDiagonalProblem& problem, std::span<const double> theta_lb) {
  if (static_cast<int>(theta_lb.size()) != problem.num_blocks())
    throw std::invalid_argument("build_master: theta_lb size mismatch");
  for (double v : theta_lb)
    if (!std::isfinite(v)) throw std::invalid_argument("build_master: theta floor not finite");
  LinearProgram lp;
  const int n = problem.n();
  for (int j = 0; j < n; ++j) lp.add_var(0.0, 1.0, problem.c[j]);
  for (int k = 0; k < problem.num_blocks(); ++k) lp.add_var(theta_lb[k], kInf, 1.0);
  for (const SparseRow& row : relaxation_rows(problem.first_stage)) lp.add_row(row);
  return lp;
}

LinearProgram build_block_lp(const BlockDiagonalProblem& problem, int k, bool with_relaxation_rows) {
  const Block& blk = problem.blocks.at(k);
  LinearProgram lp;
  const int n = problem.n();
  for (int j = 0; j < n; ++j) lp.add_var(0.0, 1.0, 0.0);
  for (int j = 0; j < blk.num_y; ++j) lp.add_var(0.0, kInf, blk.d[j]);
  for (const BlockRow& brow : blk.rows) {
    SparseRow row;
    for (size_t t = 0; t < brow.t_index.size(); ++t) row.push(brow.t_index[t], brow.t_value[t]);
    for (size_t t = 0; t < brow.w_index.size(); ++t) row.push(n + brow.w_index[t], brow.w_value[t]);
    row.sense = brow.sense;
    row.rhs = brow.rhs;
    lp.add_row(std::move(row));
  }
  if (with_relaxation_rows)
    for (const SparseRow& row : relaxation_rows(problem.first_stage)) lp.add_row(row);
  return lp;
}

std::vector<double> theta_floors(const BlockDiagonalProblem& problem) {
  std::vector<double> floors;
  floors.reserve(problem.blocks.size());
  for (int k = 0; k < problem.num_blocks(); ++k) {
    const LPSolution sol = solve_lp(build_block_lp(problem, k, true));
    if (sol.status == SolveStatus::Optimal) {
      floors.push_back(sol.objective);
    } else if (sol.status == SolveStatus::Unbounded) {
      floors.push_back(-1e9);
    } else {
      throw std::runtime_error("theta_floors: block " + std::to_string(k) +
                               " relaxation is infeasible or hit the pivot cap");
    }
  }
  return floors;
}

}  // namespace epicut
