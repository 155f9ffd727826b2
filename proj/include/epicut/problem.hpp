#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "epicut/lp.hpp"

namespace epicut {

/// First-stage set X: binary box, one cardinality row, optional extra linear
/// rows carried verbatim into the relaxation R(X).
struct FirstStageSet {
  int n = 0;
  RowSense card_sense = RowSense::LE;
  int card_rhs = 0;
  std::vector<SparseRow> extra_rows;
};

/// One row of a block:  (t over x) + (w over y)  sense  rhs.
struct BlockRow {
  std::vector<int> t_index;
  std::vector<double> t_value;
  std::vector<int> w_index;
  std::vector<double> w_value;
  RowSense sense = RowSense::EQ;
  double rhs = 0.0;
};

struct Block {
  int index = 0;
  int num_y = 0;
  std::vector<double> d;  // recourse costs, size num_y
  std::vector<BlockRow> rows;
};

struct BlockDiagonalProblem {
  std::vector<double> c;  // first-stage costs, size n
  FirstStageSet first_stage;
  std::vector<Block> blocks;

  int n() const { return first_stage.n; }
  int num_blocks() const { return static_cast<int>(blocks.size()); }
};

/// Empty when every type invariant holds; otherwise one line per defect.
std::vector<std::string> validate(const BlockDiagonalProblem& problem);

enum class CutOrigin : char { Benders = 'B', ISparse = 'I', PB = 'P', Tilt = 'T' };

/// Inequality  theta_coef * theta_k + sum_i x_value[i] * x_{x_index[i]} >= rhs
/// over the epigraph of block `block` (or the master when block < 0).
struct Cut {
  int block = -1;
  double theta_coef = 1.0;
  std::vector<int> x_index;
  std::vector<double> x_value;
  double rhs = 0.0;
  CutOrigin origin = CutOrigin::Benders;
  std::vector<int> support;  // declared support for ISparse cuts

  double value_at(std::span<const double> x, double theta) const {
    double v = theta_coef * theta;
    for (size_t t = 0; t < x_index.size(); ++t) v += x_value[t] * x[x_index[t]];
    return v;
  }
  /// Row over master variables (x_0..x_{n-1}, theta_k at n + block).
  SparseRow master_row(int n) const;
  /// Fingerprint of the coefficients rounded to 1e-9.
  std::uint64_t fingerprint() const;
};

/// R(X) rows over the x variables: the cardinality row, then extra rows.
std::vector<SparseRow> relaxation_rows(const FirstStageSet& fs);

struct ExtensiveForm {
  LinearProgram lp;
  std::vector<int> binary_vars;  // the x columns
  std::vector<int> y_offset;     // first y column per block
};

/// Extensive LP: columns x then each block's y; rows R(X) then block rows.
/// Throws std::invalid_argument naming the offending block on bad dimensions.
ExtensiveForm build_extensive(const BlockDiagonalProblem& problem);

/// Master LP over (x, theta_1..theta_N): R(X) rows plus theta floors.
/// Theta column for block k is n + k.
LinearProgram build_master(const BlockDiagonalProblem& problem, std::span<const double> theta_lb);

/// Joint LP for one block over (x, y): block rows first (their duals are the
/// Benders duals), then optionally the R(X) rows. x columns are 0..n-1.
LinearProgram build_block_lp(const BlockDiagonalProblem& problem, int k, bool with_relaxation_rows);

/// Per-block floors min { Q_k(x) : x in R(X) }, with a -1e9 fallback when
/// that LP is unbounded.
std::vector<double> theta_floors(const BlockDiagonalProblem& problem);

}  // namespace epicut
