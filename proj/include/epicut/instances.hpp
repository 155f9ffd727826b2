#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "epicut/problem.hpp"

namespace epicut {

/// Stochastic network interdiction: blocks are maximum-reliability-path LPs
/// over a layered random DAG, one per origin/destination scenario. First
/// stage picks sensor arcs under a cardinality budget.
struct SnipParams {
  int nodes = 15;
  int arcs = 40;
  int interdictable = 15;
  int scenarios = 10;
  int budget = 4;
};
BlockDiagonalProblem gen_snip(const SnipParams& params, std::uint64_t seed);

/// Latent-class logit assortment, maximization mapped to min by negating the
/// recourse objective. Blocks touch at most `consideration` first-stage
/// variables each.
struct LlaParams {
  int n = 40;
  int segments = 20;
  int consideration = 8;     // p, must be even
  double profit_cap = 150.0;  // U
  double capacity_frac = 0.5; // c
};
BlockDiagonalProblem gen_lla(const LlaParams& params, std::uint64_t seed);

/// Stochastic capacitated facility location. Blocks are transportation LPs
/// per demand scenario; the first stage carries the capacity-cover row that
/// guarantees relatively complete recourse.
struct CapParams {
  int facilities = 10;
  int customers = 15;
  int scenarios = 10;
};
BlockDiagonalProblem gen_cap(const CapParams& params, std::uint64_t seed);

/// Single-block epigraph fixture for the fractional function
/// (a^T x + b) / (c^T x + d); the block LP is its convex extension, so the
/// block value at binary x equals the fraction.
struct FractionalFixture {
  BlockDiagonalProblem problem;
  std::vector<double> a, c;
  double b = 0.0, d = 1.0;

  double fraction_at(std::span<const double> x) const;
};
FractionalFixture fractional_epigraph(std::vector<double> a, double b, std::vector<double> c, double d);

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

void write_instance(const BlockDiagonalProblem& problem, std::ostream& out);
void write_instance(const BlockDiagonalProblem& problem, const std::string& path);
BlockDiagonalProblem read_instance(std::istream& in);
BlockDiagonalProblem read_instance(const std::string& path);

/// FNV-1a over the canonical serialization.
std::uint64_t fingerprint(const BlockDiagonalProblem& problem);

}  // namespace epicut
