#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "epicut/problem.hpp"
#include "epicut/sparse_cuts.hpp"

namespace epicut {

/// Mixed-binary set D in {0,1}^n x R^p described through a polyhedral
/// relaxation over (x, y, z): z are auxiliary continuous columns used by the
/// description, and D = { (x, y) : exists z with all rows holding, x binary }.
/// Column order everywhere: x at 0..n-1, y at n..n+p-1, z after that.
struct MixedBinarySet {
  int n = 0;
  int p = 0;
  int aux = 0;
  std::vector<double> y_lower, y_upper;
  std::vector<double> z_lower, z_upper;
  std::vector<SparseRow> rows;

  int columns() const { return n + p + aux; }
};

/// Base inequality alpha^T x + beta^T y <= gamma, valid for D.
struct BaseInequality {
  std::vector<double> alpha;
  std::vector<double> beta;
  double gamma = 0.0;

  double violation_at(std::span<const double> x, std::span<const double> y) const {
    double v = -gamma;
    for (size_t j = 0; j < alpha.size(); ++j) v += alpha[j] * x[j];
    for (size_t j = 0; j < beta.size(); ++j) v += beta[j] * y[j];
    return v;
  }
};

struct TiltBoundFailure : std::runtime_error {
  explicit TiltBoundFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Per-chi right-hand sides min{ nubar(chi), gamma - alpha_I^T chi } of the
/// tilting condition; -inf marks an empty slice whose constraint drops, and
/// an unbounded nubar LP falls back to the finite gamma branch.
std::vector<double> tilt_bounds(const MixedBinarySet& set, const BaseInequality& base,
                                const SupportSet& support);

struct TiltResult {
  enum class Kind { Tilted, Unbounded };
  Kind kind = Kind::Tilted;
  BaseInequality tilted;   // coefficients mu on the support, alpha elsewhere
  double violation = 0.0;  // at (x_hat, y_hat); compare with the base's
  std::vector<double> ray;
};

/// Maximizes the violation of mu_I^T x_hat - eta subject to the tilting
/// condition; off-support coefficients stay at alpha.
TiltResult tilt_cglp(std::span<const double> x_hat, std::span<const double> y_hat,
                     const MixedBinarySet& set, const BaseInequality& base, const SupportSet& support,
                     std::span<const double> bounds);

/// Epigraph of block k as a mixed-binary set with p = 1 (y is theta_k):
/// rows are theta >= d^T z, the block rows, and R(X).
MixedBinarySet epigraph_set(const BlockDiagonalProblem& problem, int k);

/// Base inequality a^T x - theta <= -b from an epigraph cut theta >= a^T x + b.
BaseInequality base_from_cut(const Cut& cut, int n);

/// Back to cut form; requires the single y coefficient to be -1 (epigraph).
Cut cut_from_tilt(const BaseInequality& tilted, int block);

/// On/off structure  D = { (x, z, theta) : 0 <= z <= u x, theta >= f(z) }
/// for a convex quadratic f(z) = quad z^2 + lin z (so f(0) = 0), with the
/// curve outer-approximated by tangents at a grid that always includes 0 and
/// z_bar. The base inequality is the subgradient cut of f at z_bar.
struct PerspectiveFixture {
  MixedBinarySet set;
  BaseInequality base;
  double slope = 0.0;        // s = f'(z_bar)
  double f_at_zbar = 0.0;    // f(z_bar)
  double mu_expected = 0.0;  // f(z_bar) - s z_bar
};
PerspectiveFixture perspective_fixture(double quad, double lin, double u, double z_bar,
                                       int grid_points = 9);

}  // namespace epicut
