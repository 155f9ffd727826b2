#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "epicut/problem.hpp"

namespace epicut {

/// Reflected Gray code over K bits: starts at zero, consecutive patterns
/// differ in exactly one bit, visits all 2^K patterns once.
std::vector<std::uint32_t> gray_sequence(int K);

/// Ascending index set; bit t of a chi pattern refers to indices[t].
struct SupportSet {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  /// Sorts, rejects duplicates, out-of-range indices, and K > 20.
  static SupportSet of(std::vector<int> idx, int n);
};

/// nu_I(chi) = min { Q_k(x) : x in R(X), x_I = chi } for every chi pattern;
/// +inf marks chi outside the projection of R(X).
struct NuTable {
  int block = 0;
  SupportSet support;
  std::vector<double> values;  // size 1 << K, indexed by chi bit pattern

  int k_size() const { return support.size(); }
};

/// Table store keyed by (block, sorted support) plus a singleton store for
/// the one-index values the selection rules consume. Concurrent readers are
/// fine; insertion takes the lock; stored tables are immutable.
class NuCache {
 public:
  std::shared_ptr<const NuTable> find(int block, const SupportSet& support) const;
  std::shared_ptr<const NuTable> insert(NuTable table);

  bool find_singleton(int block, int i, std::pair<double, double>& out) const;
  void insert_singleton(int block, int i, std::pair<double, double> values);

  /// Tables in deterministic (block, support) order.
  std::vector<std::shared_ptr<const NuTable>> tables_sorted() const;
  int num_tables() const;

 private:
  using Key = std::pair<int, std::vector<int>>;
  mutable std::mutex mu_;
  std::map<Key, std::shared_ptr<const NuTable>> tables_;
  std::map<std::pair<int, int>, std::pair<double, double>> singletons_;
};

/// Evaluates nu tables with one warm-started LP per block, visiting the chi
/// patterns in Gray order so each step changes a single variable bound.
/// Calls for distinct blocks may run concurrently.
class NuEvaluator {
 public:
  explicit NuEvaluator(const BlockDiagonalProblem& problem);

  std::shared_ptr<const NuTable> eval(int k, const SupportSet& support, NuCache& cache);
  /// (nu_i(0), nu_i(1)) for the singleton support {i}.
  std::pair<double, double> singleton(int k, int i, NuCache& cache);
  /// Batched singleton sweep: one bound release/fix pair per candidate
  /// instead of a full reset each, with identical values.
  std::vector<std::pair<double, double>> singletons(int k, std::span<const int> candidates,
                                                    NuCache& cache);

 private:
  double slice_value(int k, std::span<const BoundChange> changes);

  const BlockDiagonalProblem& problem_;
  std::vector<std::unique_ptr<SimplexSolver>> nu_lp_;
};

/// max { mu^T x_hat + eta : mu^T chi + eta <= rhs[c] for every pattern }.
/// Solved through the convex-combination dual, whose row duals are (mu, eta).
struct EnvelopeResult {
  bool bounded = true;
  double value = 0.0;
  std::vector<double> mu;
  double eta = 0.0;
  std::vector<double> ray;  // improving (dmu..., deta) when unbounded
};
EnvelopeResult affine_envelope_cglp(std::span<const std::uint32_t> chis, std::span<const double> rhs,
                                    std::span<const double> x_hat);

struct SparseCutResult {
  enum class Kind { Cut, NoViolation, UnboundedSeparation };
  Kind kind = Kind::NoViolation;
  Cut cut;                 // when kind == Cut
  double violation = 0.0;  // g, when the CGLP solved
  std::vector<double> mu;  // CGLP multipliers, when solved
  double eta = 0.0;
  std::vector<double> ray;  // certificate when kind == UnboundedSeparation
};

/// Separation LP over the table: emits a cut iff g > theta_hat + 1e-6.
/// Infinite rows are dropped; an unbounded CGLP certifies that x_hat's
/// support coordinates lie outside conv(proj_I(X)).
SparseCutResult solve_cglp(std::span<const double> x_hat, double theta_hat, const NuTable& table);

/// Re-runs the CGLP over every cached table (no nu re-evaluation) and
/// returns the violated cuts in deterministic table order.
std::vector<Cut> recheck_cached_supports(std::span<const double> x_hat,
                                         std::span<const double> theta_hat_per_block,
                                         const NuCache& cache);

/// Debug CSV: block, support, chi bits, nu.
void dump_nu_tables(const NuCache& cache, std::ostream& out);

}  // namespace epicut
