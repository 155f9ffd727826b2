#pragma once

#include <span>
#include <vector>

#include "epicut/benders.hpp"
#include "epicut/sparse_cuts.hpp"

namespace epicut {

/// Per-candidate singleton values nu_i(0), nu_i(1), complemented so that
/// nu1 >= nu0 (the flag records that x_i was replaced by 1 - x_i).
struct SingletonProfile {
  std::vector<int> candidates;
  std::vector<double> nu0, nu1;
  std::vector<bool> complemented;
};

/// Applies the complement rule to raw singleton values.
SingletonProfile complement_profile(std::span<const int> candidates,
                                    std::span<const std::pair<double, double>> raw);

/// Two LP solves per candidate, cached through the singleton store.
SingletonProfile singleton_profile(NuEvaluator& eval, int k, std::span<const int> candidates,
                                   NuCache& cache);

/// Max-affine surrogate max_i { a_i x_i + b }: b is the lifted bound LB*,
/// a is sorted ascending, complement flags ride along from the profile.
struct Surrogate {
  std::vector<int> index;  // candidate indices in ascending-a order
  std::vector<double> a;   // nonnegative, ascending
  double b = 0.0;
  std::vector<bool> complemented;

  int size() const { return static_cast<int>(index.size()); }
  /// Complement-adjusted coordinate for the candidate at `pos`.
  double x_tilde(std::span<const double> x_hat, int pos) const {
    const double v = x_hat[index[pos]];
    return complemented[pos] ? 1.0 - v : v;
  }
};

Surrogate build_surrogate(const SingletonProfile& profile);

/// Convex-envelope value of the surrogate restricted to I at x_hat, via the
/// mixing-inequality separation scan; O(|I|) after sorting. x_hat carries
/// complemented coordinates pre-applied (use Surrogate::x_tilde upstream).
double mixing_violation(std::span<const double> x_tilde, const SupportSet& I, const Surrogate& s);

/// Greedy augmentation maximizing the mixing envelope; |I| = min(K, #cands).
/// Ties break toward the lowest original index. x_hat is un-complemented.
SupportSet greedy_support(std::span<const double> x_hat, int K, const Surrogate& s,
                          std::span<const int> candidates);

/// Cutting-plane rule: pool cuts ordered by tightness a^T x_hat + b at x_hat
/// (descending, older first on ties); within a cut, indices join by score
/// a_i x_hat_i + a_i^- until K is reached or scores hit zero, then the next
/// cut. May return fewer than K indices when the pool runs out.
SupportSet cutpl_support(std::span<const double> x_hat, double theta_hat, int K,
                         std::span<const Cut> pool_for_block);

/// Adaptive cardinality controller: starts at K=4; bumps K (and asks the
/// caller to restart per-K counters) when the gap closed over the last five
/// rounds at this K falls under 1% of the total gap closed so far.
class AdaptiveK {
 public:
  int k() const { return k_; }
  static bool should_increase(std::span<const double> gains_at_k, double total_gap_closed);
  /// Records one round's gap-closed delta; true means K was bumped.
  bool observe(double round_gain, double total_gap_closed);

 private:
  int k_ = 4;
  std::vector<double> gains_;
};

}  // namespace epicut
