#include "epicut/support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace epicut {

SingletonProfile complement_profile(std::span<const int> candidates,
                                    std::span<const std::pair<double, double>> raw) {
  if (candidates.empty() || candidates.size() != raw.size())
    throw std::invalid_argument("complement_profile: empty or mismatched inputs");
  SingletonProfile profile;
  for (size_t t = 0; t < candidates.size(); ++t) {
    profile.candidates.push_back(candidates[t]);
    const auto [n0, n1] = raw[t];
    if (n1 < n0) {
      profile.nu0.push_back(n1);
      profile.nu1.push_back(n0);
      profile.complemented.push_back(true);
    } else {
      profile.nu0.push_back(n0);
      profile.nu1.push_back(n1);
      profile.complemented.push_back(false);
    }
  }
  return profile;
}

SingletonProfile singleton_profile(NuEvaluator& eval, int k, std::span<const int> candidates,
                                   NuCache& cache) {
  return complement_profile(candidates, eval.singletons(k, candidates, cache));
}

Surrogate build_surrogate(const SingletonProfile& profile) {
  const size_t d = profile.candidates.size();
  Surrogate s;
  s.b = -kInf;
  for (size_t t = 0; t < d; ++t) s.b = std::max(s.b, profile.nu0[t]);  // LB*
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> a(d);
  for (size_t t = 0; t < d; ++t) a[t] = std::max(profile.nu1[t], s.b) - s.b;
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) { return a[lhs] < a[rhs]; });
  for (int t : order) {
    s.index.push_back(profile.candidates[t]);
    s.a.push_back(a[t]);
    s.complemented.push_back(profile.complemented[t]);
  }
  return s;
}

namespace {

// the separation scan over one subsequence of surrogate positions, which must
// arrive sorted ascending (ascending a); x values are complement-adjusted
double mixing_scan(const Surrogate& s, std::span<const int> positions, std::span<const double> x) {
  const int d = static_cast<int>(positions.size());
  std::vector<int> sigma(d, -1);
  double x_max = -kInf;
  int i_max = d - 1;
  for (int i = d - 1; i >= 0; --i) {
    if (x[i] > x_max) {
      sigma[i] = i_max;
      x_max = x[i];
      i_max = i;
    }
  }
  double g = s.b + s.a[positions[i_max]] * x[i_max];
  int k = i_max;
  while (k != d - 1) {
    g += (s.a[positions[sigma[k]]] - s.a[positions[k]]) * x[sigma[k]];
    k = sigma[k];
  }
  return g;
}

int position_of(const Surrogate& s, int original_index) {
  for (int pos = 0; pos < s.size(); ++pos)
    if (s.index[pos] == original_index) return pos;
  throw std::invalid_argument("index " + std::to_string(original_index) + " not in surrogate");
}

}  // namespace

double mixing_violation(std::span<const double> x_tilde, const SupportSet& I, const Surrogate& s) {
  std::vector<int> positions;
  positions.reserve(I.indices.size());
  for (int idx : I.indices) positions.push_back(position_of(s, idx));
  std::sort(positions.begin(), positions.end());
  std::vector<double> x(positions.size());
  for (size_t t = 0; t < positions.size(); ++t) x[t] = x_tilde[s.index[positions[t]]];
  return mixing_scan(s, positions, x);
}

SupportSet greedy_support(std::span<const double> x_hat, int K, const Surrogate& s,
                          std::span<const int> candidates) {
  if (K < 1) throw std::invalid_argument("greedy_support: K must be positive");
  if (candidates.empty()) throw std::invalid_argument("greedy_support: no candidates");
  std::vector<int> cand_pos;
  for (int idx : candidates) cand_pos.push_back(position_of(s, idx));

  std::vector<double> x_tilde(x_hat.begin(), x_hat.end());
  for (int pos = 0; pos < s.size(); ++pos)
    if (s.complemented[pos]) x_tilde[s.index[pos]] = 1.0 - x_hat[s.index[pos]];

  std::vector<int> chosen;  // positions
  const int target = std::min<int>(K, static_cast<int>(cand_pos.size()));
  while (static_cast<int>(chosen.size()) < target) {
    int best_pos = -1;
    double best_g = -kInf;
    for (int pos : cand_pos) {
      if (std::find(chosen.begin(), chosen.end(), pos) != chosen.end()) continue;
      std::vector<int> trial = chosen;
      trial.push_back(pos);
      std::sort(trial.begin(), trial.end());
      std::vector<double> x(trial.size());
      for (size_t t = 0; t < trial.size(); ++t) x[t] = x_tilde[s.index[trial[t]]];
      const double g = mixing_scan(s, trial, x);
      const bool better = g > best_g + 1e-12 ||
                          (g >= best_g - 1e-12 && (best_pos < 0 || s.index[pos] < s.index[best_pos]));
      if (better) {
        best_g = g;
        best_pos = pos;
      }
    }
    chosen.push_back(best_pos);
  }
  std::vector<int> indices;
  for (int pos : chosen) indices.push_back(s.index[pos]);
  return SupportSet::of(std::move(indices), static_cast<int>(x_hat.size()));
}

SupportSet cutpl_support(std::span<const double> x_hat, double theta_hat, int K,
                         std::span<const Cut> pool_for_block) {
  (void)theta_hat;  // the scores and the ordering depend on x_hat only
  if (pool_for_block.empty()) throw std::invalid_argument("cutpl_support: empty pool");
  if (K < 1) throw std::invalid_argument("cutpl_support: K must be positive");

  // order by tightness a^T x_hat + b = rhs - x_coeffs . x_hat, older first on ties
  std::vector<int> order(pool_for_block.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> tightness(pool_for_block.size());
  for (size_t c = 0; c < pool_for_block.size(); ++c) {
    const Cut& cut = pool_for_block[c];
    double dot = 0.0;
    for (size_t t = 0; t < cut.x_index.size(); ++t) dot += cut.x_value[t] * x_hat[cut.x_index[t]];
    tightness[c] = cut.rhs - dot;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int lhs, int rhs) { return tightness[lhs] > tightness[rhs]; });

  std::vector<int> selected;
  for (int c : order) {
    if (static_cast<int>(selected.size()) >= K) break;
    const Cut& cut = pool_for_block[c];
    std::vector<std::pair<double, int>> scored;  // (score, index)
    for (size_t t = 0; t < cut.x_index.size(); ++t) {
      const double a_i = -cut.x_value[t];  // cut reads theta + x_value . x >= rhs
      const double score = a_i * x_hat[cut.x_index[t]] + std::max(-a_i, 0.0);
      if (score > 0.0) scored.emplace_back(score, cut.x_index[t]);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& lhs, const auto& rhs) {
      if (lhs.first != rhs.first) return lhs.first > rhs.first;
      return lhs.second < rhs.second;
    });
    for (const auto& [score, idx] : scored) {
      if (static_cast<int>(selected.size()) >= K) break;
      if (std::find(selected.begin(), selected.end(), idx) == selected.end()) selected.push_back(idx);
    }
  }
  if (selected.empty()) return SupportSet{};  // nothing scored; caller logs and skips
  return SupportSet::of(std::move(selected), static_cast<int>(x_hat.size()));
}

bool AdaptiveK::should_increase(std::span<const double> gains_at_k, double total_gap_closed) {
  if (gains_at_k.empty()) return false;
  const size_t window = std::min<size_t>(5, gains_at_k.size());
  double recent = 0.0;
  for (size_t t = gains_at_k.size() - window; t < gains_at_k.size(); ++t) recent += gains_at_k[t];
  return recent < 0.01 * total_gap_closed;
}

bool AdaptiveK::observe(double round_gain, double total_gap_closed) {
  gains_.push_back(round_gain);
  if (k_ < 10 && should_increase(gains_, total_gap_closed)) {
    ++k_;
    gains_.clear();
    return true;
  }
  return false;
}

}  // namespace epicut
