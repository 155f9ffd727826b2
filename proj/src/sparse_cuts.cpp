#include "epicut/sparse_cuts.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace epicut {

std::vector<std::uint32_t> gray_sequence(int K) {
  if (K < 1 || K > 20) throw std::invalid_argument("gray_sequence: K must be in [1, 20]");
  std::vector<std::uint32_t> seq(1u << K);
  for (std::uint32_t i = 0; i < seq.size(); ++i) seq[i] = i ^ (i >> 1);
  return seq;
}

SupportSet SupportSet::of(std::vector<int> idx, int n) {
  std::sort(idx.begin(), idx.end());
  if (idx.empty() || idx.size() > 20) throw std::invalid_argument("support size must be in [1, 20]");
  for (size_t t = 0; t < idx.size(); ++t) {
    if (idx[t] < 0 || idx[t] >= n) throw std::invalid_argument("support index out of range");
    if (t > 0 && idx[t] == idx[t - 1]) throw std::invalid_argument("support indices must be distinct");
  }
  return SupportSet{std::move(idx)};
}

std::shared_ptr<const NuTable> NuCache::find(int block, const SupportSet& support) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = tables_.find({block, support.indices});
  return it == tables_.end() ? nullptr : it->second;
}

std::shared_ptr<const NuTable> NuCache::insert(NuTable table) {
  auto ptr = std::make_shared<const NuTable>(std::move(table));
  std::lock_guard<std::mutex> lock(mu_);
  const auto [it, fresh] = tables_.emplace(Key{ptr->block, ptr->support.indices}, ptr);
  return fresh ? ptr : it->second;
}

bool NuCache::find_singleton(int block, int i, std::pair<double, double>& out) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = singletons_.find({block, i});
  if (it == singletons_.end()) return false;
  out = it->second;
  return true;
}

void NuCache::insert_singleton(int block, int i, std::pair<double, double> values) {
  std::lock_guard<std::mutex> lock(mu_);
  singletons_.emplace(std::make_pair(block, i), values);
}

std::vector<std::shared_ptr<const NuTable>> NuCache::tables_sorted() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::shared_ptr<const NuTable>> out;
  out.reserve(tables_.size());
  for (const auto& [key, table] : tables_) out.push_back(table);
  return out;
}

int NuCache::num_tables() const {
  std::lock_guard<std::mutex> lock(mu_);
  return static_cast<int>(tables_.size());
}

NuEvaluator::NuEvaluator(const BlockDiagonalProblem& problem) : problem_(problem) {
  nu_lp_.resize(problem.num_blocks());
}

double NuEvaluator::slice_value(int k, std::span<const BoundChange> changes) {
  if (!nu_lp_.at(k)) nu_lp_[k] = std::make_unique<SimplexSolver>(build_block_lp(problem_, k, true));
  const LPSolution& sol = nu_lp_[k]->update_bounds_and_resolve(changes);
  switch (sol.status) {
    case SolveStatus::Optimal: return sol.objective;
    case SolveStatus::PrimalInfeasible: return kInf;  // chi outside proj_I(R(X))
    case SolveStatus::Unbounded:
      throw std::runtime_error("nu evaluation: block " + std::to_string(k) + " unbounded below");
    case SolveStatus::IterationLimit:
      throw std::runtime_error("nu evaluation: block " + std::to_string(k) + " hit the pivot cap");
  }
  return kInf;
}

std::shared_ptr<const NuTable> NuEvaluator::eval(int k, const SupportSet& support, NuCache& cache) {
  if (auto hit = cache.find(k, support)) return hit;
  const int K = support.size();
  const std::vector<std::uint32_t> order = gray_sequence(K);

  NuTable table;
  table.block = k;
  table.support = support;
  table.values.assign(1u << K, kInf);

  // first pattern: reset every x to the box, pin the support to zero
  std::vector<BoundChange> reset;
  reset.reserve(problem_.n());
  std::vector<char> in_support(problem_.n(), 0);
  for (int idx : support.indices) in_support[idx] = 1;
  for (int j = 0; j < problem_.n(); ++j) {
    if (in_support[j]) reset.push_back({j, 0.0, 0.0});
    else reset.push_back({j, 0.0, 1.0});
  }
  table.values[order[0]] = slice_value(k, reset);
  for (size_t t = 1; t < order.size(); ++t) {
    const std::uint32_t flipped = order[t] ^ order[t - 1];
    int bit = 0;
    while (!((flipped >> bit) & 1)) ++bit;
    const double v = (order[t] >> bit) & 1 ? 1.0 : 0.0;
    const BoundChange change{support.indices[bit], v, v};
    table.values[order[t]] = slice_value(k, {&change, 1});
  }
  return cache.insert(std::move(table));
}

std::pair<double, double> NuEvaluator::singleton(int k, int i, NuCache& cache) {
  std::pair<double, double> out;
  if (cache.find_singleton(k, i, out)) return out;
  std::vector<BoundChange> fix;
  for (int j = 0; j < problem_.n(); ++j) fix.push_back({j, 0.0, j == i ? 0.0 : 1.0});
  out.first = slice_value(k, fix);
  const BoundChange flip{i, 1.0, 1.0};
  out.second = slice_value(k, {&flip, 1});
  cache.insert_singleton(k, i, out);
  return out;
}

std::vector<std::pair<double, double>> NuEvaluator::singletons(int k, std::span<const int> candidates,
                                                               NuCache& cache) {
  std::vector<std::pair<double, double>> out(candidates.size());
  bool box_reset = false;
  int previous = -1;
  for (size_t t = 0; t < candidates.size(); ++t) {
    const int i = candidates[t];
    if (cache.find_singleton(k, i, out[t])) continue;
    std::vector<BoundChange> fix;
    if (!box_reset) {
      for (int j = 0; j < problem_.n(); ++j) fix.push_back({j, 0.0, j == i ? 0.0 : 1.0});
      box_reset = true;
    } else {
      if (previous >= 0) fix.push_back({previous, 0.0, 1.0});
      fix.push_back({i, 0.0, 0.0});
    }
    out[t].first = slice_value(k, fix);
    const BoundChange flip{i, 1.0, 1.0};
    out[t].second = slice_value(k, {&flip, 1});
    cache.insert_singleton(k, i, out[t]);
    previous = i;
  }
  return out;
}

EnvelopeResult affine_envelope_cglp(std::span<const std::uint32_t> chis, std::span<const double> rhs,
                                    std::span<const double> x_hat) {
  if (chis.empty() || chis.size() != rhs.size())
    throw std::invalid_argument("affine_envelope_cglp: need matching, nonempty patterns");
  const int K = static_cast<int>(x_hat.size());

  // convex-combination dual: min rhs^T lambda s.t. sum chi lambda = x_hat,
  // sum lambda = 1. Its row duals are exactly (mu, eta).
  LinearProgram dual;
  for (size_t c = 0; c < chis.size(); ++c) dual.add_var(0.0, kInf, rhs[c]);
  for (int i = 0; i < K; ++i) {
    SparseRow row;
    for (size_t c = 0; c < chis.size(); ++c)
      if ((chis[c] >> i) & 1) row.push(static_cast<int>(c), 1.0);
    row.sense = RowSense::EQ;
    row.rhs = x_hat[i];
    dual.add_row(std::move(row));
  }
  SparseRow hull;
  for (size_t c = 0; c < chis.size(); ++c) hull.push(static_cast<int>(c), 1.0);
  hull.sense = RowSense::EQ;
  hull.rhs = 1.0;
  dual.add_row(std::move(hull));

  const LPSolution sol = solve_lp(dual);
  EnvelopeResult out;
  if (sol.status == SolveStatus::Optimal) {
    out.bounded = true;
    out.value = sol.objective;
    out.mu.assign(sol.row_dual.begin(), sol.row_dual.begin() + K);
    out.eta = sol.row_dual[K];
    return out;
  }
  if (sol.status != SolveStatus::PrimalInfeasible)
    throw std::runtime_error("affine_envelope_cglp: dual form did not solve");

  // x_hat lies outside the convex hull of the patterns; recover the
  // separating functional from the primal form's unbounded ray
  LinearProgram primal;
  for (int i = 0; i < K; ++i) primal.add_var(-kInf, kInf, -x_hat[i]);
  primal.add_var(-kInf, kInf, -1.0);  // eta
  for (size_t c = 0; c < chis.size(); ++c) {
    SparseRow row;
    for (int i = 0; i < K; ++i)
      if ((chis[c] >> i) & 1) row.push(i, 1.0);
    row.push(K, 1.0);
    row.sense = RowSense::LE;
    row.rhs = rhs[c];
    primal.add_row(std::move(row));
  }
  const LPSolution ps = solve_lp(primal);
  if (ps.status == SolveStatus::Unbounded) {
    out.bounded = false;
    out.ray = ps.ray;
    return out;
  }
  if (ps.status == SolveStatus::Optimal) {  // tolerance disagreement; accept
    out.bounded = true;
    out.value = -ps.objective;
    out.mu.assign(ps.x.begin(), ps.x.begin() + K);
    out.eta = ps.x[K];
    return out;
  }
  throw std::runtime_error("affine_envelope_cglp: inconsistent primal/dual outcome");
}

SparseCutResult solve_cglp(std::span<const double> x_hat, double theta_hat, const NuTable& table) {
  const int K = table.k_size();
  std::vector<double> x_sub(K);
  for (int t = 0; t < K; ++t) x_sub[t] = x_hat[table.support.indices[t]];

  std::vector<std::uint32_t> chis;
  std::vector<double> rhs;
  for (std::uint32_t c = 0; c < table.values.size(); ++c) {
    if (std::isfinite(table.values[c])) {
      chis.push_back(c);
      rhs.push_back(table.values[c]);
    }
  }
  if (chis.empty()) throw std::invalid_argument("solve_cglp: table has no finite entries");

  const EnvelopeResult env = affine_envelope_cglp(chis, rhs, x_sub);
  SparseCutResult out;
  if (!env.bounded) {
    out.kind = SparseCutResult::Kind::UnboundedSeparation;
    out.ray = env.ray;
    return out;
  }
  out.violation = env.value;
  out.mu = env.mu;
  out.eta = env.eta;
  if (env.value <= theta_hat + 1e-6) {
    out.kind = SparseCutResult::Kind::NoViolation;
    return out;
  }
  out.kind = SparseCutResult::Kind::Cut;
  Cut cut;
  cut.block = table.block;
  cut.theta_coef = 1.0;
  cut.rhs = env.eta;
  cut.origin = CutOrigin::ISparse;
  cut.support = table.support.indices;
  for (int t = 0; t < K; ++t) {
    if (env.mu[t] == 0.0) continue;
    cut.x_index.push_back(table.support.indices[t]);
    cut.x_value.push_back(-env.mu[t]);
  }
  out.cut = std::move(cut);
  return out;
}

std::vector<Cut> recheck_cached_supports(std::span<const double> x_hat,
                                         std::span<const double> theta_hat_per_block,
                                         const NuCache& cache) {
  std::vector<Cut> cuts;
  for (const auto& table : cache.tables_sorted()) {
    const SparseCutResult res = solve_cglp(x_hat, theta_hat_per_block[table->block], *table);
    if (res.kind == SparseCutResult::Kind::Cut) cuts.push_back(res.cut);
  }
  return cuts;
}

void dump_nu_tables(const NuCache& cache, std::ostream& out) {
  out << "k,I,chi,nu\n";
  for (const auto& table : cache.tables_sorted()) {
    std::string support;
    for (size_t t = 0; t < table->support.indices.size(); ++t) {
      if (t) support += ';';
      support += std::to_string(table->support.indices[t]);
    }
    const int K = table->k_size();
    for (std::uint32_t c = 0; c < table->values.size(); ++c) {
      std::string bits(K, '0');
      for (int b = 0; b < K; ++b)
        if ((c >> b) & 1) bits[b] = '1';
      out << table->block << ',' << support << ',' << bits << ',';
      if (std::isfinite(table->values[c])) out << table->values[c];
      else out << "inf";
      out << '\n';
    }
  }
}

}  // namespace epicut
