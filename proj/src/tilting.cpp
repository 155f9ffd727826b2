#include "epicut/tilting.hpp"

#include <cmath>

namespace epicut {

namespace {

LinearProgram bound_lp(const MixedBinarySet& set, const BaseInequality& base,
                       const SupportSet& support) {
  LinearProgram lp;
  std::vector<char> in_support(set.n, 0);
  for (int idx : support.indices) in_support[idx] = 1;
  // maximize alpha_{off-support}^T x + beta^T y  ==  minimize the negative
  for (int j = 0; j < set.n; ++j) lp.add_var(0.0, 1.0, in_support[j] ? 0.0 : -base.alpha[j]);
  for (int j = 0; j < set.p; ++j) lp.add_var(set.y_lower[j], set.y_upper[j], -base.beta[j]);
  for (int j = 0; j < set.aux; ++j) lp.add_var(set.z_lower[j], set.z_upper[j], 0.0);
  for (const SparseRow& row : set.rows) lp.add_row(row);
  return lp;
}

}  // namespace

std::vector<double> tilt_bounds(const MixedBinarySet& set, const BaseInequality& base,
                                const SupportSet& support) {
  if (support.size() < 1) throw std::invalid_argument("tilt_bounds: support must be nonempty");
  if (static_cast<int>(base.alpha.size()) != set.n || static_cast<int>(base.beta.size()) != set.p)
    throw std::invalid_argument("tilt_bounds: base dimensions do not match the set");
  const int K = support.size();
  SimplexSolver solver(bound_lp(set, base, support));

  std::vector<double> bounds(1u << K, -kInf);
  for (std::uint32_t chi = 0; chi < bounds.size(); ++chi) {
    std::vector<BoundChange> fix;
    for (int t = 0; t < K; ++t) {
      const double v = (chi >> t) & 1 ? 1.0 : 0.0;
      fix.push_back({support.indices[t], v, v});
    }
    double cap = base.gamma;
    for (int t = 0; t < K; ++t)
      if ((chi >> t) & 1) cap -= base.alpha[support.indices[t]];
    const LPSolution& sol = solver.update_bounds_and_resolve(fix);
    switch (sol.status) {
      case SolveStatus::Optimal:
        bounds[chi] = std::min(-sol.objective, cap);
        break;
      case SolveStatus::Unbounded:
        bounds[chi] = cap;  // the gamma branch still binds
        break;
      case SolveStatus::PrimalInfeasible:
        bounds[chi] = -kInf;  // empty slice, constraint drops
        break;
      case SolveStatus::IterationLimit:
        throw TiltBoundFailure("tilt bound LP hit the pivot cap at pattern " + std::to_string(chi));
    }
  }
  return bounds;
}

TiltResult tilt_cglp(std::span<const double> x_hat, std::span<const double> y_hat,
                     const MixedBinarySet& set, const BaseInequality& base, const SupportSet& support,
                     std::span<const double> bounds) {
  const int K = support.size();
  if (static_cast<int>(bounds.size()) != (1 << K))
    throw std::invalid_argument("tilt_cglp: bounds size mismatch");
  std::vector<std::uint32_t> chis;
  std::vector<double> rhs;
  for (std::uint32_t chi = 0; chi < bounds.size(); ++chi) {
    if (bounds[chi] == -kInf) continue;
    chis.push_back(chi);
    rhs.push_back(-bounds[chi]);  // eta - mu^T chi >= b  <=>  mu^T chi + (-eta) <= -b
  }
  if (chis.empty()) throw std::invalid_argument("tilt_cglp: every slice is empty");
  std::vector<double> x_sub(K);
  for (int t = 0; t < K; ++t) x_sub[t] = x_hat[support.indices[t]];

  const EnvelopeResult env = affine_envelope_cglp(chis, rhs, x_sub);
  TiltResult out;
  if (!env.bounded) {
    out.kind = TiltResult::Kind::Unbounded;
    out.ray = env.ray;
    return out;
  }
  out.kind = TiltResult::Kind::Tilted;
  out.tilted = base;
  for (int t = 0; t < K; ++t) out.tilted.alpha[support.indices[t]] = env.mu[t];
  out.tilted.gamma = -env.eta;
  out.violation = out.tilted.violation_at(x_hat, y_hat);
  return out;
}

MixedBinarySet epigraph_set(const BlockDiagonalProblem& problem, int k) {
  const Block& blk = problem.blocks.at(k);
  MixedBinarySet set;
  set.n = problem.n();
  set.p = 1;  // theta
  set.aux = blk.num_y;
  set.y_lower = {-kInf};
  set.y_upper = {kInf};
  set.z_lower.assign(blk.num_y, 0.0);
  set.z_upper.assign(blk.num_y, kInf);

  SparseRow link;  // theta - d^T z >= 0
  link.push(set.n, 1.0);
  for (int j = 0; j < blk.num_y; ++j)
    if (blk.d[j] != 0.0) link.push(set.n + 1 + j, -blk.d[j]);
  link.sense = RowSense::GE;
  link.rhs = 0.0;
  set.rows.push_back(std::move(link));

  for (const BlockRow& brow : blk.rows) {
    SparseRow row;
    for (size_t t = 0; t < brow.t_index.size(); ++t) row.push(brow.t_index[t], brow.t_value[t]);
    for (size_t t = 0; t < brow.w_index.size(); ++t) row.push(set.n + 1 + brow.w_index[t], brow.w_value[t]);
    row.sense = brow.sense;
    row.rhs = brow.rhs;
    set.rows.push_back(std::move(row));
  }
  for (const SparseRow& row : relaxation_rows(problem.first_stage)) set.rows.push_back(row);
  return set;
}

BaseInequality base_from_cut(const Cut& cut, int n) {
  if (cut.theta_coef <= 0.0) throw std::invalid_argument("base_from_cut: need a positive theta coefficient");
  BaseInequality base;
  base.alpha.assign(n, 0.0);
  // theta_coef * theta + x_value . x >= rhs  maps to  a^T x - theta <= -b
  for (size_t t = 0; t < cut.x_index.size(); ++t)
    base.alpha[cut.x_index[t]] = -cut.x_value[t] / cut.theta_coef;
  base.beta = {-1.0};
  base.gamma = -cut.rhs / cut.theta_coef;
  return base;
}

Cut cut_from_tilt(const BaseInequality& tilted, int block) {
  if (tilted.beta.size() != 1 || std::abs(tilted.beta[0] + 1.0) > 1e-12)
    throw std::invalid_argument("cut_from_tilt: expected the epigraph form with beta = -1");
  Cut cut;
  cut.block = block;
  cut.theta_coef = 1.0;
  cut.rhs = -tilted.gamma;
  cut.origin = CutOrigin::Tilt;
  for (int j = 0; j < static_cast<int>(tilted.alpha.size()); ++j)
    if (tilted.alpha[j] != 0.0) {
      cut.x_index.push_back(j);
      cut.x_value.push_back(-tilted.alpha[j]);
    }
  return cut;
}

PerspectiveFixture perspective_fixture(double quad, double lin, double u, double z_bar,
                                       int grid_points) {
  if (quad < 0.0) throw std::invalid_argument("perspective_fixture: f must be convex");
  if (z_bar < 0.0 || z_bar > u) throw std::invalid_argument("perspective_fixture: z_bar outside [0, u]");
  auto f = [&](double z) { return quad * z * z + lin * z; };
  auto fp = [&](double z) { return 2.0 * quad * z + lin; };

  PerspectiveFixture fx;
  fx.slope = fp(z_bar);
  fx.f_at_zbar = f(z_bar);
  fx.mu_expected = fx.f_at_zbar - fx.slope * z_bar;

  MixedBinarySet& set = fx.set;
  set.n = 1;
  set.p = 2;  // y = (z, theta)
  set.aux = 0;
  set.y_lower = {0.0, -kInf};
  set.y_upper = {kInf, kInf};

  SparseRow capacity;  // z - u x <= 0
  capacity.push(0, -u);
  capacity.push(1, 1.0);
  capacity.sense = RowSense::LE;
  capacity.rhs = 0.0;
  set.rows.push_back(std::move(capacity));

  std::vector<double> knots = {0.0, z_bar};
  for (int g = 1; g < grid_points; ++g) knots.push_back(u * g / grid_points);
  for (double z0 : knots) {
    SparseRow tangent;  // theta - f'(z0) z >= f(z0) - f'(z0) z0
    tangent.push(2, 1.0);
    tangent.push(1, -fp(z0));
    tangent.sense = RowSense::GE;
    tangent.rhs = f(z0) - fp(z0) * z0;
    set.rows.push_back(std::move(tangent));
  }

  // subgradient cut of f at z_bar:  s z - theta <= s z_bar - f(z_bar)
  fx.base.alpha = {0.0};
  fx.base.beta = {fx.slope, -1.0};
  fx.base.gamma = fx.slope * z_bar - fx.f_at_zbar;
  return fx;
}

}  // namespace epicut
