#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epicut/instances.hpp"
#include "epicut/rng.hpp"
#include "epicut/support.hpp"
#include "oracles.hpp"

using namespace epicut;
using namespace epicut::testing;

namespace {

Surrogate plain_surrogate(std::vector<double> ascending_a, double b) {
  Surrogate s;
  s.a = std::move(ascending_a);
  s.b = b;
  for (int i = 0; i < static_cast<int>(s.a.size()); ++i) {
    s.index.push_back(i);
    s.complemented.push_back(false);
  }
  return s;
}

SupportSet all_of(int d) {
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  return SupportSet::of(std::move(idx), d);
}

Cut benders_style_cut(std::vector<double> a, double b) {
  // theta >= a^T x + b  stored in row form
  Cut cut;
  cut.block = 0;
  cut.theta_coef = 1.0;
  cut.rhs = b;
  cut.origin = CutOrigin::Benders;
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    if (a[i] != 0.0) {
      cut.x_index.push_back(i);
      cut.x_value.push_back(-a[i]);
    }
  return cut;
}

}  // namespace

TEST_CASE("complement rule") {
  const std::vector<int> cands = {0, 1};
  const std::vector<std::pair<double, double>> raw = {{1.0, 3.0}, {2.0, 0.0}};
  const SingletonProfile profile = complement_profile(cands, raw);
  CHECK(!profile.complemented[0]);
  CHECK(profile.nu0[0] == 1.0);
  CHECK(profile.nu1[0] == 3.0);
  CHECK(profile.complemented[1]);
  CHECK(profile.nu0[1] == 0.0);
  CHECK(profile.nu1[1] == 2.0);

  BlockDiagonalProblem p = trivial_recourse_problem();
  NuEvaluator eval(p);
  NuCache cache;
  const std::vector<int> one = {0};
  const SingletonProfile trivial = singleton_profile(eval, 0, one, cache);
  CHECK(trivial.complemented[0]);  // nu(1)=0 < nu(0)=1
  CHECK(trivial.nu0[0] == doctest::Approx(0.0));
  CHECK(trivial.nu1[0] == doctest::Approx(1.0));
}

TEST_CASE("singleton profile matches cold LP solves on a desk block") {
  CapParams params;
  params.facilities = 10;
  params.customers = 8;
  params.scenarios = 2;
  BlockDiagonalProblem p = gen_cap(params, 77);
  NuEvaluator eval(p);
  NuCache cache;
  std::vector<int> cands(10);
  std::iota(cands.begin(), cands.end(), 0);
  const SingletonProfile profile = singleton_profile(eval, 0, cands, cache);
  for (int t = 0; t < 10; ++t) {
    for (int bit = 0; bit < 2; ++bit) {
      LinearProgram lp = build_block_lp(p, 0, true);
      lp.lower[t] = bit;
      lp.upper[t] = bit;
      const LPSolution sol = solve_lp(lp);
      REQUIRE(sol.status == SolveStatus::Optimal);
      const double expect = sol.objective;
      const double got = profile.complemented[t] ? (bit ? profile.nu0[t] : profile.nu1[t])
                                                 : (bit ? profile.nu1[t] : profile.nu0[t]);
      CHECK(got == doctest::Approx(expect).epsilon(1e-7));
    }
  }
}

TEST_CASE("surrogate construction") {
  SingletonProfile profile;
  profile.candidates = {0, 1};
  profile.nu0 = {1.0, 0.0};
  profile.nu1 = {3.0, 2.0};
  profile.complemented = {false, true};
  const Surrogate s = build_surrogate(profile);
  CHECK(s.b == doctest::Approx(1.0));  // LB* = max(1, 0)
  REQUIRE(s.size() == 2);
  CHECK(s.index == std::vector<int>{1, 0});  // a ascending: (1, 2)
  CHECK(s.a[0] == doctest::Approx(1.0));
  CHECK(s.a[1] == doctest::Approx(2.0));
  CHECK(s.complemented == std::vector<bool>{true, false});

  SingletonProfile single;
  single.candidates = {4};
  single.nu0 = {0.0};
  single.nu1 = {5.0};
  single.complemented = {false};
  const Surrogate s1 = build_surrogate(single);
  CHECK(s1.a == std::vector<double>{5.0});
  CHECK(s1.b == 0.0);

  SingletonProfile flat;
  flat.candidates = {0, 1, 2};
  flat.nu0 = {2.5, 2.5, 2.5};
  flat.nu1 = {2.5, 2.5, 2.5};
  flat.complemented = {false, false, false};
  const Surrogate sf = build_surrogate(flat);
  CHECK(sf.b == doctest::Approx(2.5));
  for (double v : sf.a) CHECK(v == 0.0);
}

TEST_CASE("mixing violation examples") {
  const Surrogate s = plain_surrogate({1.0, 2.0, 3.0}, 0.0);
  const std::vector<double> x = {0.5, 0.2, 0.4};
  CHECK(mixing_violation(x, all_of(3), s) == doctest::Approx(1.3));
  const std::vector<double> zero = {0.0, 0.0, 0.0};
  CHECK(mixing_violation(zero, all_of(3), s) == doctest::Approx(0.0));
  for (std::uint32_t chi = 0; chi < 8; ++chi) {
    std::vector<double> v(3);
    double expect = s.b;
    for (int i = 0; i < 3; ++i) {
      v[i] = (chi >> i) & 1;
      if ((chi >> i) & 1) expect = std::max(expect, s.a[i] + s.b);
    }
    CHECK(mixing_violation(v, all_of(3), s) == doctest::Approx(expect));
  }
}

TEST_CASE("mixing violation equals brute-force subsequence maximization") {
  Rng rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    const int d = static_cast<int>(rng.uniform_int(1, 8));
    std::vector<double> a(d);
    for (double& v : a) v = rng.uniform(0.0, 5.0);
    std::sort(a.begin(), a.end());
    const double b = rng.uniform(-2.0, 2.0);
    std::vector<double> x(d);
    for (double& v : x) v = rng.uniform();
    const Surrogate s = plain_surrogate(a, b);
    const double got = mixing_violation(x, all_of(d), s);
    const double expect = brute_force_mixing(a, b, x);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(got - expect) <= 1e-9);
  }
}

TEST_CASE("mixing violation equals the cglp on surrogate-shaped tables") {
  Rng rng(55);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 5;
    std::vector<double> a(n);
    for (double& v : a) v = rng.uniform(0.0, 4.0);
    std::sort(a.begin(), a.end());
    const double b = rng.uniform(0.0, 2.0);
    BlockDiagonalProblem p = max_affine_problem(a, b);
    NuEvaluator eval(p);
    NuCache cache;
    const Surrogate s = plain_surrogate(a, b);
    std::vector<int> pick;
    for (int j = 0; j < n; ++j)
      if (rng.uniform() < 0.5) pick.push_back(j);
    if (pick.empty()) pick.push_back(static_cast<int>(rng.uniform_int(0, n - 1)));
    const SupportSet I = SupportSet::of(pick, n);
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform();
    const auto table = eval.eval(0, I, cache);
    const SparseCutResult res = solve_cglp(x, -1e9, *table);
    REQUIRE(res.kind == SparseCutResult::Kind::Cut);
    CHECK(mixing_violation(x, I, s) == doctest::Approx(res.violation).epsilon(1e-7));
  }
}

TEST_CASE("monotone submodular surrogate envelope") {
  Rng rng(66);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = static_cast<int>(rng.uniform_int(3, 10));
    std::vector<double> a(n);
    for (double& v : a) v = rng.uniform(0.0, 5.0);
    std::sort(a.begin(), a.end());
    const Surrogate s = plain_surrogate(a, rng.uniform(-1.0, 1.0));
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform();

    std::vector<int> base;
    for (int j = 0; j < n; ++j)
      if (rng.uniform() < 0.4) base.push_back(j);
    std::vector<int> rest;
    for (int j = 0; j < n; ++j)
      if (std::find(base.begin(), base.end(), j) == base.end()) rest.push_back(j);
    if (rest.size() < 2) continue;
    const int j = rest[0], k = rest[1];

    auto g = [&](std::vector<int> set) {
      if (set.empty()) return s.b;  // envelope of the empty support
      return mixing_violation(x, SupportSet::of(std::move(set), n), s);
    };
    auto with = [&](std::vector<int> set, std::initializer_list<int> add) {
      for (int v : add) set.push_back(v);
      return set;
    };
    const double g_s = g(base);
    const double g_j = g(with(base, {j}));
    const double g_k = g(with(base, {k}));
    const double g_jk = g(with(base, {j, k}));
    CHECK(g_j + g_k >= g_jk + g_s - 1e-9);  // submodularity
    CHECK(g_s <= g_j + 1e-9);               // monotonicity
    CHECK(g_j <= g_jk + 1e-9);
  }
}

TEST_CASE("greedy support examples") {
  const Surrogate s = plain_surrogate({1.0, 2.0, 3.0}, 0.0);
  const std::vector<double> x = {0.5, 0.2, 0.4};
  const std::vector<int> cands = {0, 1, 2};
  const SupportSet two = greedy_support(x, 2, s, cands);
  CHECK(two.indices == std::vector<int>{0, 2});  // picks a_3's index then index 1
  const SupportSet one = greedy_support(x, 1, s, cands);
  CHECK(one.indices == std::vector<int>{2});  // argmax a_i x_i
  const SupportSet all = greedy_support(x, 7, s, cands);
  CHECK(all.indices == std::vector<int>{0, 1, 2});

  // K=1 ties break to the lowest index
  const Surrogate tied = plain_surrogate({1.0, 1.0}, 0.0);
  const std::vector<double> xt = {0.5, 0.5};
  const std::vector<int> both = {0, 1};
  CHECK(greedy_support(xt, 1, tied, both).indices == std::vector<int>{0});
}

TEST_CASE("greedy meets the 1 - 1/e guarantee against exhaustive search") {
  Rng rng(77);
  const double ratio = 1.0 - std::exp(-1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = static_cast<int>(rng.uniform_int(4, 10));
    const int K = static_cast<int>(rng.uniform_int(1, 4));
    std::vector<double> a(n);
    for (double& v : a) v = rng.uniform(0.0, 5.0);
    std::sort(a.begin(), a.end());
    const Surrogate s = plain_surrogate(a, rng.uniform(0.0, 1.0));
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform();
    std::vector<int> cands(n);
    std::iota(cands.begin(), cands.end(), 0);

    const SupportSet greedy = greedy_support(x, K, s, cands);
    const double greedy_value = mixing_violation(x, greedy, s);
    double best = -kInf;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) != std::min(K, n)) continue;
      std::vector<int> set;
      for (int j = 0; j < n; ++j)
        if ((mask >> j) & 1) set.push_back(j);
      best = std::max(best, mixing_violation(x, SupportSet::of(set, n), s));
    }
    // guarantee applies to the gain over the empty-set value b
    CHECK(greedy_value - s.b >= ratio * (best - s.b) - 1e-9);
  }
}

TEST_CASE("cutpl support examples") {
  const std::vector<double> x = {0.5, 0.5, 1.0};
  std::vector<Cut> pool;
  pool.push_back(benders_style_cut({2.0, -1.0, 0.0}, 0.0));
  const SupportSet two = cutpl_support(x, 0.0, 2, pool);
  CHECK(two.indices == std::vector<int>{0, 1});  // scores (1, 0.5, 0)

  // zero scores in the first (tighter) cut move selection to the second
  std::vector<Cut> staged;
  staged.push_back(benders_style_cut({0.0, 0.0, 0.0}, 10.0));  // tight but scoreless
  staged.push_back(benders_style_cut({1.0, 2.0, 0.0}, 0.0));
  const SupportSet moved = cutpl_support(x, 0.0, 2, staged);
  CHECK(moved.indices == std::vector<int>{0, 1});

  // pool exhausted: shorter support comes back
  std::vector<Cut> thin;
  thin.push_back(benders_style_cut({3.0, 0.0, 0.0}, 0.0));
  CHECK(cutpl_support(x, 0.0, 2, thin).indices == std::vector<int>{0});

  // tightness ordering is total: equal tightness resolves by insertion order
  std::vector<Cut> tie;
  tie.push_back(benders_style_cut({0.0, 0.0, 1.0}, 0.0));  // value 1 at x
  tie.push_back(benders_style_cut({2.0, 0.0, 0.0}, 0.0));  // value 1 at x
  const SupportSet first = cutpl_support(x, 0.0, 1, tie);
  CHECK(first.indices == std::vector<int>{2});  // from the older cut
}

TEST_CASE("cutpl full support recovers the cut violation closed form") {
  Rng rng(88);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 4;
    std::vector<double> a(n);
    for (double& v : a) v = rng.uniform(-3.0, 3.0);
    double neg = 0.0;
    for (double v : a) neg += std::max(-v, 0.0);
    const double b = neg + rng.uniform(0.0, 2.0);  // keeps the fixture block exact
    BlockDiagonalProblem p = single_cut_problem(a, b);
    NuEvaluator eval(p);
    NuCache cache;
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform();
    const double theta_hat = rng.uniform(-1.0, 1.0);

    const auto table = eval.eval(0, all_of(n), cache);
    const SparseCutResult res = solve_cglp(x, -1e9, *table);
    REQUIRE(res.kind == SparseCutResult::Kind::Cut);
    double expect = b;  // full support: -sum a_i^- + sum_I (a_i x_i + a_i^-) + b
    for (int i = 0; i < n; ++i) expect += a[i] * x[i];
    CHECK(res.violation - theta_hat == doctest::Approx(expect - theta_hat).epsilon(1e-8));
  }
}

TEST_CASE("adaptive K controller") {
  CHECK(AdaptiveK::should_increase(std::vector<double>{0.05}, 10.0));
  CHECK(!AdaptiveK::should_increase(std::vector<double>{0.5}, 10.0));
  const std::vector<double> window = {5.0, 5.0, 0.01, 0.01, 0.01, 0.01, 0.02};
  CHECK(AdaptiveK::should_increase(window, 10.0));  // only the last five count

  AdaptiveK ctl;
  CHECK(ctl.k() == 4);
  CHECK(!ctl.observe(5.0, 10.0));  // healthy progress keeps K
  CHECK(ctl.k() == 4);
  AdaptiveK stalled;
  CHECK(stalled.observe(0.05, 10.0));  // 0.5% of the closed gap: bump and restart
  CHECK(stalled.k() == 5);
  for (int bumps = 0; bumps < 20; ++bumps) stalled.observe(0.0, 10.0);
  CHECK(stalled.k() == 10);  // capped, never increases past 10
}
