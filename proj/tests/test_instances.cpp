#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "epicut/instances.hpp"
#include "epicut/rng.hpp"
#include "oracles.hpp"

using namespace epicut;
using namespace epicut::testing;

TEST_CASE("hand-built two-node interdiction block") {
  // one interdictable arc with r=1, q=0: installing the sensor zeroes the
  // evasion probability, so with budget 1 the optimum is 0
  BlockDiagonalProblem p;
  p.c = {0.0};
  p.first_stage.n = 1;
  p.first_stage.card_sense = RowSense::LE;
  p.first_stage.card_rhs = 1;
  Block blk;
  blk.index = 0;
  blk.num_y = 2;  // pi_0, pi_1
  blk.d = {1.0, 0.0};
  BlockRow interdicted;  // pi_0 - r pi_1 + (r-q) pibar_1 x >= 0, r=1, q=0
  interdicted.t_index = {0};
  interdicted.t_value = {1.0};
  interdicted.w_index = {0, 1};
  interdicted.w_value = {1.0, -1.0};
  interdicted.sense = RowSense::GE;
  blk.rows.push_back(interdicted);
  BlockRow qrow;  // pi_0 - q pi_1 >= 0
  qrow.w_index = {0};
  qrow.w_value = {1.0};
  qrow.sense = RowSense::GE;
  blk.rows.push_back(qrow);
  BlockRow fix;  // pi_1 = 1
  fix.w_index = {1};
  fix.w_value = {1.0};
  fix.sense = RowSense::EQ;
  fix.rhs = 1.0;
  blk.rows.push_back(fix);
  p.blocks.push_back(blk);

  const LPSolution sol = solve_lp(build_extensive(p).lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.x[0] == doctest::Approx(1.0));
  // without budget the attacker walks through undetected
  p.first_stage.card_rhs = 0;
  CHECK(solve_lp(build_extensive(p).lp).objective == doctest::Approx(1.0));
}

TEST_CASE("snip desk instance is well-formed and deterministic") {
  const SnipParams params;
  BlockDiagonalProblem p = gen_snip(params, 31);
  CHECK(validate(p).empty());
  CHECK(p.num_blocks() == params.scenarios);
  CHECK(fingerprint(p) == fingerprint(gen_snip(params, 31)));
  CHECK(fingerprint(p) != fingerprint(gen_snip(params, 32)));
  const LPSolution sol = solve_lp(build_extensive(p).lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective >= -1e-9);
}

TEST_CASE("snip blocks have relatively complete recourse on R(X)") {
  SnipParams params;
  params.scenarios = 4;
  BlockDiagonalProblem p = gen_snip(params, 7);
  Rng rng(40);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> x(p.n());
    for (double& v : x) v = rng.uniform();  // any box point works for SNIP
    for (int k = 0; k < p.num_blocks(); ++k) CHECK(block_value_at(p, k, x) < kInf);
  }
}

TEST_CASE("single-segment assortment block matches subset enumeration") {
  // two products, equal attractiveness and profit; consideration set is all
  const double lambda = 0.8, v0 = 1.5, v = 3.0, w = 120.0;
  BlockDiagonalProblem p;
  p.c = {0.0, 0.0};
  p.first_stage.n = 2;
  p.first_stage.card_sense = RowSense::LE;
  p.first_stage.card_rhs = 2;
  Block blk;
  blk.index = 0;
  blk.num_y = 3;  // y, z_0, z_1
  blk.d = {0.0, -lambda * v * w, -lambda * v * w};
  BlockRow norm;
  norm.w_index = {0, 1, 2};
  norm.w_value = {v0, v, v};
  norm.sense = RowSense::EQ;
  norm.rhs = 1.0;
  blk.rows.push_back(norm);
  for (int i = 0; i < 2; ++i) {
    BlockRow no_buy;
    no_buy.t_index = {i};
    no_buy.t_value = {1.0};
    no_buy.w_index = {0, 1 + i};
    no_buy.w_value = {v0, -v0};
    no_buy.sense = RowSense::LE;
    no_buy.rhs = 1.0;
    blk.rows.push_back(no_buy);
    BlockRow link;
    link.w_index = {1 + i, 0};
    link.w_value = {1.0, -1.0};
    link.sense = RowSense::LE;
    blk.rows.push_back(link);
    BlockRow cap;
    cap.t_index = {i};
    cap.t_value = {-1.0};
    cap.w_index = {1 + i};
    cap.w_value = {v0 + v};
    cap.sense = RowSense::LE;
    blk.rows.push_back(cap);
  }
  p.blocks.push_back(blk);

  double best = 0.0;  // enumerate the four assortments
  for (int mask = 0; mask < 4; ++mask) {
    const int size = (mask & 1) + ((mask >> 1) & 1);
    best = std::max(best, lambda * v * w * size / (v0 + v * size));
  }
  const LPSolution sol = solve_lp(build_extensive(p).lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(-sol.objective == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("lla desk instance structure and parameter ranges") {
  const LlaParams params;
  BlockDiagonalProblem p = gen_lla(params, 17);
  CHECK(validate(p).empty());
  CHECK(fingerprint(p) == fingerprint(gen_lla(params, 17)));
  for (const Block& blk : p.blocks) {
    std::vector<char> touched(p.n(), 0);
    for (const BlockRow& row : blk.rows)
      for (int idx : row.t_index) touched[idx] = 1;
    int count = 0;
    for (char c : touched) count += c;
    CHECK(count <= params.consideration);
  }
  // draw ranges, over several seeds for > 1000 samples
  int samples = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    BlockDiagonalProblem q = gen_lla(params, seed);
    for (const Block& blk : q.blocks) {
      const BlockRow& norm = blk.rows[0];
      const double v0 = norm.w_value[0];
      CHECK(v0 >= 0.0);
      CHECK(v0 <= 4.0);
      ++samples;
      for (size_t t = 1; t < norm.w_value.size(); ++t) {
        const double v = norm.w_value[t];
        CHECK(v == std::round(v));
        CHECK(v >= 0.0);
        CHECK(v <= 10.0);
        ++samples;
        if (v > 0) {
          const double lw = -blk.d[t] / v;  // lambda * w_i
          CHECK(lw >= 0.0);
          CHECK(lw <= params.profit_cap);
          ++samples;
        }
      }
    }
  }
  CHECK(samples > 1000);
}

TEST_CASE("cap one-facility analytic optimum") {
  CapParams params;
  params.facilities = 1;
  params.customers = 1;
  params.scenarios = 1;
  BlockDiagonalProblem p = gen_cap(params, 5);
  REQUIRE(validate(p).empty());
  const double f = p.c[0];
  const double lambda = p.blocks[0].rows[0].rhs;
  double q = p.blocks[0].d[0];  // already divided by N == 1
  // binary optimum: x=0 fails the cover row, so x=1 and the flow costs q*lambda
  const auto points = enumerate_first_stage(p);
  REQUIRE(points.size() == 1);
  CHECK(points[0][0] == 1.0);
  const double value = f + block_value_at(p, 0, points[0]);
  CHECK(value == doctest::Approx(f + q * lambda));
}

TEST_CASE("cap desk instance validates and is deterministic") {
  const CapParams params;
  BlockDiagonalProblem p = gen_cap(params, 99);
  CHECK(validate(p).empty());
  CHECK(fingerprint(p) == fingerprint(gen_cap(params, 99)));
  CHECK(fingerprint(p) != fingerprint(gen_cap(params, 100)));
  // capacity cover keeps every scenario feasible at any cover-feasible x
  const auto points = enumerate_first_stage(p);
  REQUIRE(!points.empty());
  for (int k = 0; k < 2; ++k) CHECK(block_value_at(p, k, points.front()) < kInf);
}

TEST_CASE("fractional epigraph equals the fraction at binary points") {
  Rng rng(8);
  std::vector<double> a(6), c(6);
  for (double& v : a) v = rng.uniform(0.0, 5.0);
  for (double& v : c) v = rng.uniform(0.0, 3.0);
  const double b = rng.uniform(0.5, 4.0), d = rng.uniform(0.5, 2.0);
  FractionalFixture fx = fractional_epigraph(a, b, c, d);
  REQUIRE(validate(fx.problem).empty());

  std::vector<double> x(6, 0.0);
  CHECK(block_value_at(fx.problem, 0, x) == doctest::Approx(b / d).epsilon(1e-8));
  std::fill(x.begin(), x.end(), 1.0);
  CHECK(block_value_at(fx.problem, 0, x) == doctest::Approx(fx.fraction_at(x)).epsilon(1e-8));

  for (int rep = 0; rep < 100; ++rep) {
    for (double& v : x) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
    const double lp_value = block_value_at(fx.problem, 0, x);
    CHECK(lp_value == doctest::Approx(fx.fraction_at(x)).epsilon(1e-8));
  }
}

TEST_CASE("instance files round-trip losslessly") {
  const BlockDiagonalProblem instances[] = {
      gen_snip(SnipParams{}, 3),
      gen_lla(LlaParams{}, 3),
      gen_cap(CapParams{}, 3),
  };
  for (const BlockDiagonalProblem& p : instances) {
    std::ostringstream out;
    write_instance(p, out);
    std::istringstream in(out.str());
    const BlockDiagonalProblem q = read_instance(in);
    CHECK(fingerprint(p) == fingerprint(q));
    std::ostringstream out2;
    write_instance(q, out2);
    CHECK(out.str() == out2.str());
  }
}

TEST_CASE("truncated and malformed files raise parse errors") {
  std::ostringstream out;
  write_instance(gen_cap(CapParams{1, 2, 1}, 4), out);
  const std::string text = out.str();
  std::istringstream truncated(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(read_instance(truncated), ParseError);
  std::istringstream garbage("BDZ1 x y\n");
  CHECK_THROWS_AS(read_instance(garbage), ParseError);
  std::istringstream wrong_magic("BDZ9 1 1\n");
  CHECK_THROWS_AS(read_instance(wrong_magic), ParseError);
}

TEST_CASE("hand-written instance parses to the expected matrices") {
  const char* text = R"(# tiny fixture
BDZ1 2 1
COST 1.5 -2
CARD LE 1
XROW GE 0.5 2 0 1 1 1
BLOCK 0 1 1
OBJ 3
ROW GE 1 1 0 1 1 0 1
END
)";
  std::istringstream in(text);
  const BlockDiagonalProblem p = read_instance(in);
  CHECK(p.n() == 2);
  CHECK(p.c == std::vector<double>{1.5, -2.0});
  CHECK(p.first_stage.card_rhs == 1);
  REQUIRE(p.first_stage.extra_rows.size() == 1);
  CHECK(p.first_stage.extra_rows[0].rhs == 0.5);
  REQUIRE(p.blocks.size() == 1);
  const Block& blk = p.blocks[0];
  CHECK(blk.d == std::vector<double>{3.0});
  REQUIRE(blk.rows.size() == 1);
  CHECK(blk.rows[0].t_index == std::vector<int>{0});
  CHECK(blk.rows[0].t_value == std::vector<double>{1.0});
  CHECK(blk.rows[0].w_index == std::vector<int>{0});
  CHECK(blk.rows[0].w_value == std::vector<double>{1.0});
  CHECK(blk.rows[0].sense == RowSense::GE);
}
