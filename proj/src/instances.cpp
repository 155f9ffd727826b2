#include "epicut/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "epicut/rng.hpp"

namespace epicut {

namespace {

std::vector<int> sample_without_replacement(Rng& rng, std::vector<int> pool, int k) {
  for (int i = 0; i < k; ++i) {
    const int j = static_cast<int>(rng.uniform_int(i, static_cast<int>(pool.size()) - 1));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

// ---------------------------------------------------------------- SNIP ----

namespace {

struct SnipNetwork {
  int nodes = 0;
  std::vector<std::pair<int, int>> arcs;
  std::vector<int> layer_of;
};

SnipNetwork make_layered_dag(const SnipParams& params, Rng& rng) {
  SnipNetwork net;
  net.nodes = params.nodes;
  const int layers = std::max(3, std::min(6, params.nodes / 3));
  net.layer_of.resize(params.nodes);
  for (int v = 0; v < params.nodes; ++v)
    net.layer_of[v] = static_cast<int>(static_cast<std::int64_t>(v) * layers / params.nodes);

  auto has_arc = [&](int u, int v) {
    return std::find(net.arcs.begin(), net.arcs.end(), std::make_pair(u, v)) != net.arcs.end();
  };
  std::vector<std::vector<int>> in_layer(layers);
  for (int v = 0; v < params.nodes; ++v) in_layer[net.layer_of[v]].push_back(v);

  // spine: every node reaches the next layer and is reached from the previous
  for (int v = 0; v < params.nodes; ++v) {
    const int t = net.layer_of[v];
    if (t + 1 < layers) {
      const auto& next = in_layer[t + 1];
      const int w = next[rng.uniform_int(0, static_cast<int>(next.size()) - 1)];
      if (!has_arc(v, w)) net.arcs.emplace_back(v, w);
    }
    if (t > 0) {
      const auto& prev = in_layer[t - 1];
      const int u = prev[rng.uniform_int(0, static_cast<int>(prev.size()) - 1)];
      if (!has_arc(u, v)) net.arcs.emplace_back(u, v);
    }
  }
  int attempts = 0;
  while (static_cast<int>(net.arcs.size()) < params.arcs && attempts < 50 * params.arcs) {
    ++attempts;
    const int u = static_cast<int>(rng.uniform_int(0, params.nodes - 1));
    const int v = static_cast<int>(rng.uniform_int(0, params.nodes - 1));
    if (net.layer_of[u] >= net.layer_of[v]) continue;
    if (!has_arc(u, v)) net.arcs.emplace_back(u, v);
  }
  return net;
}

bool reaches(const SnipNetwork& net, int from, int to) {
  std::vector<char> seen(net.nodes, 0);
  std::vector<int> stack = {from};
  seen[from] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    for (const auto& [a, b] : net.arcs)
      if (a == u && !seen[b]) { seen[b] = 1; stack.push_back(b); }
  }
  return false;
}

}  // namespace

BlockDiagonalProblem gen_snip(const SnipParams& params, std::uint64_t seed) {
  if (params.nodes < 3 || params.arcs < 2 || params.scenarios < 1 || params.interdictable < 1 ||
      params.budget < 0)
    throw std::invalid_argument("gen_snip: sizes must be positive");
  Rng rng(seed);
  for (int regen = 0; regen < 10; ++regen) {
    SnipNetwork net = make_layered_dag(params, rng);
    const int num_arcs = static_cast<int>(net.arcs.size());
    const int last_layer = *std::max_element(net.layer_of.begin(), net.layer_of.end());

    std::vector<int> arc_ids(num_arcs);
    std::iota(arc_ids.begin(), arc_ids.end(), 0);
    const int nd = std::min(params.interdictable, num_arcs);
    std::vector<int> interdictable = sample_without_replacement(rng, arc_ids, nd);
    std::vector<int> sensor_col(num_arcs, -1);
    for (int t = 0; t < nd; ++t) sensor_col[interdictable[t]] = t;

    std::vector<double> r(num_arcs), q(num_arcs);
    for (int a = 0; a < num_arcs; ++a) {
      r[a] = rng.uniform(0.4, 0.95);
      q[a] = r[a] * rng.uniform(0.1, 0.5);
    }

    std::vector<int> sources, sinks;
    for (int v = 0; v < params.nodes; ++v) {
      if (net.layer_of[v] == 0) sources.push_back(v);
      if (net.layer_of[v] == last_layer) sinks.push_back(v);
    }
    std::vector<int> origin(params.scenarios), dest(params.scenarios);
    bool ok = true;
    for (int s = 0; s < params.scenarios && ok; ++s) {
      bool found = false;
      for (int tries = 0; tries < 50 && !found; ++tries) {
        const int u = sources[rng.uniform_int(0, static_cast<int>(sources.size()) - 1)];
        const int v = sinks[rng.uniform_int(0, static_cast<int>(sinks.size()) - 1)];
        if (!reaches(net, u, v)) continue;
        origin[s] = u;
        dest[s] = v;
        found = true;
      }
      ok = found;
    }
    if (!ok) continue;  // regenerate arcs

    BlockDiagonalProblem problem;
    problem.c.assign(nd, 0.0);
    problem.first_stage.n = nd;
    problem.first_stage.card_sense = RowSense::LE;
    problem.first_stage.card_rhs = std::min(params.budget, nd);

    // no-sensor reachability probabilities per scenario, reverse layer order
    std::vector<int> order(params.nodes);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return net.layer_of[a] > net.layer_of[b]; });

    for (int s = 0; s < params.scenarios; ++s) {
      std::vector<double> pibar(params.nodes, 0.0);
      pibar[dest[s]] = 1.0;
      for (int u : order) {
        if (u == dest[s]) continue;
        double best = 0.0;
        for (int a = 0; a < num_arcs; ++a)
          if (net.arcs[a].first == u) best = std::max(best, r[a] * pibar[net.arcs[a].second]);
        pibar[u] = best;
      }
      Block blk;
      blk.index = s;
      blk.num_y = params.nodes;
      blk.d.assign(params.nodes, 0.0);
      blk.d[origin[s]] = 1.0 / params.scenarios;
      for (int a = 0; a < num_arcs; ++a) {
        const auto [i, j] = net.arcs[a];
        BlockRow row;
        row.w_index = {i, j};
        row.w_value = {1.0, -r[a]};
        row.sense = RowSense::GE;
        row.rhs = 0.0;
        if (sensor_col[a] >= 0) {
          row.t_index = {sensor_col[a]};
          row.t_value = {(r[a] - q[a]) * pibar[j]};
          blk.rows.push_back(row);
          BlockRow qrow;
          qrow.w_index = {i, j};
          qrow.w_value = {1.0, -q[a]};
          qrow.sense = RowSense::GE;
          qrow.rhs = 0.0;
          blk.rows.push_back(std::move(qrow));
        } else {
          blk.rows.push_back(std::move(row));
        }
      }
      BlockRow fix;
      fix.w_index = {dest[s]};
      fix.w_value = {1.0};
      fix.sense = RowSense::EQ;
      fix.rhs = 1.0;
      blk.rows.push_back(std::move(fix));
      problem.blocks.push_back(std::move(blk));
    }
    return problem;
  }
  throw std::runtime_error("gen_snip: could not generate a connected network");
}

// ----------------------------------------------------------------- LLA ----

BlockDiagonalProblem gen_lla(const LlaParams& params, std::uint64_t seed) {
  if (params.consideration % 2 != 0) throw std::invalid_argument("gen_lla: consideration size must be even");
  if (params.consideration > params.n) throw std::invalid_argument("gen_lla: consideration size exceeds n");
  if (params.n < 1 || params.segments < 1) throw std::invalid_argument("gen_lla: sizes must be positive");
  Rng rng(seed);
  const int n = params.n;

  std::vector<double> w(n);
  for (double& v : w) v = rng.uniform(100.0, params.profit_cap);

  BlockDiagonalProblem problem;
  problem.c.assign(n, 0.0);
  problem.first_stage.n = n;
  problem.first_stage.card_sense = RowSense::LE;
  problem.first_stage.card_rhs =
      std::max(1, static_cast<int>(std::floor(params.capacity_frac * n)));

  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> prev_set;
  for (int k1 = 1; k1 <= params.segments; ++k1) {
    const double lambda = rng.uniform(0.0, 1.0);
    const double v0 = rng.uniform(0.0, 4.0);
    std::vector<int> ck;
    if (k1 % 2 == 1) {
      ck = sample_without_replacement(rng, all, params.consideration);
    } else {
      ck = sample_without_replacement(rng, prev_set, params.consideration / 2);
    }
    prev_set = ck;
    const int sz = static_cast<int>(ck.size());
    std::vector<double> v(sz);
    for (double& val : v) val = static_cast<double>(rng.uniform_int(0, 10));

    Block blk;
    blk.index = k1 - 1;
    blk.num_y = 1 + sz;  // y_k then z_i in ck order
    blk.d.assign(blk.num_y, 0.0);
    for (int t = 0; t < sz; ++t) blk.d[1 + t] = -lambda * v[t] * w[ck[t]];

    BlockRow norm;  // v0 y + sum v_i z_i = 1
    norm.w_index.push_back(0);
    norm.w_value.push_back(v0);
    for (int t = 0; t < sz; ++t) {
      norm.w_index.push_back(1 + t);
      norm.w_value.push_back(v[t]);
    }
    norm.sense = RowSense::EQ;
    norm.rhs = 1.0;
    blk.rows.push_back(std::move(norm));

    for (int t = 0; t < sz; ++t) {
      BlockRow no_buy;  // v0 y - v0 z_i + x_i <= 1
      no_buy.t_index = {ck[t]};
      no_buy.t_value = {1.0};
      no_buy.w_index = {0, 1 + t};
      no_buy.w_value = {v0, -v0};
      no_buy.sense = RowSense::LE;
      no_buy.rhs = 1.0;
      blk.rows.push_back(std::move(no_buy));

      BlockRow link;  // z_i <= y
      link.w_index = {1 + t, 0};
      link.w_value = {1.0, -1.0};
      link.sense = RowSense::LE;
      link.rhs = 0.0;
      blk.rows.push_back(std::move(link));

      BlockRow cap;  // (v0 + v_i) z_i - x_i <= 0
      cap.t_index = {ck[t]};
      cap.t_value = {-1.0};
      cap.w_index = {1 + t};
      cap.w_value = {v0 + v[t]};
      cap.sense = RowSense::LE;
      cap.rhs = 0.0;
      blk.rows.push_back(std::move(cap));
    }
    problem.blocks.push_back(std::move(blk));
  }
  return problem;
}

// ----------------------------------------------------------------- CAP ----

BlockDiagonalProblem gen_cap(const CapParams& params, std::uint64_t seed) {
  if (params.facilities < 1 || params.customers < 1 || params.scenarios < 1)
    throw std::invalid_argument("gen_cap: sizes must be positive");
  Rng rng(seed);
  const int n = params.facilities, m = params.customers, N = params.scenarios;

  std::vector<double> f(n), s(n);
  for (int i = 0; i < n; ++i) f[i] = rng.uniform(100.0, 200.0);
  for (int i = 0; i < n; ++i) s[i] = rng.uniform(30.0, 90.0);
  std::vector<double> q(static_cast<size_t>(n) * m);
  for (double& v : q) v = rng.uniform(5.0, 15.0);
  std::vector<std::vector<double>> lambda(N, std::vector<double>(m));
  double max_demand = 0.0;
  for (int k = 0; k < N; ++k) {
    double tot = 0.0;
    for (int j = 0; j < m; ++j) {
      lambda[k][j] = rng.uniform(2.0, 12.0);
      tot += lambda[k][j];
    }
    max_demand = std::max(max_demand, tot);
  }
  const double cap_total = std::accumulate(s.begin(), s.end(), 0.0);
  if (cap_total < max_demand) {
    const double scale = 1.05 * max_demand / cap_total;
    for (double& v : s) v *= scale;
  }

  BlockDiagonalProblem problem;
  problem.c = f;
  problem.first_stage.n = n;
  problem.first_stage.card_sense = RowSense::LE;
  problem.first_stage.card_rhs = n;  // vacuous; the cover row below binds
  SparseRow cover;
  for (int i = 0; i < n; ++i) cover.push(i, s[i]);
  cover.sense = RowSense::GE;
  cover.rhs = max_demand;
  problem.first_stage.extra_rows.push_back(std::move(cover));

  for (int k = 0; k < N; ++k) {
    Block blk;
    blk.index = k;
    blk.num_y = n * m;  // y_{ij} at i*m + j
    blk.d.assign(blk.num_y, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) blk.d[i * m + j] = q[static_cast<size_t>(i) * m + j] / N;
    for (int j = 0; j < m; ++j) {
      BlockRow demand;  // sum_i y_ij >= lambda_j^k
      for (int i = 0; i < n; ++i) {
        demand.w_index.push_back(i * m + j);
        demand.w_value.push_back(1.0);
      }
      demand.sense = RowSense::GE;
      demand.rhs = lambda[k][j];
      blk.rows.push_back(std::move(demand));
    }
    for (int i = 0; i < n; ++i) {
      BlockRow capacity;  // sum_j y_ij - s_i x_i <= 0
      capacity.t_index = {i};
      capacity.t_value = {-s[i]};
      for (int j = 0; j < m; ++j) {
        capacity.w_index.push_back(i * m + j);
        capacity.w_value.push_back(1.0);
      }
      capacity.sense = RowSense::LE;
      capacity.rhs = 0.0;
      blk.rows.push_back(std::move(capacity));
    }
    problem.blocks.push_back(std::move(blk));
  }
  return problem;
}

// -------------------------------------------------- fractional fixture ----

double FractionalFixture::fraction_at(std::span<const double> x) const {
  double num = b, den = d;
  for (size_t i = 0; i < a.size(); ++i) {
    num += a[i] * x[i];
    den += c[i] * x[i];
  }
  return num / den;
}

FractionalFixture fractional_epigraph(std::vector<double> a, double b, std::vector<double> c, double d) {
  if (a.size() != c.size()) throw std::invalid_argument("fractional_epigraph: a/c size mismatch");
  if (d <= 0.0) throw std::invalid_argument("fractional_epigraph: d must be positive");
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] < 0.0 || c[i] < 0.0) throw std::invalid_argument("fractional_epigraph: a, c must be nonnegative");
  const int n = static_cast<int>(a.size());

  FractionalFixture fx;
  fx.a = a;
  fx.c = c;
  fx.b = b;
  fx.d = d;
  fx.problem.c.assign(n, 0.0);
  fx.problem.first_stage.n = n;
  fx.problem.first_stage.card_sense = RowSense::LE;
  fx.problem.first_stage.card_rhs = n;

  Block blk;
  blk.index = 0;
  blk.num_y = n + 1;  // y at 0, z_i at 1 + i
  blk.d.assign(blk.num_y, 0.0);
  blk.d[0] = b;
  for (int i = 0; i < n; ++i) blk.d[1 + i] = a[i];

  for (int i = 0; i < n; ++i) {
    BlockRow zy;  // z_i - y <= 0
    zy.w_index = {1 + i, 0};
    zy.w_value = {1.0, -1.0};
    zy.sense = RowSense::LE;
    zy.rhs = 0.0;
    blk.rows.push_back(std::move(zy));

    BlockRow zx;  // (c_i + d) z_i - x_i <= 0
    zx.t_index = {i};
    zx.t_value = {-1.0};
    zx.w_index = {1 + i};
    zx.w_value = {c[i] + d};
    zx.sense = RowSense::LE;
    zx.rhs = 0.0;
    blk.rows.push_back(std::move(zx));

    BlockRow yz;  // d(y - z_i) + x_i <= 1
    yz.t_index = {i};
    yz.t_value = {1.0};
    yz.w_index = {0, 1 + i};
    yz.w_value = {d, -d};
    yz.sense = RowSense::LE;
    yz.rhs = 1.0;
    blk.rows.push_back(std::move(yz));
  }
  BlockRow norm;  // c^T z + d y = 1
  norm.w_index.push_back(0);
  norm.w_value.push_back(d);
  for (int i = 0; i < n; ++i) {
    norm.w_index.push_back(1 + i);
    norm.w_value.push_back(c[i]);
  }
  norm.sense = RowSense::EQ;
  norm.rhs = 1.0;
  blk.rows.push_back(std::move(norm));
  fx.problem.blocks.push_back(std::move(blk));
  return fx;
}

// --------------------------------------------------------- file format ----

namespace {

const char* sense_token(RowSense s) {
  switch (s) {
    case RowSense::LE: return "LE";
    case RowSense::EQ: return "EQ";
    case RowSense::GE: return "GE";
  }
  return "LE";
}

RowSense parse_sense(const std::string& tok, int line) {
  if (tok == "LE") return RowSense::LE;
  if (tok == "EQ") return RowSense::EQ;
  if (tok == "GE") return RowSense::GE;
  throw ParseError(line, "unknown sense '" + tok + "'");
}

void put_double(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

void write_instance(const BlockDiagonalProblem& problem, std::ostream& out) {
  const int n = problem.n();
  out << "BDZ1 " << n << ' ' << problem.num_blocks() << '\n';
  out << "COST";
  for (double v : problem.c) { out << ' '; put_double(out, v); }
  out << '\n';
  out << "CARD " << sense_token(problem.first_stage.card_sense) << ' '
      << problem.first_stage.card_rhs << '\n';
  for (const SparseRow& row : problem.first_stage.extra_rows) {
    out << "XROW " << sense_token(row.sense) << ' ';
    put_double(out, row.rhs);
    out << ' ' << row.index.size();
    for (size_t t = 0; t < row.index.size(); ++t) {
      out << ' ' << row.index[t] << ' ';
      put_double(out, row.value[t]);
    }
    out << '\n';
  }
  for (const Block& blk : problem.blocks) {
    out << "BLOCK " << blk.index << ' ' << blk.num_y << ' ' << blk.rows.size() << '\n';
    out << "OBJ";
    for (double v : blk.d) { out << ' '; put_double(out, v); }
    out << '\n';
    for (const BlockRow& row : blk.rows) {
      out << "ROW " << sense_token(row.sense) << ' ';
      put_double(out, row.rhs);
      out << ' ' << row.t_index.size();
      for (size_t t = 0; t < row.t_index.size(); ++t) {
        out << ' ' << row.t_index[t] << ' ';
        put_double(out, row.t_value[t]);
      }
      out << ' ' << row.w_index.size();
      for (size_t t = 0; t < row.w_index.size(); ++t) {
        out << ' ' << row.w_index[t] << ' ';
        put_double(out, row.w_value[t]);
      }
      out << '\n';
    }
  }
  out << "END\n";
}

void write_instance(const BlockDiagonalProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_instance(problem, out);
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // next non-comment, non-blank line split into tokens
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      tokens.clear();
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      return true;
    }
    return false;
  }
  int line() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

int to_int(const std::string& tok, int line) {
  try {
    size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw ParseError(line, "expected integer, got '" + tok + "'");
  }
}

double to_double(const std::string& tok, int line) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw ParseError(line, "expected number, got '" + tok + "'");
  }
}

}  // namespace

BlockDiagonalProblem read_instance(std::istream& in) {
  LineReader reader(in);
  std::vector<std::string> tok;
  if (!reader.next(tok)) throw ParseError(reader.line(), "empty file");
  if (tok.size() != 3 || tok[0] != "BDZ1") throw ParseError(reader.line(), "expected 'BDZ1 n N' header");
  BlockDiagonalProblem problem;
  const int n = to_int(tok[1], reader.line());
  const int nblocks = to_int(tok[2], reader.line());
  problem.first_stage.n = n;

  if (!reader.next(tok) || tok.empty() || tok[0] != "COST")
    throw ParseError(reader.line(), "expected COST line");
  if (static_cast<int>(tok.size()) != n + 1) throw ParseError(reader.line(), "COST needs n values");
  for (int j = 0; j < n; ++j) problem.c.push_back(to_double(tok[1 + j], reader.line()));

  if (!reader.next(tok) || tok.size() != 3 || tok[0] != "CARD")
    throw ParseError(reader.line(), "expected 'CARD sense rhs'");
  problem.first_stage.card_sense = parse_sense(tok[1], reader.line());
  problem.first_stage.card_rhs = to_int(tok[2], reader.line());

  bool saw_end = false;
  while (reader.next(tok)) {
    if (tok[0] == "END") { saw_end = true; break; }
    if (tok[0] == "XROW") {
      if (tok.size() < 4) throw ParseError(reader.line(), "truncated XROW");
      SparseRow row;
      row.sense = parse_sense(tok[1], reader.line());
      row.rhs = to_double(tok[2], reader.line());
      const int nnz = to_int(tok[3], reader.line());
      if (static_cast<int>(tok.size()) != 4 + 2 * nnz) throw ParseError(reader.line(), "XROW nnz mismatch");
      for (int t = 0; t < nnz; ++t)
        row.push(to_int(tok[4 + 2 * t], reader.line()), to_double(tok[5 + 2 * t], reader.line()));
      problem.first_stage.extra_rows.push_back(std::move(row));
    } else if (tok[0] == "BLOCK") {
      if (tok.size() != 4) throw ParseError(reader.line(), "expected 'BLOCK k num_y num_rows'");
      Block blk;
      blk.index = to_int(tok[1], reader.line());
      blk.num_y = to_int(tok[2], reader.line());
      const int nrows = to_int(tok[3], reader.line());
      if (!reader.next(tok) || tok.empty() || tok[0] != "OBJ")
        throw ParseError(reader.line(), "expected OBJ line");
      if (static_cast<int>(tok.size()) != blk.num_y + 1)
        throw ParseError(reader.line(), "OBJ needs num_y values");
      for (int j = 0; j < blk.num_y; ++j) blk.d.push_back(to_double(tok[1 + j], reader.line()));
      for (int r = 0; r < nrows; ++r) {
        if (!reader.next(tok) || tok.empty() || tok[0] != "ROW")
          throw ParseError(reader.line(), "expected ROW line");
        if (tok.size() < 4) throw ParseError(reader.line(), "truncated ROW");
        BlockRow row;
        row.sense = parse_sense(tok[1], reader.line());
        row.rhs = to_double(tok[2], reader.line());
        size_t p = 3;
        const int nnz_t = to_int(tok[p++], reader.line());
        if (tok.size() < p + 2 * nnz_t + 1) throw ParseError(reader.line(), "truncated ROW T entries");
        for (int t = 0; t < nnz_t; ++t) {
          row.t_index.push_back(to_int(tok[p], reader.line()));
          row.t_value.push_back(to_double(tok[p + 1], reader.line()));
          p += 2;
        }
        const int nnz_w = to_int(tok[p++], reader.line());
        if (tok.size() != p + 2 * nnz_w) throw ParseError(reader.line(), "truncated ROW W entries");
        for (int t = 0; t < nnz_w; ++t) {
          row.w_index.push_back(to_int(tok[p], reader.line()));
          row.w_value.push_back(to_double(tok[p + 1], reader.line()));
          p += 2;
        }
        blk.rows.push_back(std::move(row));
      }
      problem.blocks.push_back(std::move(blk));
    } else {
      throw ParseError(reader.line(), "unknown record '" + tok[0] + "'");
    }
  }
  if (!saw_end) throw ParseError(reader.line(), "missing END (truncated file?)");
  if (problem.num_blocks() != nblocks)
    throw ParseError(reader.line(), "header promised " + std::to_string(nblocks) + " blocks, found " +
                                        std::to_string(problem.num_blocks()));
  return problem;
}

BlockDiagonalProblem read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_instance(in);
}

std::uint64_t fingerprint(const BlockDiagonalProblem& problem) {
  std::ostringstream ss;
  write_instance(problem, ss);
  const std::string text = ss.str();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace epicut
