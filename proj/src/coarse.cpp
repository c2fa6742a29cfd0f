#include "gpdt/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "gpdt/algebra.hpp"
#include "gpdt/spectral.hpp"

namespace gpdt {

FiniteGraph FiniteGraph::create(std::size_t n,
                                std::vector<std::pair<int, int>> edges) {
  for (auto& [a, b] : edges)
    if (a > b) std::swap(a, b);
  std::sort(edges.begin(), edges.end());
  SimpleGraph s{n, edges};
  // reuse the coarse builder validation (simple, connected)
  build_coarse_truncation({s});
  FiniteGraph g;
  g.n = n;
  g.edges = std::move(edges);
  std::vector<std::size_t> deg(n, 0);
  for (auto [a, b] : g.edges) {
    ++deg[a];
    ++deg[b];
  }
  g.max_degree = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  return g;
}

Matrix graph_laplacian(const FiniteGraph& g) {
  Matrix m(g.n, g.n);
  for (auto [a, b] : g.edges) {
    m(a, a) += 1.0;
    m(b, b) += 1.0;
    m(a, b) -= 1.0;
    m(b, a) -= 1.0;
  }
  return m;
}

std::vector<std::vector<int>> edge_color(const FiniteGraph& g) {
  std::vector<std::vector<int>> vertex_colors(g.n);
  std::vector<int> color_of(g.edges.size(), -1);
  int max_color = -1;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [a, b] = g.edges[e];
    int c = 0;
    auto taken = [&](int col) {
      const auto& ca = vertex_colors[a];
      const auto& cb = vertex_colors[b];
      return std::find(ca.begin(), ca.end(), col) != ca.end() ||
             std::find(cb.begin(), cb.end(), col) != cb.end();
    };
    while (taken(c)) ++c;
    color_of[e] = c;
    vertex_colors[a].push_back(c);
    vertex_colors[b].push_back(c);
    max_color = std::max(max_color, c);
  }
  std::vector<std::vector<int>> matchings(max_color + 1);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    matchings[color_of[e]].push_back(static_cast<int>(e));
  return matchings;
}

namespace {

// Exact integer coefficients over the pair groupoid, for the decomposition
// identity check.
using IntElement = std::map<int, long long>;

IntElement int_convolve(const FiniteGroupoid& g, const IntElement& f1,
                        const IntElement& f2) {
  IntElement out;
  for (const auto& [h, c1] : f1)
    for (int k : g.range_fiber(g.source(h))) {
      auto it = f2.find(k);
      if (it == f2.end()) continue;
      int hk = g.compose(h, k);
      long long v = c1 * it->second;
      auto [pos, inserted] = out.try_emplace(hk, v);
      if (!inserted) pos->second += v;
      if (pos->second == 0) out.erase(pos);
    }
  return out;
}

IntElement int_adjoint(const FiniteGroupoid& g, const IntElement& f) {
  IntElement out;
  for (const auto& [a, c] : f) out[g.inverse(a)] = c;
  return out;
}

IntElement int_psi(const FiniteGroupoid& g, const IntElement& f) {
  IntElement out;
  for (const auto& [a, c] : f) {
    int u = g.range(a);
    out[u] += c;
    if (out[u] == 0) out.erase(u);
  }
  return out;
}

IntElement int_sub(IntElement a, const IntElement& b) {
  for (const auto& [k, v] : b) {
    a[k] -= v;
    if (a[k] == 0) a.erase(k);
  }
  return a;
}

}  // namespace

LaplacianDecomposition laplacian_decomposition(const FiniteGraph& g) {
  CoarseBuild cb = build_coarse_truncation({g.as_simple()});
  const GroupoidPtr& gpd = cb.groupoid;
  auto arrow_of = [&](int i, int j) {
    std::string lab = padded_index(1, 2) + ":(" + padded_index(i, g.n) + "," +
                      padded_index(j, g.n) + ")";
    int a = gpd->index_of(lab);
    if (a < 0) throw Error("laplacian_decomposition: missing arrow " + lab);
    return a;
  };

  std::vector<std::vector<int>> matchings = edge_color(g);
  LaplacianDecomposition out;
  out.pair_groupoid = gpd;
  out.matchings = matchings.size();

  IntElement total;
  for (const auto& matching : matchings) {
    IntElement v;
    AlgebraElement vf(gpd);
    for (int e : matching) {
      auto [a, b] = g.edges[e];  // a < b: lower vertex is the source
      int arr = arrow_of(b, a);
      v[arr] = 1;
      vf.set(arr, 1.0);
    }
    out.isometries.push_back(vf);
    IntElement vv = int_convolve(*gpd, v, int_adjoint(*gpd, v));
    if (int_sub(vv, int_psi(*gpd, v)) != IntElement{})
      throw Error("laplacian_decomposition: v v* != Psi(v)");
    IntElement d = int_sub(vv, v);  // v v* - v
    IntElement term = int_convolve(*gpd, int_adjoint(*gpd, d), d);
    for (const auto& [k, val] : term) {
      total[k] += val;
      if (total[k] == 0) total.erase(k);
    }
  }

  // graph Laplacian lifted to the pair-groupoid algebra
  IntElement lap;
  std::vector<long long> deg(g.n, 0);
  for (auto [a, b] : g.edges) {
    ++deg[a];
    ++deg[b];
    lap[arrow_of(a, b)] -= 1;
    lap[arrow_of(b, a)] -= 1;
  }
  for (std::size_t i = 0; i < g.n; ++i)
    if (deg[i] != 0) lap[arrow_of(static_cast<int>(i), static_cast<int>(i))] = deg[i];

  if (int_sub(total, lap) != IntElement{})
    throw Error("laplacian_decomposition: decomposition identity failed");
  return out;
}

std::vector<ExpanderGapRow> expander_gap_profile(
    const std::vector<FiniteGraph>& graphs, std::uint64_t seed) {
  std::vector<ExpanderGapRow> rows;
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const FiniteGraph& g = graphs[k];
    ExpanderGapRow row;
    row.index = k + 1;
    row.size = g.n;
    if (g.n == 1) {
      row.gap = std::numeric_limits<double>::infinity();
    } else {
      Matrix lap = graph_laplacian(g);
      cvec ones(g.n, 1.0 / std::sqrt(static_cast<double>(g.n)));
      IterOptions opts;
      opts.seed = seed;
      row.gap = smallest_nonzero_eig(lap, {ones}, opts);
    }
    running = std::min(running, row.gap);
    row.running_min = running;
    rows.push_back(row);
  }
  return rows;
}

std::vector<BlockProjectionRow> block_kazhdan_projection(
    const std::vector<FiniteGraph>& graphs, std::uint64_t seed) {
  std::vector<ExpanderGapRow> gaps = expander_gap_profile(graphs, seed);
  std::vector<BlockProjectionRow> rows;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const FiniteGraph& g = graphs[k];
    BlockProjectionRow row;
    row.index = k + 1;
    row.size = g.n;
    const double inv = 1.0 / static_cast<double>(g.n);
    Matrix p(g.n, g.n);
    for (std::size_t i = 0; i < g.n; ++i)
      for (std::size_t j = 0; j < g.n; ++j) p(i, j) = inv;
    if (g.n > 1) {
      Matrix sp = spectral_projection(graph_laplacian(g), gaps[k].gap / 2.0);
      row.closed_form_dev = (sp - p).max_abs();
      p = sp;
    }
    row.block_norm = operator_norm(p);
    row.entry_sup = p.max_abs();
    row.idempotent_dev = (p * p - p).max_abs();
    row.adjoint_dev = (p.adjoint() - p).max_abs();
    rows.push_back(row);
  }
  return rows;
}

FiniteGraph random_regular_graph(std::size_t n, std::size_t degree,
                                 std::uint64_t seed) {
  if (n * degree % 2 != 0)
    throw Error("random_regular_graph: n * degree must be even");
  if (degree >= n) throw Error("random_regular_graph: degree must be below n");
  Rng rng(seed);
  for (int attempt = 0; attempt < 2000; ++attempt) {
    // pairing model: shuffle the n*degree half-edge stubs and pair them up
    std::vector<int> stubs(n * degree);
    for (std::size_t i = 0; i < stubs.size(); ++i)
      stubs[i] = static_cast<int>(i / degree);
    for (std::size_t i = stubs.size(); i > 1; --i)
      std::swap(stubs[i - 1], stubs[rng.below(i)]);
    std::vector<std::pair<int, int>> edges;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      int a = stubs[i], b = stubs[i + 1];
      if (a == b) {
        ok = false;
        break;
      }
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    if (!ok) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    try {
      return FiniteGraph::create(n, std::move(edges));
    } catch (const Error&) {
      continue;  // disconnected sample
    }
  }
  throw Error("random_regular_graph: rejection budget exhausted");
}

FiniteGraph complete_graph(std::size_t n) {
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return FiniteGraph::create(n, std::move(edges));
}

FiniteGraph cycle_graph(std::size_t n) {
  if (n < 3) throw Error("cycle_graph: need at least 3 vertices");
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    int a = static_cast<int>(i), b = static_cast<int>((i + 1) % n);
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return FiniteGraph::create(n, std::move(edges));
}

FiniteGraph path_graph(std::size_t n) {
  if (n < 2) throw Error("path_graph: need at least 2 vertices");
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
  return FiniteGraph::create(n, std::move(edges));
}

}  // namespace gpdt
