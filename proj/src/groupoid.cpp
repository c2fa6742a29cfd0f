#include "gpdt/groupoid.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace gpdt {

namespace {

std::uint64_t pack(int g, int h) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(g)) << 32) |
         static_cast<std::uint32_t>(h);
}

}  // namespace

std::shared_ptr<const FiniteGroupoid> FiniteGroupoid::create(Tables t) {
  const std::size_t n = t.labels.size();
  if (t.source.size() != n || t.range.size() != n || t.inverse.size() != n)
    throw Error("groupoid tables: source/range/inverse size mismatch");

  {
    std::set<std::string> seen(t.labels.begin(), t.labels.end());
    if (seen.size() != n) throw Error("groupoid tables: duplicate arrow labels");
  }
  auto check_index = [n](int i, const char* what) {
    if (i < 0 || static_cast<std::size_t>(i) >= n)
      throw Error(std::string("groupoid tables: ") + what + " index out of range");
  };
  for (int i : t.source) check_index(i, "source");
  for (int i : t.range) check_index(i, "range");
  for (int i : t.inverse) check_index(i, "inverse");
  for (int i : t.units) check_index(i, "unit");
  for (const auto& p : t.products)
    for (int i : p) check_index(i, "product");

  // canonical order: sort arrows lexicographically by label
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return t.labels[a] < t.labels[b]; });
  std::vector<int> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[order[k]] = static_cast<int>(k);

  auto gpd = std::shared_ptr<FiniteGroupoid>(new FiniteGroupoid());
  FiniteGroupoid& g = *gpd;
  g.labels_.resize(n);
  g.source_.resize(n);
  g.range_.resize(n);
  g.inverse_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    int old = order[k];
    g.labels_[k] = std::move(t.labels[old]);
    g.source_[k] = pos[t.source[old]];
    g.range_[k] = pos[t.range[old]];
    g.inverse_[k] = pos[t.inverse[old]];
  }
  for (int u : t.units) g.units_.push_back(pos[u]);
  std::sort(g.units_.begin(), g.units_.end());
  g.units_.erase(std::unique(g.units_.begin(), g.units_.end()), g.units_.end());
  g.unit_ordinal_.assign(n, -1);
  for (std::size_t k = 0; k < g.units_.size(); ++k)
    g.unit_ordinal_[g.units_[k]] = static_cast<int>(k);

  std::vector<std::pair<std::uint64_t, int>> mul;
  mul.reserve(t.products.size());
  for (const auto& p : t.products)
    mul.emplace_back(pack(pos[p[0]], pos[p[1]]), pos[p[2]]);
  std::sort(mul.begin(), mul.end());
  for (std::size_t k = 1; k < mul.size(); ++k)
    if (mul[k].first == mul[k - 1].first) {
      if (mul[k].second != mul[k - 1].second)
        throw Error("groupoid tables: conflicting products for one pair");
    }
  mul.erase(std::unique(mul.begin(), mul.end()), mul.end());
  g.mul_keys_.reserve(mul.size());
  g.mul_vals_.reserve(mul.size());
  for (const auto& [k, v] : mul) {
    g.mul_keys_.push_back(k);
    g.mul_vals_.push_back(v);
  }

  g.range_fibers_.assign(n, {});
  g.source_fibers_.assign(n, {});
  for (std::size_t k = 0; k < n; ++k) {
    int a = static_cast<int>(k);
    if (g.unit_ordinal_[g.range_[k]] >= 0) g.range_fibers_[g.range_[k]].push_back(a);
    if (g.unit_ordinal_[g.source_[k]] >= 0) g.source_fibers_[g.source_[k]].push_back(a);
  }
  return gpd;
}

int FiniteGroupoid::index_of(const std::string& label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return -1;
  return static_cast<int>(it - labels_.begin());
}

int FiniteGroupoid::compose(int g, int h) const {
  std::uint64_t key = pack(g, h);
  auto it = std::lower_bound(mul_keys_.begin(), mul_keys_.end(), key);
  if (it == mul_keys_.end() || *it != key) return -1;
  return mul_vals_[it - mul_keys_.begin()];
}

const std::vector<int>& FiniteGroupoid::range_fiber(int unit) const {
  return range_fibers_[unit];
}

const std::vector<int>& FiniteGroupoid::source_fiber(int unit) const {
  return source_fibers_[unit];
}

std::array<int, 3> FiniteGroupoid::product_entry(std::size_t k) const {
  std::uint64_t key = mul_keys_[k];
  return {static_cast<int>(key >> 32),
          static_cast<int>(key & 0xffffffffu), mul_vals_[k]};
}

ValidationReport validate(const FiniteGroupoid& g, const ValidateOptions& opts) {
  ValidationReport rep;
  auto add = [&](const std::string& axiom, const std::string& detail) {
    rep.diagnostics.push_back({axiom, detail});
  };
  const int n = static_cast<int>(g.arrow_count());

  for (int u : g.units()) {
    if (g.range(u) != u || g.source(u) != u)
      add("unit-fixed", "unit " + g.label(u) + " has source/range not equal to itself");
  }
  for (int a = 0; a < n; ++a) {
    if (!g.is_unit(g.source(a)))
      add("source-unit", "source of " + g.label(a) + " is not a declared unit");
    if (!g.is_unit(g.range(a)))
      add("range-unit", "range of " + g.label(a) + " is not a declared unit");
    int inv = g.inverse(a);
    if (g.inverse(inv) != a)
      add("inverse-involution", "inverse of " + g.label(a) + " does not return it");
    if (g.source(inv) != g.range(a) || g.range(inv) != g.source(a))
      add("inverse-fibres",
          "inverse of " + g.label(a) + " does not swap source and range");
  }

  // composition domain: defined iff source(g) = range(h)
  std::size_t expected_pairs = 0;
  for (int u : g.units())
    expected_pairs += g.source_fiber(u).size() * g.range_fiber(u).size();
  for (std::size_t k = 0; k < g.product_count(); ++k) {
    auto [a, b, c] = g.product_entry(k);
    if (g.source(a) != g.range(b))
      add("composability",
          "compose(" + g.label(a) + ", " + g.label(b) + ") defined but source != range");
    else {
      if (g.range(c) != g.range(a) || g.source(c) != g.source(b))
        add("composition-fibres",
            "product " + g.label(a) + "*" + g.label(b) + " = " + g.label(c) +
                " has wrong source or range");
    }
  }
  if (expected_pairs > g.product_count()) {
    // find one missing composable pair for the message
    bool reported = false;
    for (int u : g.units()) {
      for (int a : g.source_fiber(u)) {
        for (int b : g.range_fiber(u)) {
          if (g.compose(a, b) < 0) {
            add("composability", "compose(" + g.label(a) + ", " + g.label(b) +
                                     ") is undefined although source = range");
            reported = true;
            break;
          }
        }
        if (reported) break;
      }
      if (reported) break;
    }
  }

  // units act as identities; g * g^{-1} = range, g^{-1} * g = source
  for (int a = 0; a < n; ++a) {
    int ra = g.range(a), sa = g.source(a);
    if (g.is_unit(ra) && g.compose(ra, a) != a)
      add("unit-identity", "range unit does not act trivially on " + g.label(a));
    if (g.is_unit(sa) && g.compose(a, sa) != a)
      add("unit-identity", "source unit does not act trivially on " + g.label(a));
    if (g.compose(a, g.inverse(a)) != ra)
      add("inverse-product", g.label(a) + " * inverse != range unit");
    if (g.compose(g.inverse(a), a) != sa)
      add("inverse-product", "inverse * " + g.label(a) + " != source unit");
  }

  // associativity over defined triples (g,h,k) with s(g)=r(h), s(h)=r(k)
  std::size_t total_triples = 0;
  for (int u : g.units()) {
    std::size_t into = g.source_fiber(u).size();   // arrows h with s(h)=? no:
    (void)into;
  }
  // count triples: for each h, |G^{s(h)}-composables on the left| * |right|
  for (int h = 0; h < n; ++h) {
    if (!g.is_unit(g.range(h)) || !g.is_unit(g.source(h))) continue;
    total_triples += g.source_fiber(g.range(h)).size() *
                     g.range_fiber(g.source(h)).size();
  }
  rep.triples_checked = total_triples;
  auto check_triple = [&](int a, int h, int b) -> bool {
    int ah = g.compose(a, h), hb = g.compose(h, b);
    if (ah < 0 || hb < 0) return true;  // composability diagnostics cover this
    int lhs = g.compose(ah, b), rhs = g.compose(a, hb);
    if (lhs != rhs || lhs < 0) {
      add("associativity", "(" + g.label(a) + " * " + g.label(h) + ") * " +
                               g.label(b) + " != " + g.label(a) + " * (" +
                               g.label(h) + " * " + g.label(b) + ")");
      return false;
    }
    return true;
  };
  if (total_triples <= opts.max_triples) {
    for (int h = 0; h < n && rep.diagnostics.size() < 64; ++h) {
      if (!g.is_unit(g.range(h)) || !g.is_unit(g.source(h))) continue;
      for (int a : g.source_fiber(g.range(h)))
        for (int b : g.range_fiber(g.source(h)))
          if (!check_triple(a, h, b)) break;
    }
  } else {
    rep.associativity_sampled = true;
    rep.triples_checked = opts.max_triples;
    Rng rng(opts.seed);
    for (std::size_t k = 0; k < opts.max_triples; ++k) {
      int h = static_cast<int>(rng.below(n));
      if (!g.is_unit(g.range(h)) || !g.is_unit(g.source(h))) continue;
      const auto& left = g.source_fiber(g.range(h));
      const auto& right = g.range_fiber(g.source(h));
      if (left.empty() || right.empty()) continue;
      int a = left[rng.below(left.size())];
      int b = right[rng.below(right.size())];
      if (!check_triple(a, h, b)) break;
    }
  }
  return rep;
}

OrbitDecomposition orbits(const FiniteGroupoid& g) {
  const std::size_t m = g.unit_count();
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    int s = g.unit_ordinal(g.source(static_cast<int>(a)));
    int r = g.unit_ordinal(g.range(static_cast<int>(a)));
    if (s < 0 || r < 0) continue;
    int fs = find(s), fr = find(r);
    if (fs != fr) parent[std::max(fs, fr)] = std::min(fs, fr);
  }
  OrbitDecomposition dec;
  dec.orbit_of.assign(m, -1);
  std::vector<int> root_index;
  for (std::size_t k = 0; k < m; ++k) {
    int root = find(static_cast<int>(k));
    int idx = -1;
    for (std::size_t t = 0; t < root_index.size(); ++t)
      if (root_index[t] == root) idx = static_cast<int>(t);
    if (idx < 0) {
      idx = static_cast<int>(root_index.size());
      root_index.push_back(root);
      dec.orbits.emplace_back();
    }
    dec.orbit_of[k] = idx;
    dec.orbits[idx].push_back(g.units()[k]);
  }
  return dec;
}

GroupoidPtr disjoint_union(const GroupoidPtr& a, const GroupoidPtr& b) {
  FiniteGroupoid::Tables t;
  const int na = static_cast<int>(a->arrow_count());
  auto push = [&](const FiniteGroupoid& g, const std::string& tag, int offset) {
    for (std::size_t k = 0; k < g.arrow_count(); ++k) {
      t.labels.push_back(tag + g.label(static_cast<int>(k)));
      t.source.push_back(g.source(static_cast<int>(k)) + offset);
      t.range.push_back(g.range(static_cast<int>(k)) + offset);
      t.inverse.push_back(g.inverse(static_cast<int>(k)) + offset);
    }
    for (int u : g.units()) t.units.push_back(u + offset);
    for (std::size_t k = 0; k < g.product_count(); ++k) {
      auto [x, y, z] = g.product_entry(k);
      t.products.push_back({x + offset, y + offset, z + offset});
    }
  };
  push(*a, "0:", 0);
  push(*b, "1:", na);
  return FiniteGroupoid::create(std::move(t));
}

Restriction restrict_to_units(const GroupoidPtr& g,
                              const std::vector<int>& unit_arrows) {
  std::vector<char> keep(g->arrow_count(), 0);
  for (int u : unit_arrows) {
    if (!g->is_unit(u)) throw Error("restrict_to_units: arrow is not a unit");
    keep[u] = 1;
  }
  std::vector<int> arrows;
  for (std::size_t a = 0; a < g->arrow_count(); ++a) {
    int ai = static_cast<int>(a);
    bool s_in = keep[g->source(ai)], r_in = keep[g->range(ai)];
    if (s_in != r_in)
      throw Error("restrict_to_units: unit set is not invariant");
    if (s_in) arrows.push_back(ai);
  }
  std::vector<int> pos(g->arrow_count(), -1);
  for (std::size_t k = 0; k < arrows.size(); ++k) pos[arrows[k]] = static_cast<int>(k);

  FiniteGroupoid::Tables t;
  for (int a : arrows) {
    t.labels.push_back(g->label(a));
    t.source.push_back(pos[g->source(a)]);
    t.range.push_back(pos[g->range(a)]);
    t.inverse.push_back(pos[g->inverse(a)]);
    if (g->is_unit(a)) t.units.push_back(pos[a]);
  }
  for (std::size_t k = 0; k < g->product_count(); ++k) {
    auto [x, y, z] = g->product_entry(k);
    if (pos[x] >= 0 && pos[y] >= 0 && pos[z] >= 0)
      t.products.push_back({pos[x], pos[y], pos[z]});
  }
  Restriction res;
  res.groupoid = FiniteGroupoid::create(std::move(t));
  // create() re-sorts labels; labels are inherited so positions are stable,
  // but recompute the parent map through labels to stay safe
  res.arrow_in_parent.resize(arrows.size());
  for (std::size_t k = 0; k < arrows.size(); ++k) {
    int idx = res.groupoid->index_of(g->label(arrows[k]));
    res.arrow_in_parent[idx] = arrows[k];
  }
  return res;
}

bool generates(const FiniteGroupoid& g, const std::vector<int>& arrows) {
  std::vector<char> in(g.arrow_count(), 0);
  std::vector<int> frontier;
  auto admit = [&](int a) {
    if (!in[a]) {
      in[a] = 1;
      frontier.push_back(a);
    }
  };
  for (int u : g.units()) admit(u);
  std::vector<int> gens;
  for (int a : arrows) {
    admit(a);
    admit(g.inverse(a));
  }
  for (std::size_t a = 0; a < g.arrow_count(); ++a)
    if (in[a]) gens.push_back(static_cast<int>(a));

  std::size_t count = 0;
  for (char c : in) count += c;
  while (!frontier.empty()) {
    int a = frontier.back();
    frontier.pop_back();
    for (int s : gens) {
      int p = g.compose(a, s);
      if (p >= 0 && !in[p]) {
        in[p] = 1;
        ++count;
        frontier.push_back(p);
      }
      p = g.compose(s, a);
      if (p >= 0 && !in[p]) {
        in[p] = 1;
        ++count;
        frontier.push_back(p);
      }
    }
  }
  return count == g.arrow_count();
}

}  // namespace gpdt
