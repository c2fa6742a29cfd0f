#include "gpdt/builders.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace gpdt {

std::string padded_index(std::size_t i, std::size_t count) {
  std::size_t width = 1, top = 10;
  while (count > top) {
    ++width;
    top *= 10;
  }
  std::string s = std::to_string(i);
  while (s.size() < width) s.insert(s.begin(), '0');
  return s;
}

// ---- GroupElements ----

int GroupElements::lookup(const std::vector<long>& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

std::vector<long> GroupElements::mul_keys(int a, int b) const {
  const auto& x = elements_[a];
  const auto& y = elements_[b];
  std::vector<long> out(x.size());
  switch (kind_) {
    case Kind::permutation:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[y[i]];
      break;
    case Kind::matrix: {
      const std::size_t d = dim_;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          long acc = 0;
          for (std::size_t k = 0; k < d; ++k)
            acc = (acc + x[i * d + k] * y[k * d + j]) % modulus_;
          out[i * d + j] = acc;
        }
      break;
    }
    case Kind::cyclic:
      out[0] = (x[0] + y[0]) % modulus_;
      break;
  }
  return out;
}

int GroupElements::mul(int a, int b) const {
  int r = lookup(mul_keys(a, b));
  if (r < 0) throw Error("group elements: product escaped the closed set");
  return r;
}

namespace {

std::string perm_label(const std::vector<long>& v, std::size_t domain) {
  std::string s = "p[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += padded_index(static_cast<std::size_t>(v[i]), domain);
  }
  return s + "]";
}

std::string matrix_label(const std::vector<long>& v, std::size_t d, long m) {
  std::string s = "m[";
  for (std::size_t i = 0; i < d; ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < d; ++j) {
      if (j) s += ",";
      s += padded_index(static_cast<std::size_t>(v[i * d + j]),
                        static_cast<std::size_t>(m));
    }
  }
  return s + "]";
}

}  // namespace

void GroupElements::finish() {
  labels_.resize(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    switch (kind_) {
      case Kind::permutation:
        labels_[i] = perm_label(elements_[i], elements_[i].size());
        break;
      case Kind::matrix:
        labels_[i] = matrix_label(elements_[i], dim_, modulus_);
        break;
      case Kind::cyclic:
        labels_[i] = "z" + padded_index(static_cast<std::size_t>(elements_[i][0]),
                                        static_cast<std::size_t>(modulus_));
        break;
    }
  }
  // inverses: brute scan is fine at closure scale
  inverse_.assign(elements_.size(), -1);
  for (std::size_t a = 0; a < elements_.size(); ++a) {
    if (inverse_[a] >= 0) continue;
    for (std::size_t b = 0; b < elements_.size(); ++b) {
      if (lookup(mul_keys(static_cast<int>(a), static_cast<int>(b))) == identity_) {
        inverse_[a] = static_cast<int>(b);
        inverse_[b] = static_cast<int>(a);
        break;
      }
    }
    if (inverse_[a] < 0) throw Error("group elements: no inverse found");
  }
}

namespace {

void bfs_close(GroupElements& g, std::vector<std::vector<long>> gen_keys,
               std::vector<long> id_key, std::size_t cap,
               std::vector<std::vector<long>>& elements,
               std::map<std::vector<long>, int>& index,
               std::vector<int>& generator_ids,
               const std::function<std::vector<long>(const std::vector<long>&,
                                                     const std::vector<long>&)>& mul) {
  (void)g;
  elements.push_back(id_key);
  index[id_key] = 0;
  std::deque<int> frontier{0};
  generator_ids.clear();
  for (const auto& k : gen_keys) {
    auto it = index.find(k);
    if (it == index.end()) {
      int id = static_cast<int>(elements.size());
      elements.push_back(k);
      index[k] = id;
      frontier.push_back(id);
      generator_ids.push_back(id);
    } else {
      generator_ids.push_back(it->second);
    }
  }
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop_front();
    for (const auto& k : gen_keys) {
      for (int side = 0; side < 2; ++side) {
        std::vector<long> prod = side == 0 ? mul(k, elements[cur])
                                           : mul(elements[cur], k);
        if (index.find(prod) == index.end()) {
          if (elements.size() >= cap)
            throw Error("group closure exceeded the element cap (" +
                        std::to_string(cap) + ")");
          int id = static_cast<int>(elements.size());
          elements.push_back(prod);
          index[prod] = id;
          frontier.push_back(id);
        }
      }
    }
  }
}

}  // namespace

GroupElements GroupElements::close_permutations(
    const std::vector<std::vector<int>>& generators, std::size_t cap) {
  if (generators.empty()) throw Error("group closure: no generators");
  const std::size_t d = generators[0].size();
  GroupElements g;
  g.kind_ = Kind::permutation;
  g.dim_ = d;
  std::vector<std::vector<long>> gen_keys;
  for (const auto& p : generators) {
    if (p.size() != d)
      throw Error("group closure: generators act on different domains");
    std::vector<char> seen(d, 0);
    std::vector<long> key(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (p[i] < 0 || static_cast<std::size_t>(p[i]) >= d || seen[p[i]])
        throw Error("group closure: generator is not a permutation");
      seen[p[i]] = 1;
      key[i] = p[i];
    }
    gen_keys.push_back(key);
  }
  std::vector<long> id(d);
  for (std::size_t i = 0; i < d; ++i) id[i] = static_cast<long>(i);
  auto mul = [&g](const std::vector<long>& x, const std::vector<long>& y) {
    std::vector<long> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[y[i]];
    (void)g;
    return out;
  };
  bfs_close(g, gen_keys, id, cap, g.elements_, g.index_, g.generator_ids_, mul);
  g.identity_ = 0;
  g.finish();
  return g;
}

GroupElements GroupElements::close_matrices(
    long modulus, const std::vector<std::vector<long>>& generators,
    std::size_t cap) {
  if (generators.empty()) throw Error("group closure: no generators");
  if (modulus < 2) throw Error("group closure: modulus must be >= 2");
  std::size_t d2 = generators[0].size();
  std::size_t d = 1;
  while (d * d < d2) ++d;
  if (d * d != d2) throw Error("group closure: matrix generator is not square");
  GroupElements g;
  g.kind_ = Kind::matrix;
  g.dim_ = d;
  g.modulus_ = modulus;
  std::vector<std::vector<long>> gen_keys;
  for (const auto& mrow : generators) {
    if (mrow.size() != d2)
      throw Error("group closure: matrix generators have mixed sizes");
    std::vector<long> key(d2);
    for (std::size_t i = 0; i < d2; ++i)
      key[i] = ((mrow[i] % modulus) + modulus) % modulus;
    gen_keys.push_back(key);
  }
  std::vector<long> id(d2, 0);
  for (std::size_t i = 0; i < d; ++i) id[i * d + i] = 1 % modulus;
  auto mul = [d, modulus](const std::vector<long>& x, const std::vector<long>& y) {
    std::vector<long> out(d * d, 0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        long acc = 0;
        for (std::size_t k = 0; k < d; ++k)
          acc = (acc + x[i * d + k] * y[k * d + j]) % modulus;
        out[i * d + j] = acc;
      }
    return out;
  };
  bfs_close(g, gen_keys, id, cap, g.elements_, g.index_, g.generator_ids_, mul);
  g.identity_ = 0;
  // invertibility: BFS closure of a non-invertible matrix never returns to
  // the identity row space; detect by checking each generator has an inverse
  g.finish();
  for (int gen : g.generator_ids_)
    if (g.inv(gen) < 0) throw Error("group closure: generator not invertible");
  return g;
}

GroupElements GroupElements::cyclic(long n) {
  if (n < 1) throw Error("cyclic group: order must be positive");
  GroupElements g;
  g.kind_ = Kind::cyclic;
  g.modulus_ = n;
  g.dim_ = 1;
  for (long i = 0; i < n; ++i) {
    g.elements_.push_back({i});
    g.index_[{i}] = static_cast<int>(i);
  }
  g.identity_ = 0;
  g.generator_ids_ = {static_cast<int>(1 % n)};
  g.finish();
  return g;
}

// ---- groupoid builders ----

GroupoidPtr build_pair(std::size_t n) {
  if (n < 1) throw Error("build_pair: n must be >= 1");
  FiniteGroupoid::Tables t;
  auto idx = [n](std::size_t i, std::size_t j) { return static_cast<int>(i * n + j); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      t.labels.push_back("(" + padded_index(i, n) + "," + padded_index(j, n) + ")");
      t.range.push_back(idx(i, i));
      t.source.push_back(idx(j, j));
      t.inverse.push_back(idx(j, i));
      if (i == j) t.units.push_back(idx(i, i));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        t.products.push_back({idx(i, j), idx(j, k), idx(i, k)});
  return FiniteGroupoid::create(std::move(t));
}

GroupBuild build_group(const GroupElements& elements) {
  const std::size_t n = elements.size();
  FiniteGroupoid::Tables t;
  for (std::size_t i = 0; i < n; ++i) {
    t.labels.push_back(elements.label(static_cast<int>(i)));
    t.source.push_back(elements.identity());
    t.range.push_back(elements.identity());
    t.inverse.push_back(elements.inv(static_cast<int>(i)));
  }
  t.units.push_back(elements.identity());
  t.products.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      t.products.push_back({static_cast<int>(a), static_cast<int>(b),
                            elements.mul(static_cast<int>(a), static_cast<int>(b))});
  GroupBuild out;
  out.groupoid = FiniteGroupoid::create(std::move(t));
  out.elements = std::make_shared<GroupElements>(elements);
  for (int gid : elements.generator_ids())
    out.generator_arrows.push_back(out.groupoid->index_of(elements.label(gid)));
  return out;
}

GroupBuild build_group_permutations(const std::vector<std::vector<int>>& generators,
                                    std::size_t cap) {
  return build_group(GroupElements::close_permutations(generators, cap));
}

GroupBuild build_group_matrices(long modulus,
                                const std::vector<std::vector<long>>& generators,
                                std::size_t cap) {
  return build_group(GroupElements::close_matrices(modulus, generators, cap));
}

GroupBuild build_group_cyclic(long n) {
  return build_group(GroupElements::cyclic(n));
}

GroupoidPtr build_transformation(const GroupBuild& group, std::size_t points,
                                 const std::vector<std::vector<int>>& generator_action) {
  const GroupElements& el = *group.elements;
  if (points < 1) throw Error("build_transformation: need at least one point");
  if (generator_action.size() != el.generator_ids().size())
    throw Error("build_transformation: one action permutation per generator required");
  for (const auto& act : generator_action) {
    if (act.size() != points)
      throw Error("build_transformation: action domain size mismatch");
    std::vector<char> seen(points, 0);
    for (int y : act) {
      if (y < 0 || static_cast<std::size_t>(y) >= points || seen[y])
        throw Error("build_transformation: generator action is not a permutation");
      seen[y] = 1;
    }
  }

  // extend the action along products and verify the extension is consistent
  const std::size_t n = el.size();
  std::vector<std::vector<int>> act(n);
  std::vector<char> have(n, 0);
  std::vector<int> ident(points);
  for (std::size_t x = 0; x < points; ++x) ident[x] = static_cast<int>(x);
  act[el.identity()] = ident;
  have[el.identity()] = 1;
  std::deque<int> frontier{el.identity()};
  auto compose_perm = [](const std::vector<int>& f, const std::vector<int>& g2) {
    std::vector<int> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[g2[i]];
    return out;
  };
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop_front();
    for (std::size_t gi = 0; gi < generator_action.size(); ++gi) {
      int s = el.generator_ids()[gi];
      int nxt = el.mul(s, cur);
      std::vector<int> p = compose_perm(generator_action[gi], act[cur]);
      if (!have[nxt]) {
        act[nxt] = std::move(p);
        have[nxt] = 1;
        frontier.push_back(nxt);
      } else if (act[nxt] != p) {
        throw Error("build_transformation: action is inconsistent on element " +
                    el.label(nxt) + " (not a group action)");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!have[i])
      throw Error("build_transformation: generators do not reach element " +
                  el.label(static_cast<int>(i)));
  // full homomorphism check: act(s*g) == act(s) o act(g) for all s, g
  for (std::size_t gi = 0; gi < generator_action.size(); ++gi) {
    int s = el.generator_ids()[gi];
    for (std::size_t gidx = 0; gidx < n; ++gidx) {
      int prod = el.mul(s, static_cast<int>(gidx));
      if (act[prod] != compose_perm(generator_action[gi], act[gidx]))
        throw Error("build_transformation: action violates compatibility at (" +
                    el.label(s) + ", " + el.label(static_cast<int>(gidx)) + ")");
    }
  }

  FiniteGroupoid::Tables t;
  auto arrow = [&](std::size_t g, std::size_t x) {
    return static_cast<int>(g * points + x);
  };
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t x = 0; x < points; ++x) {
      int gx = act[g][x];
      t.labels.push_back("[" + el.label(static_cast<int>(g)) + "@" +
                         padded_index(x, points) + "]");
      t.range.push_back(arrow(el.identity(), gx));
      t.source.push_back(arrow(el.identity(), x));
      t.inverse.push_back(arrow(el.inv(static_cast<int>(g)), gx));
      if (static_cast<int>(g) == el.identity()) t.units.push_back(arrow(g, x));
    }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      int gh = el.mul(static_cast<int>(g), static_cast<int>(h));
      for (std::size_t x = 0; x < points; ++x) {
        int hx = act[h][x];
        t.products.push_back({arrow(g, hx), arrow(h, x), arrow(gh, x)});
      }
    }
  return FiniteGroupoid::create(std::move(t));
}

// ---- HLS ----

namespace {

GroupElements fiber_elements(HlsChain::Parent parent, long level, std::size_t cap) {
  if (level < 1) throw Error("hls: levels must be positive");
  if (parent == HlsChain::Parent::Z) return GroupElements::cyclic(level);
  // SL(2, Z/m) from the images of S = [[0,-1],[1,0]] and T = [[1,1],[0,1]]
  if (level == 1) return GroupElements::cyclic(1);
  return GroupElements::close_matrices(
      level, {{0, level - 1, 1, 0}, {1, 1, 0, 1}}, cap);
}

}  // namespace

CayleyFiber build_cayley_fiber(HlsChain::Parent parent, long level,
                               std::size_t cap) {
  GroupElements el = fiber_elements(parent, level, cap);
  CayleyFiber f;
  f.name = (parent == HlsChain::Parent::Z ? "Z/" : "SL2(Z/") +
           std::to_string(level) + (parent == HlsChain::Parent::Z ? "" : ")");
  f.order = el.size();
  for (int gid : el.generator_ids()) {
    std::vector<int> perm(el.size());
    for (std::size_t x = 0; x < el.size(); ++x)
      perm[x] = el.mul(gid, static_cast<int>(x));
    f.generator_left_mult.push_back(std::move(perm));
  }
  return f;
}

HlsTruncation build_hls_truncation(const HlsChain& chain, std::size_t depth,
                                   std::size_t cap) {
  if (depth < 1) throw Error("hls: depth must be >= 1");
  if (chain.levels.size() < depth)
    throw Error("hls: chain provides fewer levels than the requested depth");
  // nestedness: kernels shrink, i.e. each level divides the next
  for (std::size_t i = 0; i + 1 < depth; ++i) {
    long a = chain.levels[i], b = chain.levels[i + 1];
    if (a < 1 || b < 1 || b % a != 0) {
      std::ostringstream os;
      os << "hls: chain is not nested at position " << i + 1 << " (kernel "
         << b << " not contained in kernel " << a << ")";
      throw Error(os.str());
    }
  }

  HlsTruncation out;
  out.chain = chain;
  out.chain.levels.resize(depth);
  FiniteGroupoid::Tables t;
  std::vector<std::vector<int>> fiber_offset_arrows;
  std::vector<std::vector<int>> gen_positions(depth);
  std::vector<std::string> fiber_labels;
  int offset = 0;
  std::vector<int> identity_of(depth);
  for (std::size_t fn = 0; fn < depth; ++fn) {
    GroupElements el = fiber_elements(chain.parent, chain.levels[fn], cap);
    const std::size_t m = el.size();
    out.fiber_sizes.push_back(m);
    std::string tag = "(" + padded_index(fn + 1, depth + 1) + ",";
    for (std::size_t i = 0; i < m; ++i) {
      t.labels.push_back(tag + el.label(static_cast<int>(i)) + ")");
      t.source.push_back(offset + el.identity());
      t.range.push_back(offset + el.identity());
      t.inverse.push_back(offset + el.inv(static_cast<int>(i)));
    }
    t.units.push_back(offset + el.identity());
    identity_of[fn] = offset + el.identity();
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        t.products.push_back(
            {offset + static_cast<int>(a), offset + static_cast<int>(b),
             offset + el.mul(static_cast<int>(a), static_cast<int>(b))});
    for (int gid : el.generator_ids()) gen_positions[fn].push_back(offset + gid);
    offset += static_cast<int>(m);
  }
  std::vector<std::string> all_labels = t.labels;  // positions before sorting
  out.groupoid = FiniteGroupoid::create(std::move(t));
  for (std::size_t fn = 0; fn < depth; ++fn) {
    out.fiber_units.push_back(out.groupoid->index_of(all_labels[identity_of[fn]]));
    std::vector<int> gens;
    for (int p : gen_positions[fn])
      gens.push_back(out.groupoid->index_of(all_labels[p]));
    out.fiber_generators.push_back(std::move(gens));
  }
  return out;
}

// ---- coarse ----

namespace {

void check_simple_connected(const SimpleGraph& g) {
  if (g.n < 1) throw Error("coarse: graph must have at least one vertex");
  std::vector<std::vector<int>> adj(g.n);
  std::vector<std::pair<int, int>> seen;
  for (auto [a, b] : g.edges) {
    if (a == b) throw Error("coarse: loops are not allowed");
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= g.n ||
        static_cast<std::size_t>(b) >= g.n)
      throw Error("coarse: edge endpoint out of range");
    auto e = std::minmax(a, b);
    seen.push_back({e.first, e.second});
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw Error("coarse: multi-edges are not allowed");
  // connectivity
  std::vector<char> vis(g.n, 0);
  std::deque<int> q{0};
  vis[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : adj[v])
      if (!vis[w]) {
        vis[w] = 1;
        ++count;
        q.push_back(w);
      }
  }
  if (count != g.n) throw Error("coarse: graph is not connected");
}

}  // namespace

CoarseBuild build_coarse_truncation(const std::vector<SimpleGraph>& graphs) {
  if (graphs.empty()) throw Error("coarse: need at least one graph");
  for (const auto& g : graphs) check_simple_connected(g);

  FiniteGroupoid::Tables t;
  std::vector<std::string> entourage_labels;
  int offset = 0;
  CoarseBuild out;
  for (std::size_t bn = 0; bn < graphs.size(); ++bn) {
    const SimpleGraph& g = graphs[bn];
    const std::size_t n = g.n;
    out.block_sizes.push_back(n);
    std::string tag = padded_index(bn + 1, graphs.size() + 1) + ":";
    auto idx = [&](std::size_t i, std::size_t j) {
      return offset + static_cast<int>(i * n + j);
    };
    auto lab = [&](std::size_t i, std::size_t j) {
      return tag + "(" + padded_index(i, n) + "," + padded_index(j, n) + ")";
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        t.labels.push_back(lab(i, j));
        t.range.push_back(idx(i, i));
        t.source.push_back(idx(j, j));
        t.inverse.push_back(idx(j, i));
        if (i == j) {
          t.units.push_back(idx(i, i));
          entourage_labels.push_back(lab(i, i));
        }
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          t.products.push_back({idx(i, j), idx(j, k), idx(i, k)});
    for (auto [a, b] : g.edges) {
      entourage_labels.push_back(lab(a, b));
      entourage_labels.push_back(lab(b, a));
    }
    offset += static_cast<int>(n * n);
  }
  out.groupoid = FiniteGroupoid::create(std::move(t));
  for (const std::string& l : entourage_labels)
    out.entourage.push_back(out.groupoid->index_of(l));
  std::sort(out.entourage.begin(), out.entourage.end());
  return out;
}

GroupoidPtr build_explicit(FiniteGroupoid::Tables tables) {
  return FiniteGroupoid::create(std::move(tables));
}

}  // namespace gpdt
