#include "gpdt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace gpdt {

namespace {

const json& need(const json& j, const char* key) {
  if (!j.contains(key))
    throw IoError(std::string("spec: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError("parse error in " + path + ": " + e.what());
  }
  return j;
}

std::vector<FiniteGraph> load_graphs(const json& j) {
  if (!j.is_array()) throw IoError("graphs: expected an array");
  std::vector<FiniteGraph> out;
  for (const json& gj : j) {
    std::size_t n = need(gj, "n").get<std::size_t>();
    std::vector<std::pair<int, int>> edges;
    for (const json& e : need(gj, "edges")) {
      if (!e.is_array() || e.size() != 2) throw IoError("graphs: bad edge entry");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    out.push_back(FiniteGraph::create(n, std::move(edges)));
  }
  return out;
}

LoadedGroupoid load_groupoid(const json& spec, std::size_t closure_cap) {
  if (!spec.is_object()) throw IoError("spec: expected a JSON object");
  LoadedGroupoid out;
  out.type = need(spec, "type").get<std::string>();

  if (out.type == "pair") {
    out.groupoid = build_pair(need(spec, "n").get<std::size_t>());
    return out;
  }

  if (out.type == "group") {
    GroupBuild gb;
    if (spec.contains("perm_generators")) {
      std::vector<std::vector<int>> gens;
      for (const json& p : spec.at("perm_generators"))
        gens.push_back(p.get<std::vector<int>>());
      gb = build_group_permutations(gens, closure_cap);
    } else if (spec.contains("matrix_generators")) {
      const json& mg = spec.at("matrix_generators");
      long modulus = need(mg, "modulus").get<long>();
      std::vector<std::vector<long>> gens;
      for (const json& m : need(mg, "matrices")) {
        std::vector<long> flat;
        for (const json& row : m)
          for (const json& v : row) flat.push_back(v.get<long>());
        gens.push_back(std::move(flat));
      }
      gb = build_group_matrices(modulus, gens, closure_cap);
    } else if (spec.contains("cyclic")) {
      gb = build_group_cyclic(spec.at("cyclic").get<long>());
    } else {
      throw IoError("group spec: need perm_generators, matrix_generators or cyclic");
    }
    out.groupoid = gb.groupoid;
    for (std::size_t i = 0; i < gb.generator_arrows.size(); ++i)
      out.named_generators["g" + std::to_string(i)] = gb.generator_arrows[i];
    return out;
  }

  if (out.type == "action") {
    GroupBuild gb;
    json gspec = need(spec, "group");
    if (gspec.contains("perm_generators")) {
      std::vector<std::vector<int>> gens;
      for (const json& p : gspec.at("perm_generators"))
        gens.push_back(p.get<std::vector<int>>());
      gb = build_group_permutations(gens, closure_cap);
    } else if (gspec.contains("matrix_generators")) {
      const json& mg = gspec.at("matrix_generators");
      long modulus = need(mg, "modulus").get<long>();
      std::vector<std::vector<long>> gens;
      for (const json& m : need(mg, "matrices")) {
        std::vector<long> flat;
        for (const json& row : m)
          for (const json& v : row) flat.push_back(v.get<long>());
        gens.push_back(std::move(flat));
      }
      gb = build_group_matrices(modulus, gens, closure_cap);
    } else if (gspec.contains("cyclic")) {
      gb = build_group_cyclic(gspec.at("cyclic").get<long>());
    } else {
      throw IoError("action spec: unsupported group subspec");
    }
    std::size_t points = need(spec, "points").get<std::size_t>();
    std::vector<std::vector<int>> action;
    for (const json& p : need(spec, "action"))
      action.push_back(p.get<std::vector<int>>());
    out.groupoid = build_transformation(gb, points, action);
    return out;
  }

  if (out.type == "hls") {
    HlsChain chain;
    std::string parent = need(spec, "parent").get<std::string>();
    if (parent == "Z")
      chain.parent = HlsChain::Parent::Z;
    else if (parent == "SL2Z")
      chain.parent = HlsChain::Parent::SL2Z;
    else
      throw IoError("hls spec: parent must be 'Z' or 'SL2Z'");
    const json& kj = need(spec, "kernels");
    if (kj.is_string() && kj.get<std::string>() == "pow2") {
      std::size_t depth = need(spec, "depth").get<std::size_t>();
      long k = 2;
      for (std::size_t i = 0; i < depth; ++i, k *= 2) chain.levels.push_back(k);
    } else {
      chain.levels = kj.get<std::vector<long>>();
    }
    std::size_t depth = spec.contains("depth")
                            ? spec.at("depth").get<std::size_t>()
                            : chain.levels.size();
    out.hls = build_hls_truncation(chain, depth, closure_cap);
    out.groupoid = out.hls->groupoid;
    for (std::size_t fn = 0; fn < out.hls->fiber_generators.size(); ++fn)
      for (std::size_t gi = 0; gi < out.hls->fiber_generators[fn].size(); ++gi)
        out.named_generators["f" + std::to_string(fn + 1) + "g" + std::to_string(gi)] =
            out.hls->fiber_generators[fn][gi];
    return out;
  }

  if (out.type == "coarse") {
    out.graphs = load_graphs(need(spec, "graphs"));
    std::vector<SimpleGraph> simple;
    for (const FiniteGraph& g : out.graphs) simple.push_back(g.as_simple());
    out.coarse = build_coarse_truncation(simple);
    out.groupoid = out.coarse->groupoid;
    return out;
  }

  if (out.type == "disjoint_union") {
    const json& parts = need(spec, "parts");
    if (!parts.is_array() || parts.empty())
      throw IoError("disjoint_union spec: need a non-empty parts array");
    GroupoidPtr acc;
    for (const json& part : parts) {
      LoadedGroupoid lp = load_groupoid(part, closure_cap);
      acc = acc ? disjoint_union(acc, lp.groupoid) : lp.groupoid;
    }
    out.groupoid = acc;
    return out;
  }

  if (out.type == "explicit") {
    FiniteGroupoid::Tables t;
    std::vector<std::string> labels = need(spec, "arrows").get<std::vector<std::string>>();
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < labels.size(); ++i)
      pos[labels[i]] = static_cast<int>(i);
    auto resolve = [&pos](const std::string& l) {
      auto it = pos.find(l);
      if (it == pos.end()) throw IoError("explicit spec: unknown arrow '" + l + "'");
      return it->second;
    };
    t.labels = labels;
    t.source.resize(labels.size());
    t.range.resize(labels.size());
    t.inverse.resize(labels.size());
    const json& src = need(spec, "source");
    const json& rng = need(spec, "range");
    const json& inv = need(spec, "inv");
    for (const std::string& l : labels) {
      if (!src.contains(l) || !rng.contains(l) || !inv.contains(l))
        throw IoError("explicit spec: source/range/inv must cover every arrow");
      t.source[resolve(l)] = resolve(src.at(l).get<std::string>());
      t.range[resolve(l)] = resolve(rng.at(l).get<std::string>());
      t.inverse[resolve(l)] = resolve(inv.at(l).get<std::string>());
    }
    for (const std::string& u : need(spec, "units").get<std::vector<std::string>>())
      t.units.push_back(resolve(u));
    for (const json& p : need(spec, "mul")) {
      if (!p.is_array() || p.size() != 3) throw IoError("explicit spec: bad mul entry");
      t.products.push_back({resolve(p[0].get<std::string>()),
                            resolve(p[1].get<std::string>()),
                            resolve(p[2].get<std::string>())});
    }
    out.groupoid = build_explicit(std::move(t));
    return out;
  }

  throw IoError("spec: unknown groupoid type '" + out.type + "'");
}

LoadedGroupoid load_groupoid_file(const std::string& path, std::size_t cap) {
  return load_groupoid(read_json_file(path), cap);
}

AlgebraElement load_element(const json& j, const GroupoidPtr& g) {
  AlgebraElement f(g);
  for (const json& entry : need(j, "coeffs")) {
    if (!entry.is_array() || entry.size() < 2 || entry.size() > 3)
      throw IoError("element: entries must be [label, re] or [label, re, im]");
    int a = g->index_of(entry[0].get<std::string>());
    if (a < 0)
      throw IoError("element: unknown arrow '" + entry[0].get<std::string>() + "'");
    double re = entry[1].get<double>();
    double im = entry.size() == 3 ? entry[2].get<double>() : 0.0;
    f.set(a, cplx(re, im));
  }
  return f;
}

json element_to_json(const AlgebraElement& f) {
  json coeffs = json::array();
  for (int a : f.support()) {
    cplx v = f.coeff(a);
    coeffs.push_back({f.groupoid()->label(a), v.real(), v.imag()});
  }
  return json{{"coeffs", coeffs}};
}

KernelFunction load_kernel(const json& j, const GroupoidPtr& g) {
  cvec values(g->arrow_count(), 0.0);
  for (const json& entry : need(j, "values")) {
    if (!entry.is_array() || entry.size() < 2 || entry.size() > 3)
      throw IoError("kernel: entries must be [label, re] or [label, re, im]");
    int a = g->index_of(entry[0].get<std::string>());
    if (a < 0)
      throw IoError("kernel: unknown arrow '" + entry[0].get<std::string>() + "'");
    double re = entry[1].get<double>();
    double im = entry.size() == 3 ? entry[2].get<double>() : 0.0;
    values[a] = cplx(re, im);
  }
  return KernelFunction(g, std::move(values));
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

std::string format_g9(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace gpdt
