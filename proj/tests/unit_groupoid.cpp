#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gpdt/builders.hpp"

using namespace gpdt;

namespace {

// explicit table for Z/2 = {e, g}
FiniteGroupoid::Tables z2_tables() {
  FiniteGroupoid::Tables t;
  t.labels = {"e", "g"};
  t.source = {0, 0};
  t.range = {0, 0};
  t.inverse = {0, 1};
  t.units = {0};
  t.products = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  return t;
}

}  // namespace

TEST_CASE("pair groupoid shapes") {
  GroupoidPtr p1 = build_pair(1);
  CHECK(p1->arrow_count() == 1);
  CHECK(p1->unit_count() == 1);

  GroupoidPtr p2 = build_pair(2);
  CHECK(p2->arrow_count() == 4);
  CHECK(p2->unit_count() == 2);

  GroupoidPtr p3 = build_pair(3);
  CHECK(p3->arrow_count() == 9);
  CHECK(orbits(*p3).orbits.size() == 1);
  CHECK(orbits(*p3).orbits[0].size() == 3);

  CHECK_THROWS_AS(build_pair(0), Error);
}

TEST_CASE("pair groupoid fibres all have size n") {
  for (std::size_t n : {2u, 3u, 5u}) {
    GroupoidPtr p = build_pair(n);
    for (int u : p->units()) {
      CHECK(p->range_fiber(u).size() == n);
      CHECK(p->source_fiber(u).size() == n);
    }
  }
}

TEST_CASE("validator accepts every constructed groupoid") {
  std::vector<GroupoidPtr> gs;
  gs.push_back(build_pair(3));
  gs.push_back(build_group_cyclic(6).groupoid);
  gs.push_back(build_group_permutations({{1, 0, 2}, {1, 2, 0}}).groupoid);
  gs.push_back(build_group_matrices(3, {{0, 2, 1, 0}, {1, 1, 0, 1}}).groupoid);
  gs.push_back(disjoint_union(build_pair(2), build_pair(3)));
  {
    HlsChain chain{HlsChain::Parent::Z, {2, 4, 8}};
    gs.push_back(build_hls_truncation(chain, 3).groupoid);
  }
  gs.push_back(build_coarse_truncation({{3, {{0, 1}, {1, 2}, {0, 2}}}}).groupoid);
  for (const GroupoidPtr& g : gs) {
    ValidationReport rep = validate(*g);
    for (const Diagnostic& d : rep.diagnostics)
      MESSAGE(d.axiom, ": ", d.detail);
    CHECK(rep.ok());
    CHECK(!rep.associativity_sampled);
  }
}

TEST_CASE("validator flags a non-composable product") {
  FiniteGroupoid::Tables t = z2_tables();
  // glue a second unit that composes with nothing, then claim g * u = g
  t.labels.push_back("u");
  t.source.push_back(2);
  t.range.push_back(2);
  t.inverse.push_back(2);
  t.units.push_back(2);
  t.products.push_back({2, 2, 2});
  t.products.push_back({1, 2, 1});  // source(g) = e != u = range(u)
  ValidationReport rep = validate(*build_explicit(std::move(t)));
  bool found = false;
  for (const Diagnostic& d : rep.diagnostics) found |= d.axiom == "composability";
  CHECK(found);
}

TEST_CASE("validator names a broken associativity triple") {
  FiniteGroupoid::Tables t = z2_tables();
  t.products[3] = {1, 1, 1};  // g * g = g breaks associativity and inverses
  ValidationReport rep = validate(*build_explicit(std::move(t)));
  CHECK(!rep.ok());
  bool assoc = false, inv = false;
  for (const Diagnostic& d : rep.diagnostics) {
    assoc |= d.axiom == "associativity";
    inv |= d.axiom == "inverse-product";
  }
  CHECK((assoc || inv));
}

TEST_CASE("validator flags a missing composable product") {
  FiniteGroupoid::Tables t = z2_tables();
  t.products.pop_back();  // drop g * g
  ValidationReport rep = validate(*build_explicit(std::move(t)));
  bool found = false;
  for (const Diagnostic& d : rep.diagnostics) found |= d.axiom == "composability";
  CHECK(found);
}

TEST_CASE("group closure: Z/2 from a transposition") {
  GroupBuild g = build_group_permutations({{1, 0}});
  CHECK(g.groupoid->arrow_count() == 2);
  CHECK(g.groupoid->unit_count() == 1);
}

TEST_CASE("group closure: S3 from a transposition and a 3-cycle") {
  GroupBuild g = build_group_permutations({{1, 0, 2}, {1, 2, 0}});
  CHECK(g.groupoid->arrow_count() == 6);
  CHECK(g.generator_arrows.size() == 2);
  for (int a : g.generator_arrows) CHECK(a >= 0);
}

TEST_CASE("group closure: SL(2, Z/3) from S and T has order 24") {
  GroupBuild g = build_group_matrices(3, {{0, -1, 1, 0}, {1, 1, 0, 1}});
  CHECK(g.groupoid->arrow_count() == 24);
}

TEST_CASE("group closure respects the element cap") {
  CHECK_THROWS_AS(build_group_matrices(13, {{0, -1, 1, 0}, {1, 1, 0, 1}}, 100),
                  Error);
}

TEST_CASE("transformation groupoid: Z/2 swapping two points") {
  GroupBuild z2 = build_group_cyclic(2);
  GroupoidPtr g = build_transformation(z2, 2, {{1, 0}});
  CHECK(g->arrow_count() == 4);
  CHECK(g->unit_count() == 2);
  CHECK(orbits(*g).orbits.size() == 1);
  CHECK(validate(*g).ok());
}

TEST_CASE("transformation groupoid: trivial action matches the group") {
  GroupBuild z2 = build_group_cyclic(2);
  GroupoidPtr g = build_transformation(z2, 1, {{0}});
  CHECK(g->arrow_count() == z2.groupoid->arrow_count());
  CHECK(g->unit_count() == 1);
}

TEST_CASE("transformation groupoid: Z/3 rotating three points") {
  GroupBuild z3 = build_group_cyclic(3);
  GroupoidPtr g = build_transformation(z3, 3, {{1, 2, 0}});
  CHECK(g->arrow_count() == 9);
  CHECK(orbits(*g).orbits.size() == 1);
  CHECK(validate(*g).ok());
}

TEST_CASE("transformation groupoid arrow count is |group| x |points|") {
  GroupBuild s3 = build_group_permutations({{1, 0, 2}, {1, 2, 0}});
  GroupoidPtr g = build_transformation(s3, 3, {{1, 0, 2}, {1, 2, 0}});
  CHECK(g->arrow_count() == 18);
  CHECK(validate(*g).ok());
}

TEST_CASE("transformation groupoid rejects a non-action") {
  GroupBuild z2 = build_group_cyclic(2);
  // "action" of the order-2 generator by a 3-cycle is inconsistent
  CHECK_THROWS_AS(build_transformation(z2, 3, {{1, 2, 0}}), Error);
}

TEST_CASE("hls truncation: powers of two") {
  HlsChain chain{HlsChain::Parent::Z, {2, 4}};
  HlsTruncation h = build_hls_truncation(chain, 2);
  CHECK(h.groupoid->arrow_count() == 6);
  CHECK(h.groupoid->unit_count() == 2);
  CHECK(h.fiber_sizes == std::vector<std::size_t>{2, 4});
  CHECK(orbits(*h.groupoid).orbits.size() == 2);
  CHECK(validate(*h.groupoid).ok());
}

TEST_CASE("hls truncation: full kernel gives a single trivial fibre") {
  HlsChain chain{HlsChain::Parent::Z, {1}};
  HlsTruncation h = build_hls_truncation(chain, 1);
  CHECK(h.groupoid->arrow_count() == 1);
  CHECK(h.fiber_sizes == std::vector<std::size_t>{1});
}

TEST_CASE("hls truncation rejects a non-nested chain") {
  HlsChain chain{HlsChain::Parent::Z, {2, 3}};  // 3Z is not inside 2Z
  CHECK_THROWS_AS(build_hls_truncation(chain, 2), Error);
}

TEST_CASE("hls truncation over SL2Z congruence levels") {
  HlsChain chain{HlsChain::Parent::SL2Z, {2, 4}};
  HlsTruncation h = build_hls_truncation(chain, 2);
  CHECK(h.fiber_sizes == std::vector<std::size_t>{6, 48});
  CHECK(validate(*h.groupoid).ok());
}

TEST_CASE("coarse truncation: a single edge") {
  CoarseBuild cb = build_coarse_truncation({{2, {{0, 1}}}});
  CHECK(cb.groupoid->arrow_count() == 4);
  CHECK(cb.entourage.size() == 4);  // two units + both orientations
}

TEST_CASE("coarse truncation: K3") {
  CoarseBuild cb = build_coarse_truncation({{3, {{0, 1}, {1, 2}, {0, 2}}}});
  CHECK(cb.groupoid->arrow_count() == 9);
  CHECK(cb.entourage.size() == 9);  // 3 units + 6 oriented edge arrows
  std::size_t edge_arrows = 0;
  for (int a : cb.entourage)
    if (!cb.groupoid->is_unit(a)) ++edge_arrows;
  CHECK(edge_arrows == 6);
}

TEST_CASE("coarse truncation: two triangles") {
  SimpleGraph k3{3, {{0, 1}, {1, 2}, {0, 2}}};
  CoarseBuild cb = build_coarse_truncation({k3, k3});
  CHECK(cb.groupoid->arrow_count() == 18);
  CHECK(orbits(*cb.groupoid).orbits.size() == 2);
}

TEST_CASE("coarse truncation rejects a disconnected graph") {
  SimpleGraph bad{4, {{0, 1}, {2, 3}}};
  CHECK_THROWS_AS(build_coarse_truncation({bad}), Error);
}

TEST_CASE("disjoint union shapes and orbits") {
  GroupoidPtr u = disjoint_union(build_pair(2), build_pair(2));
  CHECK(u->arrow_count() == 8);
  CHECK(u->unit_count() == 4);
  CHECK(orbits(*u).orbits.size() == 2);

  GroupoidPtr v = disjoint_union(build_pair(3), build_pair(1));
  CHECK(v->arrow_count() == 10);

  GroupoidPtr w = disjoint_union(build_pair(2), build_pair(3));
  OrbitDecomposition dec = orbits(*w);
  std::vector<std::size_t> sizes;
  for (const auto& orbit : dec.orbits) sizes.push_back(orbit.size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{2, 3});
  CHECK(validate(*w).ok());
}

TEST_CASE("orbit count of a union is the sum of the parts") {
  GroupoidPtr a = disjoint_union(build_pair(2), build_pair(2));
  GroupoidPtr b = build_group_cyclic(3).groupoid;
  CHECK(orbits(*disjoint_union(a, b)).orbits.size() ==
        orbits(*a).orbits.size() + orbits(*b).orbits.size());
}

TEST_CASE("inverse is an involution that swaps fibres") {
  for (const GroupoidPtr& g :
       {build_pair(4), build_group_permutations({{1, 2, 0}}).groupoid}) {
    for (std::size_t a = 0; a < g->arrow_count(); ++a) {
      int ai = static_cast<int>(a);
      CHECK(g->inverse(g->inverse(ai)) == ai);
      CHECK(g->range(g->inverse(ai)) == g->source(ai));
    }
  }
}

TEST_CASE("generation closure check") {
  GroupoidPtr p2 = build_pair(2);
  int gen = p2->index_of("(0,1)");
  REQUIRE(gen >= 0);
  CHECK(generates(*p2, {gen}));

  GroupoidPtr u = disjoint_union(build_pair(2), build_pair(2));
  int half = u->index_of("0:(0,1)");
  REQUIRE(half >= 0);
  CHECK(!generates(*u, {half}));  // second block unreachable

  GroupBuild sl23 = build_group_matrices(3, {{0, -1, 1, 0}, {1, 1, 0, 1}});
  CHECK(generates(*sl23.groupoid, sl23.generator_arrows));
}

TEST_CASE("restriction to an orbit") {
  GroupoidPtr w = disjoint_union(build_pair(2), build_pair(3));
  OrbitDecomposition dec = orbits(*w);
  for (const auto& orbit : dec.orbits) {
    Restriction sub = restrict_to_units(w, orbit);
    CHECK(sub.groupoid->unit_count() == orbit.size());
    CHECK(sub.groupoid->arrow_count() == orbit.size() * orbit.size());
    CHECK(validate(*sub.groupoid).ok());
    for (std::size_t a = 0; a < sub.groupoid->arrow_count(); ++a)
      CHECK(w->label(sub.arrow_in_parent[a]) ==
            sub.groupoid->label(static_cast<int>(a)));
  }
  // a non-invariant unit set is rejected
  CHECK_THROWS_AS(restrict_to_units(w, {w->units()[0]}), Error);
}

TEST_CASE("sampled associativity path stays silent on valid input") {
  GroupoidPtr g = build_group_cyclic(64).groupoid;
  ValidateOptions opts;
  opts.max_triples = 1000;
  ValidationReport rep = validate(*g, opts);
  CHECK(rep.ok());
  CHECK(rep.associativity_sampled);
}
