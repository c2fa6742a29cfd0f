#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gpdt/kazhdan.hpp"

using namespace gpdt;

namespace {

BisectionFamily delta_family(const GroupoidPtr& g, std::vector<int> arrows) {
  std::vector<AlgebraElement> members;
  for (int a : arrows) members.push_back(AlgebraElement::delta(g, a));
  return BisectionFamily::from_elements(g, std::move(members));
}

}  // namespace

TEST_CASE("family validation catches bad members") {
  GroupoidPtr p2 = build_pair(2);
  // two arrows sharing a range is not a bisection
  AlgebraElement bad = AlgebraElement::delta(p2, p2->index_of("(0,1)")) +
                       AlgebraElement::delta(p2, p2->index_of("(0,0)"));
  CHECK_THROWS_WITH_AS(BisectionFamily::from_elements(p2, {bad}),
                       doctest::Contains("bisection"), Error);
  // values outside [0,1]
  AlgebraElement big = cplx(2.0) * AlgebraElement::delta(p2, p2->index_of("(0,1)"));
  CHECK_THROWS_AS(BisectionFamily::from_elements(p2, {big}), Error);
  // non-generating
  GroupoidPtr w = disjoint_union(build_pair(2), build_pair(2));
  AlgebraElement half = AlgebraElement::delta(w, w->index_of("0:(0,1)"));
  CHECK_THROWS_WITH_AS(BisectionFamily::from_elements(w, {half}),
                       doctest::Contains("generate"), Error);
}

TEST_CASE("laplacian of {delta_g} on Z/3 is 2e - g - g^2") {
  GroupBuild z3 = build_group_cyclic(3);
  int g = z3.generator_arrows[0];
  LaplacianElement lap = laplacian(delta_family(z3.groupoid, {g}));
  AlgebraElement want =
      cplx(2.0) * AlgebraElement::delta(z3.groupoid, z3.groupoid->units()[0]) -
      AlgebraElement::delta(z3.groupoid, g) -
      AlgebraElement::delta(z3.groupoid, z3.groupoid->inverse(g));
  CHECK(sup_difference(lap.element, want) == 0.0);
  CHECK(sup_difference(lap.element, adjoint(lap.element)) == 0.0);
}

TEST_CASE("laplacian of the P2 edge family realizes as twice the edge Laplacian") {
  GroupoidPtr p2 = build_pair(2);
  BisectionFamily fam = delta_family(
      p2, {p2->index_of("(0,1)"), p2->index_of("(1,0)")});
  LaplacianElement lap = laplacian(fam);
  for (int u : p2->units()) {
    Matrix m = regular_rep(p2, u).realize(lap.element);
    Matrix want(2, 2);
    want(0, 0) = 2;
    want(0, 1) = -2;
    want(1, 0) = -2;
    want(1, 1) = 2;
    CHECK((m - want).max_abs() == 0.0);
    EighResult eg = eigh(m);
    CHECK(spectral_report(eg.eigenvalues, 1e-9).kernel_dim == 1);
  }
}

TEST_CASE("realized laplacians are PSD in every representation kind") {
  GroupBuild s3 = build_group_permutations({{1, 0, 2}, {1, 2, 0}});
  BisectionFamily fam = canonical_family(s3.groupoid, s3.generator_arrows);
  AlgebraElement delta = laplacian(fam).element;
  for (const MatrixRepresentation& rep : default_representations(s3.groupoid)) {
    EighResult eg = eigh(rep.realize(delta));
    CHECK(eg.eigenvalues.front() >= -1e-9);
  }
}

TEST_CASE("canonical family contents") {
  GroupBuild z5 = build_group_cyclic(5);
  BisectionFamily f1 = canonical_family(z5.groupoid, z5.generator_arrows);
  CHECK(f1.size() == 3);  // g, g^{-1}, unit indicator

  GroupBuild z2 = build_group_cyclic(2);
  BisectionFamily f2 = canonical_family(z2.groupoid, z2.generator_arrows);
  CHECK(f2.size() == 2);  // g is its own inverse

  GroupoidPtr p2 = build_pair(2);
  BisectionFamily f3 = canonical_family(p2, {p2->index_of("(0,1)")});
  CHECK(f3.size() == 3);  // (0,1), (1,0), units

  GroupBuild sl23 = build_group_matrices(3, {{0, -1, 1, 0}, {1, 1, 0, 1}});
  BisectionFamily f4 = canonical_family(sl23.groupoid, sl23.generator_arrows);
  CHECK(f4.size() == 5);  // S, S^{-1}, T, T^{-1}, units

  CHECK_THROWS_AS(canonical_family(disjoint_union(p2, p2), {0}), Error);
}

TEST_CASE("kazhdan constant of Z/3 with the single-generator family") {
  GroupBuild z3 = build_group_cyclic(3);
  BisectionFamily fam = delta_family(z3.groupoid, {z3.generator_arrows[0]});
  KazhdanCertificate cert = kazhdan_constant(
      z3.groupoid, fam, default_representations(z3.groupoid));
  CHECK(cert.lambda1 == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(cert.constant == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
  CHECK(cert.sound);
  // the trivial representation of a group is vacuous and excluded
  bool saw_vacuous = false;
  for (const RepGapEntry& e : cert.per_rep) saw_vacuous |= e.vacuous;
  CHECK(saw_vacuous);
}

TEST_CASE("kazhdan constant of P2 with both edge arrows") {
  GroupoidPtr p2 = build_pair(2);
  BisectionFamily fam = delta_family(
      p2, {p2->index_of("(0,1)"), p2->index_of("(1,0)")});
  KazhdanCertificate cert =
      kazhdan_constant(p2, fam, default_representations(p2));
  CHECK(cert.lambda1 == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(cert.constant == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(cert.sound);
}

TEST_CASE("kazhdan constant of Z/512 matches the circulant closed form") {
  GroupBuild z = build_group_cyclic(512);
  BisectionFamily fam = delta_family(z.groupoid, {z.generator_arrows[0]});
  MatrixRepresentation reg = regular_rep(z.groupoid, z.groupoid->units()[0]);
  KazhdanCertificate cert = kazhdan_constant(z.groupoid, fam, {reg});
  double expected = 2.0 - 2.0 * std::cos(2.0 * M_PI / 512.0);
  CHECK(std::abs(cert.lambda1 - expected) <= 1e-7 * expected);
}

TEST_CASE("trivial groupoid certificates are vacuous") {
  GroupoidPtr p1 = build_pair(1);
  BisectionFamily fam{p1, {AlgebraElement::unit_indicator(p1)}};
  KazhdanCertificate cert =
      kazhdan_constant(p1, fam, default_representations(p1));
  CHECK(cert.vacuous);
  CHECK(std::isinf(cert.lambda1));
}

TEST_CASE("kazhdan projection of P_n is the averaging element chi / n") {
  for (std::size_t n : {2u, 3u, 5u}) {
    GroupoidPtr p = build_pair(n);
    std::vector<int> gens;
    for (std::size_t i = 1; i < n; ++i)
      gens.push_back(p->index_of("(" + std::to_string(0) + "," + std::to_string(i) + ")"));
    BisectionFamily fam = canonical_family(p, gens);
    AlgebraElement proj = kazhdan_projection(p, fam);
    AlgebraElement want =
        cplx(1.0 / static_cast<double>(n)) * AlgebraElement::constant_one(p);
    CHECK(sup_difference(proj, want) <= 1e-9);
  }
}

TEST_CASE("kazhdan projection of Z/n matches the group-averaging oracle") {
  for (long n : {2L, 4L, 6L, 9L}) {
    GroupBuild z = build_group_cyclic(n);
    BisectionFamily fam = canonical_family(z.groupoid, z.generator_arrows);
    AlgebraElement proj = kazhdan_projection(z.groupoid, fam);
    AlgebraElement want =
        cplx(1.0 / static_cast<double>(n)) * AlgebraElement::constant_one(z.groupoid);
    CHECK(sup_difference(proj, want) <= 1e-9);
  }
}

TEST_CASE("kazhdan projection respects disjoint-union blocks") {
  GroupoidPtr w = disjoint_union(build_pair(2), build_group_cyclic(3).groupoid);
  std::vector<int> gens{w->index_of("0:(0,1)"), w->index_of("1:z1")};
  BisectionFamily fam = canonical_family(w, gens);
  AlgebraElement proj = kazhdan_projection(w, fam);
  for (std::size_t a = 0; a < w->arrow_count(); ++a) {
    double want = w->label(static_cast<int>(a))[0] == '0' ? 0.5 : 1.0 / 3.0;
    CHECK(std::abs(proj.coeff(static_cast<int>(a)) - cplx(want)) <= 1e-9);
  }
}

TEST_CASE("kazhdan projection refuses an insufficient gap") {
  GroupBuild z = build_group_cyclic(64);
  BisectionFamily fam = delta_family(z.groupoid, {z.generator_arrows[0]});
  Tolerances coarse;
  coarse.tau_zero = 1e-3;  // 10 * tau_zero exceeds the Z/64 gap
  CHECK_THROWS_WITH_AS(kazhdan_projection(z.groupoid, fam, coarse),
                       doctest::Contains("gap"), Error);
}

TEST_CASE("expectation law on P2, Z/n, and a disjoint union") {
  GroupoidPtr p2 = build_pair(2);
  BisectionFamily fam2 = canonical_family(p2, {p2->index_of("(0,1)")});
  ExpectationReport r2 = expectation_law_check(p2, kazhdan_projection(p2, fam2));
  CHECK(r2.pass);
  CHECK(r2.max_deviation <= 1e-12);
  for (const ExpectationRow& row : r2.rows)
    CHECK(row.expectation == doctest::Approx(0.5));

  GroupBuild z6 = build_group_cyclic(6);
  BisectionFamily fam6 = canonical_family(z6.groupoid, z6.generator_arrows);
  ExpectationReport r6 =
      expectation_law_check(z6.groupoid, kazhdan_projection(z6.groupoid, fam6));
  CHECK(r6.pass);
  CHECK(r6.rows[0].expectation == doctest::Approx(1.0 / 6.0));

  GroupoidPtr w = disjoint_union(build_pair(2), build_pair(3));
  std::vector<int> gens{w->index_of("0:(0,1)"), w->index_of("1:(0,1)"),
                        w->index_of("1:(1,2)")};
  BisectionFamily famw = canonical_family(w, gens);
  ExpectationReport rw = expectation_law_check(w, kazhdan_projection(w, famw));
  CHECK(rw.pass);
  std::vector<double> want{0.5, 0.5, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  REQUIRE(rw.rows.size() == 5);
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(rw.rows[k].expectation == doctest::Approx(want[k]).epsilon(1e-9));
}

TEST_CASE("group laplacian from the canonical family matches the matrix built "
          "from left-multiplication tables") {
  GroupBuild s3 = build_group_permutations({{1, 0, 2}, {1, 2, 0}});
  const GroupElements& el = *s3.elements;
  BisectionFamily fam = canonical_family(s3.groupoid, s3.generator_arrows);
  Matrix realized = regular_rep(s3.groupoid, s3.groupoid->units()[0])
                        .realize(laplacian(fam).element);

  // independent route: permutation matrices of left multiplication in the
  // basis order used by the regular representation
  const std::size_t n = el.size();
  std::vector<int> basis_el(n);
  MatrixRepresentation reg = regular_rep(s3.groupoid, s3.groupoid->units()[0]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = 0; e < n; ++e)
      if (el.label(static_cast<int>(e)) == reg.basis_labels()[i])
        basis_el[i] = static_cast<int>(e);
  }
  Matrix manual(n, n);
  std::vector<int> family_elements;
  for (const AlgebraElement& f : fam.members) {
    std::vector<int> sup = f.support();
    if (sup.size() == 1 && !s3.groupoid->is_unit(sup[0])) {
      for (std::size_t e = 0; e < n; ++e)
        if (el.label(static_cast<int>(e)) == s3.groupoid->label(sup[0]))
          family_elements.push_back(static_cast<int>(e));
    }
  }
  for (int t : family_elements) {
    Matrix u(n, n);
    for (std::size_t b = 0; b < n; ++b) {
      int tb = el.mul(t, basis_el[b]);
      for (std::size_t a = 0; a < n; ++a)
        if (basis_el[a] == tb) u(a, b) = 1.0;
    }
    Matrix d = Matrix::identity(n) - u;
    manual += d.adjoint() * d;
  }
  CHECK((realized - manual).max_abs() == 0.0);
}

TEST_CASE("laplacian nullspaces equal the constant subspaces across kinds") {
  GroupBuild z4 = build_group_cyclic(4);
  GroupoidPtr g = disjoint_union(build_pair(2), z4.groupoid);
  std::vector<int> gens{g->index_of("0:(0,1)"), g->index_of("1:z1")};
  BisectionFamily fam = canonical_family(g, gens);
  AlgebraElement delta = laplacian(fam).element;

  std::vector<MatrixRepresentation> reps = default_representations(g);
  reps.push_back(direct_sum({regular_rep(g, g->units()[0]),
                             trivial_rep(g, uniform_measure(*g))}));
  for (const MatrixRepresentation& rep : reps) {
    Matrix m = rep.realize(delta);
    EighResult eg = eigh(m);
    std::size_t kdim = spectral_report(eg.eigenvalues, 1e-9).kernel_dim;
    Matrix null_basis(m.rows(), kdim);
    for (std::size_t c = 0; c < kdim; ++c)
      for (std::size_t i = 0; i < m.rows(); ++i)
        null_basis(i, c) = eg.vectors(i, c);
    Matrix constant_basis = constant_vectors(rep, fam.members);
    REQUIRE(constant_basis.cols() == kdim);
    CHECK(subspace_distance(null_basis, constant_basis) <= 1e-7);
  }
}

TEST_CASE("exactness witness on an HLS truncation") {
  HlsChain chain{HlsChain::Parent::Z, {2, 4, 8, 16, 32, 64}};
  HlsTruncation h = build_hls_truncation(chain, 6);
  CHECK(exactness_witness(h, 3) == 1.0);
  CHECK(exactness_witness(h, 6) == 0.0);
  for (std::size_t m = 0; m < 6; ++m) CHECK(exactness_witness(h, m) == 1.0);
  CHECK_THROWS_AS(exactness_witness(h, 7), Error);
}

TEST_CASE("hls gap profile over powers of two follows the circulant closed form") {
  HlsChain chain{HlsChain::Parent::Z, {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024}};
  std::vector<FiberGapRow> rows = hls_gap_profile(chain, 10);
  REQUIRE(rows.size() == 10);
  double prev = std::numeric_limits<double>::infinity();
  for (const FiberGapRow& row : rows) {
    double expected = 2.0 - 2.0 * std::cos(2.0 * M_PI / static_cast<double>(row.size));
    CHECK(std::abs(row.gap - expected) <= 1e-7 * expected);
    CHECK(row.gap < prev);
    prev = row.gap;
  }
  CHECK(rows.back().gap < 1e-4);
}

TEST_CASE("hls gap profile is constant on a constant chain") {
  HlsChain chain{HlsChain::Parent::Z, {4, 4, 4}};
  std::vector<FiberGapRow> rows = hls_gap_profile(chain, 3);
  CHECK(rows[0].gap == doctest::Approx(rows[1].gap));
  CHECK(rows[1].gap == doctest::Approx(rows[2].gap));
}

TEST_CASE("hls gap profile marks trivial fibres as vacuous") {
  HlsChain chain{HlsChain::Parent::Z, {1}};
  std::vector<FiberGapRow> rows = hls_gap_profile(chain, 1);
  CHECK(std::isinf(rows[0].gap));
}

TEST_CASE("small SL2 fibres have positive gaps matching the dense eigensolver") {
  HlsChain chain{HlsChain::Parent::SL2Z, {3, 5}};
  std::vector<FiberGapRow> rows = hls_gap_profile(chain, 2);
  CHECK(rows[0].size == 24);
  CHECK(rows[1].size == 120);
  for (const FiberGapRow& row : rows) CHECK(row.gap > 0.1);

  // dense cross-check on the 24-dimensional fibre
  GroupBuild sl23 = build_group_matrices(3, {{0, -1, 1, 0}, {1, 1, 0, 1}});
  std::vector<AlgebraElement> members;
  for (int a : sl23.generator_arrows)
    members.push_back(AlgebraElement::delta(sl23.groupoid, a));
  AlgebraElement delta = family_laplacian(members);
  Matrix m = regular_rep(sl23.groupoid, sl23.groupoid->units()[0]).realize(delta);
  SpectralReport rep = spectral_report(eigh(m).eigenvalues, 1e-9);
  CHECK(std::abs(rows[0].gap - rep.gap) <= 1e-6 * rep.gap);
}
