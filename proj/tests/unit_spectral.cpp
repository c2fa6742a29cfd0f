#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gpdt/spectral.hpp"

using namespace gpdt;

namespace {

// Independent oracle: eigenvalues of a 3x3 Hermitian matrix as the roots of
// its characteristic polynomial, via the trigonometric cubic formula.
std::vector<double> cubic_roots_of_char_poly(const Matrix& a) {
  // det(xI - A) = x^3 + c2 x^2 + c1 x + c0
  const cplx a00 = a(0, 0), a01 = a(0, 1), a02 = a(0, 2);
  const cplx a11 = a(1, 1), a12 = a(1, 2), a22 = a(2, 2);
  const double tr = (a00 + a11 + a22).real();
  const double sum2 =
      (a00 * a11 + a00 * a22 + a11 * a22).real() -
      (std::norm(a01) + std::norm(a02) + std::norm(a12));
  const double det =
      (a00 * a11 * a22 + a01 * a12 * std::conj(a02) +
       a02 * std::conj(a01) * std::conj(a12)).real() -
      (std::norm(a02) * a11.real() + std::norm(a12) * a00.real() +
       std::norm(a01) * a22.real());
  // roots of x^3 - tr x^2 + sum2 x - det
  const double p = sum2 - tr * tr / 3.0;
  const double q = -det + tr * sum2 / 3.0 - 2.0 * tr * tr * tr / 27.0;
  const double m = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
  double arg = (m == 0.0) ? 0.0 : 3.0 * q / (p * m);
  arg = std::clamp(arg, -1.0, 1.0);
  const double theta = std::acos(arg) / 3.0;
  std::vector<double> roots;
  for (int k = 0; k < 3; ++k)
    roots.push_back(tr / 3.0 +
                    m * std::cos(theta - 2.0 * M_PI * static_cast<double>(k) / 3.0));
  std::sort(roots.begin(), roots.end());
  return roots;
}

Matrix random_hermitian(std::size_t n, Rng& rng) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = rng.uniform_pm1();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = cplx(rng.uniform_pm1(), rng.uniform_pm1());
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

Matrix cycle_laplacian(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 2.0;
    m(i, (i + 1) % n) -= 1.0;
    m((i + 1) % n, i) -= 1.0;
  }
  return m;
}

}  // namespace

TEST_CASE("eigh on the edge Laplacian") {
  Matrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = -1;
  a(1, 0) = -1;
  a(1, 1) = 1;
  EighResult eg = eigh(a);
  CHECK(eg.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eg.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("eigh on the identity") {
  EighResult eg = eigh(Matrix::identity(7));
  for (double ev : eg.eigenvalues) CHECK(ev == doctest::Approx(1.0));
}

TEST_CASE("eigh matches the cubic characteristic-polynomial oracle") {
  Rng rng(kDefaultSeed);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix a = random_hermitian(3, rng);
    EighResult eg = eigh(a);
    std::vector<double> oracle = cubic_roots_of_char_poly(a);
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(eg.eigenvalues[k] - oracle[k]) < 1e-9);
  }
}

TEST_CASE("eigh reconstruction and orthonormality") {
  Rng rng(11);
  for (std::size_t n : {2u, 5u, 16u, 40u}) {
    Matrix a = random_hermitian(n, rng);
    EighResult eg = eigh(a);
    Matrix lam(n, n);
    for (std::size_t i = 0; i < n; ++i) lam(i, i) = eg.eigenvalues[i];
    Matrix recon = eg.vectors * lam * eg.vectors.adjoint();
    CHECK((recon - a).frobenius() <= 1e-9 * std::max(1.0, a.frobenius()));
    Matrix gram = eg.vectors.adjoint() * eg.vectors;
    CHECK((gram - Matrix::identity(n)).max_abs() <= 1e-10);
  }
}

TEST_CASE("eigh rejects non-Hermitian input") {
  Matrix a(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(eigh(a), Error);
}

TEST_CASE("spectral_report counts the kernel and finds the gap") {
  SpectralReport rep = spectral_report({3.0, 0.0, 1e-12, 0.5}, 1e-9);
  CHECK(rep.kernel_dim == 2);
  CHECK(rep.gap == doctest::Approx(0.5));
  SpectralReport none = spectral_report({0.0, 1e-13}, 1e-9);
  CHECK(none.kernel_dim == 2);
  CHECK(none.gap == 0.0);
}

TEST_CASE("smallest_nonzero_eig on the edge Laplacian") {
  Matrix a = cycle_laplacian(2);  // [[2,-2],[-2,2]] is C_2; use explicit edge
  Matrix edge(2, 2);
  edge(0, 0) = 1;
  edge(0, 1) = -1;
  edge(1, 0) = -1;
  edge(1, 1) = 1;
  cvec ones(2, 1.0 / std::sqrt(2.0));
  CHECK(smallest_nonzero_eig(edge, {ones}) == doctest::Approx(2.0).epsilon(1e-9));
  (void)a;
}

TEST_CASE("smallest_nonzero_eig matches the circulant closed form") {
  for (std::size_t n : {4u, 7u, 12u, 64u, 257u}) {
    Matrix lap = cycle_laplacian(n);
    cvec ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double expected = 2.0 - 2.0 * std::cos(2.0 * M_PI / static_cast<double>(n));
    double got = smallest_nonzero_eig(lap, {ones});
    CHECK(std::abs(got - expected) <= 1e-7 * expected);
  }
}

TEST_CASE("smallest_nonzero_eig on K3") {
  Matrix lap(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) lap(i, j) = i == j ? 2.0 : -1.0;
  cvec ones(3, 1.0 / std::sqrt(3.0));
  CHECK(smallest_nonzero_eig(lap, {ones}) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("smallest_nonzero_eig agrees with eigh below 600 dimensions") {
  Rng rng(23);
  for (std::size_t n : {24u, 60u, 120u}) {
    // random PSD with a known one-dimensional kernel
    Matrix b = random_hermitian(n, rng);
    Matrix a = b * b.adjoint();
    // push the constant vector into the kernel: A <- P A P
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        p(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(n);
    a = p * a * p;
    EighResult eg = eigh(a);
    SpectralReport rep = spectral_report(eg.eigenvalues, 1e-9);
    REQUIRE(rep.kernel_dim == 1);
    cvec ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double gap = smallest_nonzero_eig(a, {ones});
    CHECK(std::abs(gap - rep.gap) <= 1e-6 * std::max(1.0, rep.gap));
  }
}

TEST_CASE("spectral_projection on the edge Laplacian at threshold one") {
  Matrix edge(2, 2);
  edge(0, 0) = 1;
  edge(0, 1) = -1;
  edge(1, 0) = -1;
  edge(1, 1) = 1;
  Matrix p = spectral_projection(edge, 1.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(p(i, j) - cplx(0.5)) <= 1e-10);
}

TEST_CASE("spectral_projection of the identity below threshold is zero") {
  Matrix p = spectral_projection(Matrix::identity(4), 0.5);
  CHECK(p.max_abs() == 0.0);
}

TEST_CASE("spectral_projection is idempotent and self-adjoint on random PSD") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 6 + trial;
    Matrix b = random_hermitian(n, rng);
    Matrix a = b * b.adjoint();
    EighResult eg = eigh(a);
    double threshold = 0.5 * (eg.eigenvalues[n / 2] + eg.eigenvalues[n / 2 + 1]);
    if (eg.eigenvalues[n / 2 + 1] - eg.eigenvalues[n / 2] < 1e-6) continue;
    Matrix p = spectral_projection(a, threshold);
    CHECK((p * p - p).max_abs() <= 1e-8);
    CHECK((p.adjoint() - p).max_abs() <= 1e-8);
    // commutes with A and the kept part stays below the threshold in norm
    CHECK((a * p - p * a).max_abs() <= 1e-8 * std::max(1.0, a.frobenius()));
  }
}

TEST_CASE("spectral_projection refuses a threshold on top of an eigenvalue") {
  CHECK_THROWS_AS(spectral_projection(Matrix::identity(3), 1.0 + 5e-10), Error);
}

TEST_CASE("operator_norm on simple cases") {
  Matrix ones(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) ones(i, j) = 1.0;
  CHECK(operator_norm(ones) == doctest::Approx(2.0));
  Matrix shift(3, 3);
  shift(0, 1) = 1.0;
  shift(1, 2) = 1.0;  // non-Hermitian path
  CHECK(operator_norm(shift) == doctest::Approx(1.0));
}

TEST_CASE("subspace_distance separates orthogonal lines") {
  Matrix u(2, 1), v(2, 1), w(2, 1);
  u(0, 0) = 1.0;
  v(1, 0) = 1.0;
  w(0, 0) = 1.0;
  CHECK(subspace_distance(u, v) == doctest::Approx(1.0));
  CHECK(subspace_distance(u, w) == doctest::Approx(0.0));
}
