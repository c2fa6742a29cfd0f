#include "gpdt/algebra.hpp"

#include <cmath>

#include "gpdt/spectral.hpp"

namespace gpdt {

AlgebraElement AlgebraElement::delta(GroupoidPtr g, int arrow) {
  AlgebraElement f(std::move(g));
  f.set(arrow, 1.0);
  return f;
}

AlgebraElement AlgebraElement::indicator(GroupoidPtr g,
                                         const std::vector<int>& arrows) {
  AlgebraElement f(std::move(g));
  for (int a : arrows) f.set(a, 1.0);
  return f;
}

AlgebraElement AlgebraElement::constant_one(GroupoidPtr g) {
  AlgebraElement f(g);
  for (std::size_t a = 0; a < g->arrow_count(); ++a)
    f.set(static_cast<int>(a), 1.0);
  return f;
}

AlgebraElement AlgebraElement::unit_indicator(GroupoidPtr g) {
  AlgebraElement f(g);
  for (int u : g->units()) f.set(u, 1.0);
  return f;
}

std::vector<int> AlgebraElement::support() const {
  std::vector<int> s;
  for (std::size_t a = 0; a < coeffs_.size(); ++a)
    if (coeffs_[a] != cplx(0.0)) s.push_back(static_cast<int>(a));
  return s;
}

double AlgebraElement::max_abs() const {
  double m = 0;
  for (const cplx& z : coeffs_) m = std::max(m, std::abs(z));
  return m;
}

namespace {
void require_same(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.groupoid() != b.groupoid())
    throw Error("algebra elements live on different groupoids");
}
}  // namespace

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  require_same(*this, o);
  for (std::size_t a = 0; a < coeffs_.size(); ++a) coeffs_[a] += o.coeffs_[a];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  require_same(*this, o);
  for (std::size_t a = 0; a < coeffs_.size(); ++a) coeffs_[a] -= o.coeffs_[a];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
  for (cplx& z : coeffs_) z *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }

AlgebraElement convolve(const AlgebraElement& f1, const AlgebraElement& f2) {
  require_same(f1, f2);
  const FiniteGroupoid& g = *f1.groupoid();
  AlgebraElement out(f1.groupoid());
  for (int h : f1.support()) {
    const cplx c1 = f1.coeff(h);
    for (int k : g.range_fiber(g.source(h))) {
      const cplx c2 = f2.coeff(k);
      if (c2 == cplx(0.0)) continue;
      int hk = g.compose(h, k);
      if (hk < 0) throw Error("convolve: composition table is incomplete");
      out.set(hk, out.coeff(hk) + c1 * c2);
    }
  }
  return out;
}

AlgebraElement adjoint(const AlgebraElement& f) {
  const FiniteGroupoid& g = *f.groupoid();
  AlgebraElement out(f.groupoid());
  for (int a : f.support())
    out.set(g.inverse(a), std::conj(f.coeff(a)));
  return out;
}

AlgebraElement psi(const AlgebraElement& f) {
  const FiniteGroupoid& g = *f.groupoid();
  AlgebraElement out(f.groupoid());
  for (int u : g.units()) {
    cplx acc = 0.0;
    for (int a : g.range_fiber(u)) acc += f.coeff(a);
    out.set(u, acc);
  }
  return out;
}

double i_norm(const AlgebraElement& f) {
  const FiniteGroupoid& g = *f.groupoid();
  double best = 0;
  for (int u : g.units()) {
    double row = 0, col = 0;
    for (int a : g.range_fiber(u)) row += std::abs(f.coeff(a));
    for (int a : g.source_fiber(u)) col += std::abs(f.coeff(a));
    best = std::max({best, row, col});
  }
  return best;
}

bool is_bisection_supported(const AlgebraElement& f) {
  const FiniteGroupoid& g = *f.groupoid();
  std::vector<int> seen_r(g.unit_count(), 0), seen_s(g.unit_count(), 0);
  for (int a : f.support()) {
    int r = g.unit_ordinal(g.range(a));
    int s = g.unit_ordinal(g.source(a));
    if (r < 0 || s < 0) return false;
    if (seen_r[r]++ || seen_s[s]++) return false;
  }
  return true;
}

double sup_difference(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a, b);
  double m = 0;
  for (std::size_t k = 0; k < a.coeffs().size(); ++k)
    m = std::max(m, std::abs(a.coeffs()[k] - b.coeffs()[k]));
  return m;
}

AlgebraElement family_laplacian(const std::vector<AlgebraElement>& family) {
  if (family.empty()) throw Error("family_laplacian: empty family");
  AlgebraElement delta(family.front().groupoid());
  for (const AlgebraElement& phi : family) {
    AlgebraElement d = phi - psi(phi);
    delta += convolve(adjoint(d), d);
  }
  return delta;
}

// ---- kernels ----

KernelFunction::KernelFunction(GroupoidPtr g, cvec values)
    : g_(std::move(g)), values_(std::move(values)) {
  if (values_.size() != g_->arrow_count())
    throw Error("kernel function must be defined on every arrow");
}

KernelFunction KernelFunction::constant(GroupoidPtr g, cplx value) {
  cvec v(g->arrow_count(), value);
  return KernelFunction(std::move(g), std::move(v));
}

KernelCheck check_positive_type(const KernelFunction& phi, const Tolerances& tol) {
  const FiniteGroupoid& g = *phi.groupoid();
  for (int u : g.units()) {
    if (std::abs(phi.value(u) - cplx(1.0)) > 1e-12)
      return {false, "phi(x) != 1 on a unit", g.label(u), std::abs(phi.value(u))};
  }
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    int ai = static_cast<int>(a);
    if (std::abs(phi.value(g.inverse(ai)) - std::conj(phi.value(ai))) > 1e-12)
      return {false, "phi(g^{-1}) != conj(phi(g))", g.label(ai), 0.0};
  }
  for (int u : g.units()) {
    const auto& fiber = g.range_fiber(u);
    const std::size_t m = fiber.size();
    Matrix gram(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        int gij = g.compose(g.inverse(fiber[i]), fiber[j]);
        if (gij < 0) throw Error("check_positive_type: incomplete table");
        gram(i, j) = phi.value(gij);
      }
    EighResult eg = eigh(gram);
    if (!eg.eigenvalues.empty() && eg.eigenvalues.front() < -tol.tau_psd)
      return {false, "Gram matrix not positive semidefinite", g.label(u),
              eg.eigenvalues.front()};
  }
  return {};
}

KernelCheck check_negative_type(const KernelFunction& f, const Tolerances& tol) {
  const FiniteGroupoid& g = *f.groupoid();
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    int ai = static_cast<int>(a);
    const cplx v = f.value(ai);
    if (std::abs(v.imag()) > 1e-12 || v.real() < -1e-12)
      return {false, "F is not real and nonnegative", g.label(ai), v.real()};
  }
  for (int u : g.units())
    if (std::abs(f.value(u)) > 1e-12)
      return {false, "F does not vanish on a unit", g.label(u),
              f.value(u).real()};
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    int ai = static_cast<int>(a);
    if (std::abs(f.value(g.inverse(ai)) - f.value(ai)) > 1e-12)
      return {false, "F is not symmetric", g.label(ai), 0.0};
  }
  for (int u : g.units()) {
    const auto& fiber = g.range_fiber(u);
    const std::size_t m = fiber.size();
    if (m < 2) continue;
    Matrix q(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        int gij = g.compose(g.inverse(fiber[i]), fiber[j]);
        if (gij < 0) throw Error("check_negative_type: incomplete table");
        q(i, j) = f.value(gij).real();
      }
    // restrict the form to the zero-sum subspace: P Q P with P = I - J/m
    Matrix p(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        p(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(m);
    Matrix pqp = p * q * p;
    EighResult eg = eigh(pqp);
    if (!eg.eigenvalues.empty() && eg.eigenvalues.back() > tol.tau_psd)
      return {false, "quadratic form positive on the zero-sum subspace",
              g.label(u), eg.eigenvalues.back()};
  }
  return {};
}

KernelFunction schoenberg_transform(const KernelFunction& f, double t) {
  if (!(t > 0)) throw Error("schoenberg_transform: t must be positive");
  const FiniteGroupoid& g = *f.groupoid();
  cvec values(g.arrow_count());
  for (std::size_t a = 0; a < g.arrow_count(); ++a)
    values[a] = std::exp(-t * f.value(static_cast<int>(a)).real());
  return KernelFunction(f.groupoid(), std::move(values));
}

}  // namespace gpdt
