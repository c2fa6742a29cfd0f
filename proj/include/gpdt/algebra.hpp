#pragma once

#include "gpdt/groupoid.hpp"
#include "gpdt/matrix.hpp"

namespace gpdt {

// An element of the convolution *-algebra C_c(G): a complex coefficient per
// arrow (stored densely; zero means absent).
class AlgebraElement {
 public:
  explicit AlgebraElement(GroupoidPtr g)
      : g_(std::move(g)), coeffs_(g_->arrow_count(), 0.0) {}

  static AlgebraElement delta(GroupoidPtr g, int arrow);
  static AlgebraElement indicator(GroupoidPtr g, const std::vector<int>& arrows);
  static AlgebraElement constant_one(GroupoidPtr g);     // chi_G
  static AlgebraElement unit_indicator(GroupoidPtr g);   // convolution identity

  const GroupoidPtr& groupoid() const { return g_; }
  cplx coeff(int arrow) const { return coeffs_[arrow]; }
  void set(int arrow, cplx v) { coeffs_[arrow] = v; }
  const cvec& coeffs() const { return coeffs_; }

  std::vector<int> support() const;
  double max_abs() const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(cplx s);

 private:
  GroupoidPtr g_;
  cvec coeffs_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(cplx s, AlgebraElement a);

// (f1 f2)(g) = sum over factorizations g = hk of f1(h) f2(k)
AlgebraElement convolve(const AlgebraElement& f1, const AlgebraElement& f2);

// f*(g) = conj(f(g^{-1}))
AlgebraElement adjoint(const AlgebraElement& f);

// Psi(f)(x) = sum over g in G^x of f(g), supported on units
AlgebraElement psi(const AlgebraElement& f);

// max over units of row/column absolute fibre sums
double i_norm(const AlgebraElement& f);

bool is_bisection_supported(const AlgebraElement& f);

double sup_difference(const AlgebraElement& a, const AlgebraElement& b);

// Laplacian of a family: sum of (phi - Psi(phi))* (phi - Psi(phi)).
AlgebraElement family_laplacian(const std::vector<AlgebraElement>& family);

// ---- positive / negative type kernels ----

// A totally defined function on arrows (complex for positive-type candidates,
// real nonnegative for negative-type candidates).
class KernelFunction {
 public:
  KernelFunction(GroupoidPtr g, cvec values);
  static KernelFunction constant(GroupoidPtr g, cplx value);

  const GroupoidPtr& groupoid() const { return g_; }
  cplx value(int arrow) const { return values_[arrow]; }
  void set(int arrow, cplx v) { values_[arrow] = v; }

 private:
  GroupoidPtr g_;
  cvec values_;
};

struct KernelCheck {
  bool ok = true;
  std::string reason;      // empty when ok
  std::string unit_label;  // offending unit when applicable
  double value = 0.0;      // offending eigenvalue / entry
};

// Gram matrices are taken over the full fibre G^x per unit; any finite tuple
// is a principal submatrix, so PSD there follows.
KernelCheck check_positive_type(const KernelFunction& phi,
                                const Tolerances& tol = {});
KernelCheck check_negative_type(const KernelFunction& f,
                                const Tolerances& tol = {});

// phi_t(g) = exp(-t F(g)); requires t > 0
KernelFunction schoenberg_transform(const KernelFunction& f, double t);

}  // namespace gpdt
