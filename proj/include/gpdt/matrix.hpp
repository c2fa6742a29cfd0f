#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "gpdt/config.hpp"

namespace gpdt {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Dense row-major complex matrix, just enough linear algebra for the
// finite-dimensional representations handled here.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  Matrix adjoint() const;
  double frobenius() const;
  double max_abs() const;
  // max |A(i,j) - conj(A(j,i))|; 0 for a perfectly Hermitian matrix
  double hermitian_defect() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(cplx s);

  cvec apply(const cvec& v) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  cvec a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cplx s, Matrix a);

// ---- small vector helpers (used by the iterative eigensolver) ----

cplx dot(const cvec& a, const cvec& b);  // conjugate-linear in the first slot
double norm(const cvec& v);
void axpy(cplx alpha, const cvec& x, cvec& y);  // y += alpha x
void scale(cvec& v, cplx s);

}  // namespace gpdt
