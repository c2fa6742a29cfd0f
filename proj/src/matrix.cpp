#include "gpdt/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

namespace gpdt {

std::size_t thread_budget() {
  static const std::size_t budget = [] {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (hw > 8) hw = 8;
    if (const char* env = std::getenv("GPDT_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) hw = static_cast<std::size_t>(v);
    }
    return hw;
  }();
  return budget;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

double Matrix::frobenius() const {
  double s = 0;
  for (const cplx& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0;
  for (const cplx& z : a_) m = std::max(m, std::abs(z));
  return m;
}

double Matrix::hermitian_defect() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double d = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

Matrix& Matrix::operator*=(cplx s) {
  for (cplx& z : a_) z *= s;
  return *this;
}

cvec Matrix::apply(const cvec& v) const {
  if (v.size() != cols_) throw Error("matrix apply: size mismatch");
  cvec out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    cplx acc = 0.0;
    const cplx* row = &a_[i * cols_];
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix product: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator*(cplx s, Matrix a) { return a *= s; }

cplx dot(const cvec& a, const cvec& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const cvec& v) {
  double s = 0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

void axpy(cplx alpha, const cvec& x, cvec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(cvec& v, cplx s) {
  for (cplx& z : v) z *= s;
}

}  // namespace gpdt
