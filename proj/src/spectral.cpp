#include "gpdt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gpdt {

namespace {

double offdiag_frobenius(const Matrix& a) {
  double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EighResult eigh(const Matrix& a0) {
  const std::size_t n = a0.rows();
  if (a0.cols() != n) throw Error("eigh: matrix not square");
  if (n > kDenseEigCap)
    throw Error("eigh: dimension " + std::to_string(n) +
                " exceeds dense cap " + std::to_string(kDenseEigCap));

  const double scale0 = std::max(a0.frobenius(), 1e-300);
  if (a0.hermitian_defect() > 1e-12 * std::max(1.0, scale0))
    throw Error("eigh: input is not Hermitian within tolerance");

  Matrix a = a0;
  Matrix v = Matrix::identity(n);
  const double tol = 1e-12 * scale0;
  const int max_sweeps = 100;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (offdiag_frobenius(a) < tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // phase u makes the 2x2 pivot real, then a classical Jacobi rotation:
        // U = diag(1, conj(u)) * [[c, s], [-s, c]] on coordinates (p, q)
        const cplx u = apq / r;
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx us = u * s;
        const cplx uc = u * c;

        // columns: A <- A U
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - std::conj(us) * akq;
          a(k, q) = s * akp + std::conj(uc) * akq;
        }
        // rows: A <- U^H A
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - us * aqk;
          a(q, k) = s * apk + uc * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - std::conj(us) * vkq;
          v(k, q) = s * vkp + std::conj(uc) * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && offdiag_frobenius(a) >= tol) {
    std::ostringstream os;
    os << "eigh: Jacobi did not converge in " << max_sweeps
       << " sweeps, off-diagonal residual " << offdiag_frobenius(a);
    throw Error(os.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EighResult res;
  res.eigenvalues.resize(n);
  res.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    res.eigenvalues[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
  }
  return res;
}

SpectralReport spectral_report(std::vector<double> eigenvalues,
                               double tau_zero) {
  std::sort(eigenvalues.begin(), eigenvalues.end());
  SpectralReport rep;
  rep.eigenvalues = std::move(eigenvalues);
  for (double ev : rep.eigenvalues) {
    if (ev < tau_zero) {
      ++rep.kernel_dim;
    } else {
      rep.gap = ev;
      break;
    }
  }
  return rep;
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) strictly
// below x, via the Sturm / LDL^T sign count.
std::size_t sturm_count(const std::vector<double>& alpha,
                        const std::vector<double>& beta, double x) {
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    double b2 = (i == 0) ? 0.0 : beta[i - 1] * beta[i - 1];
    d = alpha[i] - x - b2 / d;
    if (d == 0.0) d = 1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

double tridiag_smallest(const std::vector<double>& alpha,
                        const std::vector<double>& beta) {
  double lo = alpha[0], hi = alpha[0];
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    double w = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
               (i + 1 < alpha.size() ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - w);
    hi = std::max(hi, alpha[i] + w);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (sturm_count(alpha, beta, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Eigenvector of the tridiagonal at the (already accurate) eigenvalue theta,
// by inverse iteration with partial pivoting.
std::vector<double> tridiag_eigvec(const std::vector<double>& alpha,
                                   const std::vector<double>& beta,
                                   double theta) {
  const std::size_t k = alpha.size();
  std::vector<double> x(k);
  Rng rng(0x9E3779B97F4A7C15ULL);
  for (double& v : x) v = rng.uniform_pm1();
  for (int pass = 0; pass < 3; ++pass) {
    // solve (T - theta) y = x by Gaussian elimination on the tridiagonal
    std::vector<double> d(k), e(k, 0.0), f(k, 0.0), rhs = x;
    for (std::size_t i = 0; i < k; ++i) d[i] = alpha[i] - theta;
    for (std::size_t i = 0; i + 1 < k; ++i) e[i] = beta[i];
    std::vector<double> lower = e;  // subdiagonal equals superdiagonal
    for (std::size_t i = 0; i + 1 < k; ++i) {
      double a1 = d[i], a2 = lower[i];
      if (std::abs(a2) > std::abs(a1)) {
        std::swap(d[i], lower[i]);
        std::swap(e[i], d[i + 1]);
        std::swap(f[i], e[i + 1]);
        std::swap(rhs[i], rhs[i + 1]);
        a1 = d[i];
        a2 = lower[i];
      }
      if (d[i] == 0.0) d[i] = 1e-300;
      double m = a2 / d[i];
      d[i + 1] -= m * e[i];
      e[i + 1] -= m * f[i];
      rhs[i + 1] -= m * rhs[i];
    }
    if (d[k - 1] == 0.0) d[k - 1] = 1e-300;
    std::vector<double> y(k);
    for (std::size_t ii = k; ii-- > 0;) {
      double acc = rhs[ii];
      if (ii + 1 < k) acc -= e[ii] * y[ii + 1];
      if (ii + 2 < k) acc -= f[ii] * y[ii + 2];
      y[ii] = acc / d[ii];
    }
    double nrm = 0;
    for (double v : y) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) break;
    for (std::size_t i = 0; i < k; ++i) x[i] = y[i] / nrm;
  }
  return x;
}

}  // namespace

double smallest_nonzero_eig(const LinearOp& apply, std::size_t dim,
                            const std::vector<cvec>& kernel_basis,
                            const IterOptions& opts) {
  if (dim == 0) throw Error("smallest_nonzero_eig: zero dimension");
  const std::size_t kdim = kernel_basis.size();
  if (kdim >= dim)
    throw Error("smallest_nonzero_eig: kernel spans the whole space");

  auto deflate = [&](cvec& w) {
    for (const cvec& b : kernel_basis) {
      cplx c = dot(b, w);
      axpy(-c, b, w);
    }
  };

  const std::size_t krylov_cap = std::min(dim - kdim, opts.max_iter);
  Rng rng(opts.seed);
  cvec v(dim);
  for (std::size_t attempt = 0;; ++attempt) {
    for (cplx& z : v) z = cplx(rng.uniform_pm1(), rng.uniform_pm1());
    deflate(v);
    double nv = norm(v);
    if (nv > 1e-8) {
      scale(v, 1.0 / nv);
      break;
    }
    if (attempt > 16)
      throw Error("smallest_nonzero_eig: cannot find a start vector outside the kernel");
  }

  std::vector<cvec> basis;
  basis.push_back(v);
  std::vector<double> alpha, beta;
  cvec w(dim);
  double op_scale = 0.0;

  for (std::size_t j = 0; j < krylov_cap; ++j) {
    apply(basis[j], w);
    deflate(w);
    cplx aj = dot(basis[j], w);
    alpha.push_back(aj.real());
    axpy(-aj, basis[j], w);
    if (j > 0) axpy(cplx(-beta[j - 1]), basis[j - 1], w);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      for (const cvec& b : basis) {
        cplx c = dot(b, w);
        axpy(-c, b, w);
      }
    deflate(w);
    double bj = norm(w);
    op_scale = std::max(op_scale, std::abs(alpha[j]) + bj);

    const bool exhausted = bj <= 1e-13 * std::max(op_scale, 1.0);
    bool converged = false;
    double theta = 0.0;
    if (exhausted || j + 1 == krylov_cap || (j >= 8 && j % 4 == 0)) {
      theta = tridiag_smallest(alpha, beta);
      if (!exhausted && j + 1 < krylov_cap) {
        std::vector<double> s = tridiag_eigvec(alpha, beta, theta);
        double resid = bj * std::abs(s.back());
        converged =
            resid <= std::max(opts.rel_tol * std::abs(theta), 1e-13 * op_scale);
      } else {
        converged = true;
      }
    }
    if (converged || exhausted) return tridiag_smallest(alpha, beta);

    beta.push_back(bj);
    scale(w, 1.0 / bj);
    basis.push_back(w);
  }
  throw Error("smallest_nonzero_eig: no convergence within iteration budget");
}

double smallest_nonzero_eig(const Matrix& a,
                            const std::vector<cvec>& kernel_basis,
                            const IterOptions& opts) {
  return smallest_nonzero_eig(
      [&a](const cvec& in, cvec& out) { out = a.apply(in); }, a.rows(),
      kernel_basis, opts);
}

Matrix spectral_projection(const Matrix& a, double threshold) {
  EighResult eg = eigh(a);
  for (double ev : eg.eigenvalues)
    if (std::abs(ev - threshold) < 1e-9) {
      std::ostringstream os;
      os << "spectral_projection: eigenvalue " << ev
         << " is within 1e-9 of threshold " << threshold;
      throw Error(os.str());
    }
  const std::size_t n = a.rows();
  Matrix p(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (eg.eigenvalues[k] >= threshold) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        p(i, j) += eg.vectors(i, k) * std::conj(eg.vectors(j, k));
  }
  return p;
}

double operator_norm(const Matrix& a) {
  if (a.rows() == a.cols() &&
      a.hermitian_defect() <= 1e-12 * std::max(1.0, a.frobenius())) {
    EighResult eg = eigh(a);
    double m = 0;
    for (double ev : eg.eigenvalues) m = std::max(m, std::abs(ev));
    return m;
  }
  Matrix ata = a.adjoint() * a;
  EighResult eg = eigh(ata);
  double m = 0;
  for (double ev : eg.eigenvalues) m = std::max(m, ev);
  return std::sqrt(std::max(0.0, m));
}

double subspace_distance(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows()) throw Error("subspace_distance: ambient mismatch");
  const std::size_t n = u.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx pu = 0.0, pv = 0.0;
      for (std::size_t k = 0; k < u.cols(); ++k)
        pu += u(i, k) * std::conj(u(j, k));
      for (std::size_t k = 0; k < v.cols(); ++k)
        pv += v(i, k) * std::conj(v(j, k));
      d(i, j) = pu - pv;
    }
  return operator_norm(d);
}

}  // namespace gpdt
