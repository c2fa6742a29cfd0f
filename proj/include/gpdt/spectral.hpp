#pragma once

#include <functional>

#include "gpdt/matrix.hpp"

namespace gpdt {

struct EighResult {
  std::vector<double> eigenvalues;  // ascending
  Matrix vectors;                   // columns, orthonormal, matching order
};

// Dense Hermitian eigendecomposition by cyclic Jacobi rotations.  Throws on
// non-Hermitian input (defect > 1e-12 relative) and on non-convergence.
EighResult eigh(const Matrix& a);

struct SpectralReport {
  std::vector<double> eigenvalues;
  std::size_t kernel_dim = 0;  // eigenvalues < tau_zero
  double gap = 0.0;            // first eigenvalue >= tau_zero, 0 if none
};

SpectralReport spectral_report(std::vector<double> eigenvalues,
                               double tau_zero);

using LinearOp = std::function<void(const cvec& in, cvec& out)>;

struct IterOptions {
  std::size_t max_iter = 50000;
  double rel_tol = 1e-9;
  std::uint64_t seed = kDefaultSeed;
};

// Smallest nonzero eigenvalue of a PSD operator whose nullspace is spanned by
// kernel_basis: Lanczos with full reorthogonalization on the deflated
// complement, deterministic seeded start vector.
double smallest_nonzero_eig(const LinearOp& apply, std::size_t dim,
                            const std::vector<cvec>& kernel_basis,
                            const IterOptions& opts = {});
double smallest_nonzero_eig(const Matrix& a,
                            const std::vector<cvec>& kernel_basis,
                            const IterOptions& opts = {});

// Sum of the eigenprojectors with eigenvalue below threshold.  Refuses when
// an eigenvalue sits within 1e-9 of the threshold.
Matrix spectral_projection(const Matrix& a, double threshold);

// Operator (spectral) norm; Hermitian inputs take the cheap path.
double operator_norm(const Matrix& a);

// Distance between the subspaces spanned by the given orthonormal columns,
// i.e. the operator norm of the difference of the orthogonal projectors.
double subspace_distance(const Matrix& u, const Matrix& v);

}  // namespace gpdt
