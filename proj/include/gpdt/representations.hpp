#pragma once

#include "gpdt/algebra.hpp"
#include "gpdt/spectral.hpp"

namespace gpdt {

// Probability measure on the unit space, indexed by unit ordinal.
struct InvariantMeasure {
  std::vector<double> weights;
};

// max over arrows of |mu(r(g)) - mu(s(g))|
double invariance_defect(const FiniteGroupoid& g, const InvariantMeasure& mu);

// One extreme invariant measure per orbit: uniform on that orbit's units.
std::vector<InvariantMeasure> invariant_measures(const GroupoidPtr& g);

// Normalized uniform measure over all units (always invariant).
InvariantMeasure uniform_measure(const FiniteGroupoid& g);

enum class RepKind { regular, trivial, gns, direct_sum };

// A basis-labeled realization of C_c(G) by complex matrices.
class MatrixRepresentation {
 public:
  using Realizer = std::function<Matrix(const AlgebraElement&)>;

  MatrixRepresentation(RepKind kind, std::string description,
                       std::vector<std::string> basis_labels, Realizer realize)
      : kind_(kind),
        description_(std::move(description)),
        basis_labels_(std::move(basis_labels)),
        realize_(std::move(realize)) {}

  RepKind kind() const { return kind_; }
  const std::string& description() const { return description_; }
  const std::vector<std::string>& basis_labels() const { return basis_labels_; }
  std::size_t dimension() const { return basis_labels_.size(); }
  Matrix realize(const AlgebraElement& f) const { return realize_(f); }

 private:
  RepKind kind_;
  std::string description_;
  std::vector<std::string> basis_labels_;
  Realizer realize_;
};

// Regular representation on l^2(G_x): matrix entry (g, h) = f(g h^{-1}).
MatrixRepresentation regular_rep(const GroupoidPtr& g, int unit);

// Trivial representation on L^2(G^(0), mu), conjugated by diag(sqrt(mu)) so
// adjoints are literal conjugate transposes.  Zero-weight units are dropped.
MatrixRepresentation trivial_rep(const GroupoidPtr& g, const InvariantMeasure& mu);

// GNS representation from a positive-type kernel and an invariant measure.
MatrixRepresentation gns_rep(const GroupoidPtr& g, const KernelFunction& phi,
                             const InvariantMeasure& mu,
                             const Tolerances& tol = {});

MatrixRepresentation direct_sum(std::vector<MatrixRepresentation> parts);

// Orthonormal basis (columns) of the constant-vector subspace of a
// representation, computed as the nullspace of the realized family Laplacian.
// The family must generate; every returned vector is verified to satisfy
// realize(f) xi = realize(Psi(f)) xi within 1e-8.
Matrix constant_vectors(const MatrixRepresentation& rep,
                        const std::vector<AlgebraElement>& generating_family,
                        const Tolerances& tol = {});

// sup over units of the operator norm in the regular representation
double reduced_norm(const AlgebraElement& f);

// Restriction to units; agrees with the diagonal-entry formula in each
// regular representation.
AlgebraElement conditional_expectation(const AlgebraElement& f);

// Measure induced by a vector: x -> <xi, realize(delta_x) xi>.
InvariantMeasure measure_from_vector(const GroupoidPtr& g,
                                     const MatrixRepresentation& rep,
                                     const cvec& xi);

}  // namespace gpdt
