#pragma once

#include "gpdt/builders.hpp"
#include "gpdt/representations.hpp"

namespace gpdt {

// A finite family of [0,1]-valued functions supported on bisections whose
// supports jointly generate the groupoid.
struct BisectionFamily {
  GroupoidPtr groupoid;
  std::vector<AlgebraElement> members;

  static BisectionFamily from_elements(GroupoidPtr g,
                                       std::vector<AlgebraElement> members);
  std::size_t size() const { return members.size(); }
};

struct LaplacianElement {
  AlgebraElement element;
  std::size_t family_size = 0;
};

// Delta = sum of (phi - Psi(phi))*(phi - Psi(phi)) over the family; exact at
// the coefficient level for rational-valued members.
LaplacianElement laplacian(const BisectionFamily& family);

// Singleton indicators of the given generators and their inverses
// (deduplicated, canonical order), followed by the unit indicator.
BisectionFamily canonical_family(const GroupoidPtr& g,
                                 const std::vector<int>& generators);

struct RepGapEntry {
  std::string rep;
  double gap = 0.0;
  bool vacuous = false;  // every vector constant; excluded from the minimum
};

struct KazhdanCertificate {
  std::size_t family_size = 0;
  double lambda1 = 0.0;  // min over non-vacuous representations
  double constant = 0.0;  // sqrt(lambda1 / family_size)
  bool vacuous = false;   // all representations vacuous (lambda1 = +inf marker)
  std::string rep_family;
  std::vector<RepGapEntry> per_rep;
  // min over draws of max_i ||(phi_i - Psi phi_i) xi|| - c ||xi||; sound when
  // >= -1e-7 (50 seeded draws per representation)
  double min_margin = 0.0;
  bool sound = false;
};

KazhdanCertificate kazhdan_constant(const GroupoidPtr& g,
                                    const BisectionFamily& family,
                                    const std::vector<MatrixRepresentation>& reps,
                                    const Tolerances& tol = {},
                                    std::uint64_t seed = kDefaultSeed);

// Regular representations at every unit plus the trivial representation of
// each extreme invariant measure (the default certified family).
std::vector<MatrixRepresentation> default_representations(const GroupoidPtr& g);

// The Kazhdan projection p = chi_{0}(Delta), computed per orbit as q(Delta)
// by convolution-power evaluation of the interpolation polynomial with
// q(0) = 1 and q = 0 on the distinct nonzero eigenvalues of Delta across all
// regular representations (clustered within 1e-7).  Refuses when the gap is
// below 10 * tau_zero.
AlgebraElement kazhdan_projection(const GroupoidPtr& g,
                                  const BisectionFamily& family,
                                  const Tolerances& tol = {});

struct ExpectationRow {
  std::string unit;
  double expectation = 0.0;
  double reciprocal_fiber = 0.0;
};

struct ExpectationReport {
  std::vector<ExpectationRow> rows;
  double max_deviation = 0.0;
  bool pass = false;  // max deviation <= 1e-7
};

// E(p)(x) versus 1 / |G_x| per unit.
ExpectationReport expectation_law_check(const GroupoidPtr& g,
                                        const AlgebraElement& p);

// Norm distance from p to anything supported on fibres <= m: the maximum
// block norm of realize(p) over fibres m < n <= N.  Blocks verified to be
// projections are reported with exact norm 1.0 (0.0 for zero blocks).
double exactness_witness(const HlsTruncation& hls, std::size_t m,
                         const Tolerances& tol = {});

struct FiberGapRow {
  std::size_t fiber = 0;  // 1-based
  std::size_t size = 0;
  double gap = 0.0;  // +inf for a trivial (vacuous) fibre
};

// Per-fibre lambda_1 of the Cayley-graph Laplacian of the quotient built from
// the generator images.  Fibres are profiled independently, so the level list
// does not need to be nested.
std::vector<FiberGapRow> hls_gap_profile(const HlsChain& chain, std::size_t depth,
                                         std::size_t cap = kDefaultClosureCap,
                                         std::uint64_t seed = kDefaultSeed);

}  // namespace gpdt
