#pragma once

#include <map>

#include "gpdt/groupoid.hpp"

namespace gpdt {

// ---- finite group element stores (closure under multiplication) ----

// Elements of a finite group reached by breadth-first closure from a set of
// generators acting either as permutations of {0..d-1} or as d x d matrices
// over Z/m.  Element keys are the raw tuples, so labels are canonical and do
// not depend on the generating set.
class GroupElements {
 public:
  static GroupElements close_permutations(
      const std::vector<std::vector<int>>& generators, std::size_t cap);
  static GroupElements close_matrices(long modulus,
                                      const std::vector<std::vector<long>>& generators,
                                      std::size_t cap);
  // Z/n with generator +1 (element i is the residue i)
  static GroupElements cyclic(long n);

  std::size_t size() const { return elements_.size(); }
  int identity() const { return identity_; }
  int mul(int a, int b) const;
  int inv(int a) const { return inverse_[a]; }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<int>& generator_ids() const { return generator_ids_; }

 private:
  void finish();  // labels, inverses
  int lookup(const std::vector<long>& key) const;
  std::vector<long> mul_keys(int a, int b) const;

  enum class Kind { permutation, matrix, cyclic } kind_ = Kind::cyclic;
  long modulus_ = 0;  // matrix arithmetic / cyclic order
  std::size_t dim_ = 0;
  std::vector<std::vector<long>> elements_;
  std::map<std::vector<long>, int> index_;
  std::vector<std::string> labels_;
  std::vector<int> inverse_;
  std::vector<int> generator_ids_;
  int identity_ = 0;
};

// ---- builders ----

// Pair groupoid on n points: arrows (i,j), r=(i,i), s=(j,j).
GroupoidPtr build_pair(std::size_t n);

struct GroupBuild {
  GroupoidPtr groupoid;
  std::shared_ptr<const GroupElements> elements;
  std::vector<int> generator_arrows;  // same order as the input generators
};

GroupBuild build_group(const GroupElements& elements);
GroupBuild build_group_permutations(const std::vector<std::vector<int>>& generators,
                                    std::size_t cap = kDefaultClosureCap);
GroupBuild build_group_matrices(long modulus,
                                const std::vector<std::vector<long>>& generators,
                                std::size_t cap = kDefaultClosureCap);
GroupBuild build_group_cyclic(long n);

// Transformation groupoid X x| Gamma for a group acting on {0..points-1}.
// The action is given on the generators and extended along the closure; the
// extension is verified to be a homomorphism and rejected otherwise.
struct TransformationBuild {
  GroupoidPtr groupoid;
  std::vector<int> generator_slices;  // per generator: arrow at point 0? (unused)
};
GroupoidPtr build_transformation(const GroupBuild& group, std::size_t points,
                                 const std::vector<std::vector<int>>& generator_action);

// ---- HLS truncations ----

struct HlsChain {
  enum class Parent { Z, SL2Z } parent = Parent::Z;
  std::vector<long> levels;  // Z: kernel indices k_n (fibre Z/k_n);
                             // SL2Z: congruence levels m_n (fibre SL(2, Z/m_n))
};

struct HlsTruncation {
  GroupoidPtr groupoid;
  HlsChain chain;
  std::vector<std::size_t> fiber_sizes;
  std::vector<int> fiber_units;                    // unit arrow per fibre
  std::vector<std::vector<int>> fiber_generators;  // generator image arrows per fibre
};

// Nested chains only: successive levels must divide (kernels shrink).  The
// fibre at infinity is omitted; depth = number of finite fibres kept.
HlsTruncation build_hls_truncation(const HlsChain& chain, std::size_t depth,
                                   std::size_t cap = kDefaultClosureCap);

// Lightweight per-fibre model for Cayley-graph work: element count plus the
// left-multiplication permutation of each generator.  Unlike the truncation
// builder this profiles each quotient independently, so the level list need
// not be nested.
struct CayleyFiber {
  std::string name;
  std::size_t order = 0;
  std::vector<std::vector<int>> generator_left_mult;
};
CayleyFiber build_cayley_fiber(HlsChain::Parent parent, long level,
                               std::size_t cap = kDefaultClosureCap);

// ---- coarse truncations ----

struct SimpleGraph {
  std::size_t n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, canonical order
};

struct CoarseBuild {
  GroupoidPtr groupoid;
  std::vector<int> entourage;          // edge arrows (both orientations) + units
  std::vector<std::size_t> block_sizes;
};

// Disjoint union of the pair groupoids over each graph's vertex set, with the
// generating entourage marked.  Disconnected graphs are rejected.
CoarseBuild build_coarse_truncation(const std::vector<SimpleGraph>& graphs);

GroupoidPtr build_explicit(FiniteGroupoid::Tables tables);

// zero-padded decimal, width of the largest index for the given count
std::string padded_index(std::size_t i, std::size_t count);

}  // namespace gpdt
