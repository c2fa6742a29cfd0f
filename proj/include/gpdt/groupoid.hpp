#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpdt/config.hpp"

namespace gpdt {

// One validator finding: the violated axiom plus the offending arrows.
struct Diagnostic {
  std::string axiom;
  std::string detail;
};

// A finite etale groupoid model.  Arrows are indexed by their position in the
// canonical (lexicographic on labels) order; source/range/inverse are index
// maps and composition is a sorted flat table over the defined pairs.
// Instances are immutable after construction and safe to share across threads.
class FiniteGroupoid {
 public:
  struct Tables {
    std::vector<std::string> labels;
    std::vector<int> source, range, inverse;  // indices into labels
    std::vector<int> units;                   // indices into labels
    std::vector<std::array<int, 3>> products;  // (g, h, gh)
  };

  // Structural checks only (index ranges, label uniqueness, no duplicate
  // product keys); axiom checks belong to validate().
  static std::shared_ptr<const FiniteGroupoid> create(Tables tables);

  std::size_t arrow_count() const { return labels_.size(); }
  std::size_t unit_count() const { return units_.size(); }

  const std::string& label(int g) const { return labels_[g]; }
  int index_of(const std::string& label) const;  // -1 if absent

  int source(int g) const { return source_[g]; }
  int range(int g) const { return range_[g]; }
  int inverse(int g) const { return inverse_[g]; }
  bool is_unit(int g) const { return unit_ordinal_[g] >= 0; }

  // -1 when the pair is not in the composition table
  int compose(int g, int h) const;

  const std::vector<int>& units() const { return units_; }
  int unit_ordinal(int arrow) const { return unit_ordinal_[arrow]; }

  // G^x / G_x for a unit arrow index
  const std::vector<int>& range_fiber(int unit) const;
  const std::vector<int>& source_fiber(int unit) const;

  std::size_t product_count() const { return mul_keys_.size(); }
  std::array<int, 3> product_entry(std::size_t k) const;

 private:
  FiniteGroupoid() = default;
  std::vector<std::string> labels_;
  std::vector<int> source_, range_, inverse_;
  std::vector<int> units_;
  std::vector<int> unit_ordinal_;
  std::vector<std::uint64_t> mul_keys_;
  std::vector<int> mul_vals_;
  std::vector<std::vector<int>> range_fibers_, source_fibers_;
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

struct ValidateOptions {
  // Exhaustive associativity above this many triples is replaced by a seeded
  // sample of the same size; a diagnostic-free result then reports sampling
  // through the `sampled` output flag instead.
  std::size_t max_triples = SIZE_MAX;
  std::uint64_t seed = kDefaultSeed;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  bool associativity_sampled = false;
  std::size_t triples_checked = 0;
  bool ok() const { return diagnostics.empty(); }
};

ValidationReport validate(const FiniteGroupoid& g,
                          const ValidateOptions& opts = {});

struct OrbitDecomposition {
  std::vector<std::vector<int>> orbits;  // unit arrow indices, canonical order
  std::vector<int> orbit_of;             // indexed by unit ordinal
};

OrbitDecomposition orbits(const FiniteGroupoid& g);

GroupoidPtr disjoint_union(const GroupoidPtr& a, const GroupoidPtr& b);

// Restriction to an invariant set of units (throws if not invariant).
// Returns the restricted groupoid plus the map from its arrows to the
// original arrow indices.
struct Restriction {
  GroupoidPtr groupoid;
  std::vector<int> arrow_in_parent;
};
Restriction restrict_to_units(const GroupoidPtr& g,
                              const std::vector<int>& unit_arrows);

// True iff the closure of `arrows` (with inverses and all units adjoined)
// under composition is the whole arrow set.
bool generates(const FiniteGroupoid& g, const std::vector<int>& arrows);

}  // namespace gpdt
