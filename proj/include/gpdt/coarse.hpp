#pragma once

#include "gpdt/algebra.hpp"
#include "gpdt/builders.hpp"
#include "gpdt/matrix.hpp"

namespace gpdt {

// A finite connected simple graph (validated on construction).
struct FiniteGraph {
  std::size_t n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, canonically sorted
  std::size_t max_degree = 0;

  static FiniteGraph create(std::size_t n, std::vector<std::pair<int, int>> edges);
  SimpleGraph as_simple() const { return {n, edges}; }
};

// degree on the diagonal, -1 on adjacency
Matrix graph_laplacian(const FiniteGraph& g);

// Greedy proper edge coloring in canonical edge order; each color class is a
// partial matching.  At most 2 * max_degree - 1 classes.
std::vector<std::vector<int>> edge_color(const FiniteGraph& g);

struct LaplacianDecomposition {
  GroupoidPtr pair_groupoid;
  std::vector<AlgebraElement> isometries;  // one {0,1}-valued v per matching
  std::size_t matchings = 0;
};

// Writes the graph Laplacian as sum of (v v* - v)*(v v* - v) over oriented
// matchings (lower vertex = source) in the pair-groupoid algebra.  Both the
// decomposition identity and v v* = Psi(v) are verified in exact integer
// arithmetic; failure throws.
LaplacianDecomposition laplacian_decomposition(const FiniteGraph& g);

struct ExpanderGapRow {
  std::size_t index = 0;  // 1-based
  std::size_t size = 0;
  double gap = 0.0;
  double running_min = 0.0;
};

std::vector<ExpanderGapRow> expander_gap_profile(const std::vector<FiniteGraph>& graphs,
                                                 std::uint64_t seed = kDefaultSeed);

struct BlockProjectionRow {
  std::size_t index = 0;
  std::size_t size = 0;
  double block_norm = 0.0;
  double entry_sup = 0.0;        // 1/|X_n|: the ghost signature
  double idempotent_dev = 0.0;
  double adjoint_dev = 0.0;
  double closed_form_dev = 0.0;  // vs all-ones / |X_n|
};

// Per-component projection onto constants, checked against
// spectral_projection(graph Laplacian, lambda_1 / 2).
std::vector<BlockProjectionRow> block_kazhdan_projection(
    const std::vector<FiniteGraph>& graphs, std::uint64_t seed = kDefaultSeed);

// Seeded pairing-model random regular graph; loops/multi-edges rejected and
// regenerated, disconnected samples rejected as well.
FiniteGraph random_regular_graph(std::size_t n, std::size_t degree,
                                 std::uint64_t seed);

FiniteGraph complete_graph(std::size_t n);
FiniteGraph cycle_graph(std::size_t n);
FiniteGraph path_graph(std::size_t n);

}  // namespace gpdt
