#ifndef BALLOAD_DENSEST_HPP
#define BALLOAD_DENSEST_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "balload/fraction.hpp"
#include "balload/graph.hpp"

namespace balload {

// Maximum subgraph density rho = |E(H)|/|H| and the largest H achieving it.
// For a graph without edges rho = 0 and H = V.
struct DensityResult {
  Fraction rho;
  std::vector<int> vertices;  // sorted
};

struct DensityBlock {
  Fraction density;
  std::vector<int> vertices;  // sorted
};

// Blocks in strictly decreasing density; they partition V. The balanced load
// of a vertex equals the density of its block.
struct DensityDecomposition {
  std::vector<DensityBlock> blocks;
  std::vector<int> block_of;

  std::vector<Fraction> exact_loads() const;
  std::vector<double> loads() const;
};

inline constexpr int kBruteForceMaxVertices = 22;

// Subset enumeration; throws std::invalid_argument when n > 22.
DensityResult rho_bruteforce(const Graph& g);
// Dinkelbach iteration over exact fractions with a max-flow oracle.
DensityResult rho_maxflow(const Graph& g);
DensityDecomposition density_decomposition(const Graph& g);

// Phi_G(t) = (1/n) sum_o (load(o) - t)^+ for each t.
std::vector<double> mean_excess_curve(std::span<const double> loads, std::span<const double> t_grid);
double mean_excess(std::span<const double> loads, double t);

// An orientation assigns every edge to its head; in-degree counts heads.
struct OrientationResult {
  bool orientable = false;
  std::vector<int> head;               // per edge, when orientable
  std::vector<int> violating_set;      // |E(H)| > k|H|, when not orientable
};

// Decides whether every vertex can receive at most k edges (rho(G) <= k) and
// returns either an orientation or a witness set.
OrientationResult k_orientable(const Graph& g, int k);

}  // namespace balload

#endif  // BALLOAD_DENSEST_HPP
