#ifndef BALLOAD_TESTS_SUPPORT_HPP
#define BALLOAD_TESTS_SUPPORT_HPP

// Graph builders, seeded generators and independent oracles shared by the unit
// tests and the acceptance binary.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "balload/degseq.hpp"
#include "balload/fraction.hpp"
#include "balload/graph.hpp"

namespace balload::testing {

inline Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return Graph(n, e);
}

// Center 0, leaves 1..leaves.
inline Graph star_graph(int leaves) {
  std::vector<Edge> e;
  for (int v = 1; v <= leaves; ++v) e.push_back({0, v});
  return Graph(leaves + 1, e);
}

inline Graph complete_graph(int n, int extra_isolated = 0) {
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.push_back({u, v});
  return Graph(n + extra_isolated, e);
}

// Triangle {0,1,2} with pendant 3 attached to 2.
inline Graph triangle_pendant() { return Graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}); }

// Complete d-regular tree: root has d children, every other internal vertex
// d - 1, leaves at distance `depth` from the root (vertex 0).
inline Graph regular_tree(int d, int depth) {
  std::vector<Edge> e;
  std::vector<int> frontier{0};
  int next = 1;
  for (int level = 0; level < depth; ++level) {
    std::vector<int> grown;
    for (int v : frontier) {
      const int kids = v == 0 ? d : d - 1;
      for (int c = 0; c < kids; ++c) {
        e.push_back({v, next});
        grown.push_back(next++);
      }
    }
    frontier = std::move(grown);
  }
  return Graph(next, e);
}

// Uniform random labelled tree via a random parent for each vertex.
inline Graph random_tree(int n, std::mt19937_64& rng) {
  std::vector<Edge> e;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    e.push_back({pick(rng), v});
  }
  return Graph(n, e);
}

// Oriented index of (i -> j); throws if {i, j} is not an edge.
inline int oriented(const Graph& g, int i, int j) {
  for (const auto& inc : g.adjacency(i))
    if (inc.neighbor == j) return inc.out;
  throw std::invalid_argument("no such edge");
}

// Mixed small graphs: even indices G(n, p), odd indices pairing model on
// degrees drawn uniformly from 0..4.
inline Graph small_random_graph(std::uint64_t seed, int index, int max_n = 12) {
  std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(index));
  const int n = std::uniform_int_distribution<int>(1, max_n)(rng);
  if (index % 2 == 0) {
    const double p = std::uniform_real_distribution<double>(0.1, 0.8)(rng);
    std::vector<Edge> e;
    std::bernoulli_distribution coin(p);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (coin(rng)) e.push_back({u, v});
    return Graph(n, e);
  }
  DegreeSequence d(static_cast<std::size_t>(n));
  for (auto& x : d) x = std::uniform_int_distribution<int>(0, 4)(rng);
  int total = 0;
  for (int x : d) total += x;
  if (total % 2) ++d.back();
  return pairing_model(d, rng(), MultiEdgePolicy::KeepOne);
}

inline std::vector<Graph> small_graph_corpus(int count, std::uint64_t seed = 2024) {
  std::vector<Graph> out;
  for (int i = 0; i < count; ++i) out.push_back(small_random_graph(seed, i));
  return out;
}

// Exhaustive max |E(S)|/|S| over non-empty S with the largest maximizer.
struct BruteDensity {
  Fraction rho{0};
  std::vector<int> vertices;
};

inline BruteDensity brute_density(const Graph& g) {
  const int n = g.num_vertices();
  BruteDensity best;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    int k = std::popcount(mask), m = 0;
    for (const auto& [u, v] : g.edges()) m += ((mask >> u) & 1u) && ((mask >> v) & 1u);
    const Fraction f(m, k);
    if (best_mask == 0 || f > best.rho ||
        (f == best.rho && std::popcount(mask) > std::popcount(best_mask))) {
      best.rho = f;
      best_mask = mask;
    }
  }
  for (int v = 0; v < n; ++v)
    if ((best_mask >> v) & 1u) best.vertices.push_back(v);
  return best;
}

// Balanced loads by exact coordinate minimization of sum load^2 over the
// per-edge shares: edge {u, v} alone is optimal at clamp((1 + L_v - L_u) / 2)
// where L excludes the edge itself. Converges to the unique loads.
inline std::vector<double> coordinate_descent_loads(const Graph& g, int sweeps = 20000,
                                                    double tol = 1e-13) {
  const int m = g.num_edges();
  std::vector<double> share(static_cast<std::size_t>(m), 0.5);  // sent to v
  std::vector<double> load(static_cast<std::size_t>(g.num_vertices()), 0.0);
  for (int e = 0; e < m; ++e) {
    load[g.edges()[e].u] += 0.5;
    load[g.edges()[e].v] += 0.5;
  }
  for (int s = 0; s < sweeps; ++s) {
    double change = 0.0;
    for (int e = 0; e < m; ++e) {
      const auto [u, v] = g.edges()[e];
      const double lu = load[u] - (1.0 - share[e]);
      const double lv = load[v] - share[e];
      const double x = std::clamp((1.0 + lu - lv) / 2.0, 0.0, 1.0);
      change = std::max(change, std::abs(x - share[e]));
      load[u] = lu + 1.0 - x;
      load[v] = lv + x;
      share[e] = x;
    }
    if (change < tol) break;
  }
  return load;
}

// Backtracking search for an orientation with every in-degree <= k, memoizing
// failed (edge index, in-degree vector) states.
inline bool orientation_exists(const Graph& g, int k) {
  const int n = g.num_vertices();
  if (g.num_edges() > static_cast<long long>(k) * n) return false;
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  std::unordered_set<std::uint64_t> dead;
  const auto key = [&](int e) {
    std::uint64_t h = static_cast<std::uint64_t>(e);
    for (int x : indeg) h = h * static_cast<std::uint64_t>(k + 1) + static_cast<std::uint64_t>(x);
    return h;
  };
  std::function<bool(int)> place = [&](int e) -> bool {
    if (e == g.num_edges()) return true;
    const std::uint64_t h = key(e);
    if (dead.count(h)) return false;
    const auto [u, v] = g.edges()[e];
    for (int head : {u, v}) {
      if (indeg[head] >= k) continue;
      ++indeg[head];
      const bool ok = place(e + 1);
      --indeg[head];
      if (ok) return true;
    }
    dead.insert(h);
    return false;
  };
  return place(0);
}

}  // namespace balload::testing

#endif  // BALLOAD_TESTS_SUPPORT_HPP
