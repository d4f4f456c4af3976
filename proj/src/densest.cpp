#include "balload/densest.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>

#include "balload/maxflow.hpp"

namespace balload {

namespace {

struct WeightedDensest {
  Fraction density;
  std::vector<char> in_set;
};

// Largest S maximizing |E(S)| + w(S) - (p/q)|S| over subsets of a (local) graph,
// where w counts edges from each vertex to previously peeled blocks.
std::vector<char> largest_maximizer(const Graph& g, std::span<const std::int64_t> weight,
                                    const Fraction& guess) {
  const int n = g.num_vertices();
  const std::int64_t p = guess.num();
  const std::int64_t q = guess.den();
  std::int64_t cap_base = 1;
  for (int v = 0; v < n; ++v) cap_base = std::max(cap_base, g.degree(v) + 2 * weight[v]);
  const int source = n;
  const int sink = n + 1;
  MaxFlow flow(n + 2);
  for (int v = 0; v < n; ++v) {
    flow.add_arc(source, v, q * cap_base);
    flow.add_arc(v, sink, q * cap_base + 2 * p - q * g.degree(v) - 2 * q * weight[v]);
  }
  for (const auto& [u, v] : g.edges()) {
    flow.add_arc(u, v, q);
    flow.add_arc(v, u, q);
  }
  flow.run(source, sink);
  const auto to_sink = flow.reaches_sink(sink);
  std::vector<char> in_set(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) in_set[v] = !to_sink[v];
  return in_set;
}

WeightedDensest weighted_densest(const Graph& g, std::span<const std::int64_t> weight) {
  const int n = g.num_vertices();
  std::int64_t total = g.num_edges();
  for (int v = 0; v < n; ++v) total += weight[v];
  if (total == 0) return {Fraction(0), std::vector<char>(static_cast<std::size_t>(n), 1)};

  Fraction guess(total, n);
  for (;;) {
    auto in_set = largest_maximizer(g, weight, guess);
    std::int64_t mass = edges_within(g, in_set);
    std::int64_t size = 0;
    for (int v = 0; v < n; ++v) {
      if (in_set[v]) {
        mass += weight[v];
        ++size;
      }
    }
    const __int128 excess = static_cast<__int128>(guess.den()) * mass -
                            static_cast<__int128>(guess.num()) * size;
    if (size > 0 && excess > 0) {
      guess = Fraction(mass, size);
      continue;
    }
    if (size == 0) throw std::logic_error("densest subgraph search returned an empty set");
    return {guess, std::move(in_set)};
  }
}

std::vector<int> members(std::span<const char> in_set) {
  std::vector<int> out;
  for (std::size_t v = 0; v < in_set.size(); ++v) {
    if (in_set[v]) out.push_back(static_cast<int>(v));
  }
  return out;
}

// Connected components as sorted vertex lists.
std::vector<std::vector<int>> components(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> out;
  for (int root = 0; root < n; ++root) {
    if (comp[root] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{root};
    comp[root] = id;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      out[id].push_back(u);
      for (const auto& inc : g.adjacency(u)) {
        if (comp[inc.neighbor] < 0) {
          comp[inc.neighbor] = id;
          stack.push_back(inc.neighbor);
        }
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

// Peeling on one connected component; returns (density, global vertices) pairs.
std::vector<std::pair<Fraction, std::vector<int>>> peel_component(const Graph& g,
                                                                  std::vector<int> remaining) {
  std::vector<std::pair<Fraction, std::vector<int>>> blocks;
  const auto size = static_cast<std::int64_t>(remaining.size());
  std::int64_t internal = 0;
  for (int v : remaining) internal += g.degree(v);
  internal /= 2;
  if (internal == size - 1) {
    // Trees equalize: every vertex carries (n - 1) / n.
    blocks.emplace_back(Fraction(size - 1, size), std::move(remaining));
    return blocks;
  }

  std::vector<std::int64_t> weight_global(static_cast<std::size_t>(g.num_vertices()), 0);
  std::vector<char> peeled(static_cast<std::size_t>(g.num_vertices()), 0);
  while (!remaining.empty()) {
    const Graph local = g.induced(remaining);
    std::vector<std::int64_t> weight(remaining.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) weight[i] = weight_global[remaining[i]];
    auto [density, in_set] = weighted_densest(local, weight);

    std::vector<int> block, rest;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      (in_set[i] ? block : rest).push_back(remaining[i]);
    }
    for (int v : block) peeled[v] = 1;
    // Cross edges go entirely to the lighter, later block.
    for (int v : block) {
      for (const auto& inc : g.adjacency(v)) {
        if (!peeled[inc.neighbor]) ++weight_global[inc.neighbor];
      }
    }
    blocks.emplace_back(density, std::move(block));
    remaining = std::move(rest);
  }
  return blocks;
}

}  // namespace

std::vector<Fraction> DensityDecomposition::exact_loads() const {
  std::vector<Fraction> out(block_of.size());
  for (std::size_t v = 0; v < block_of.size(); ++v) out[v] = blocks[block_of[v]].density;
  return out;
}

std::vector<double> DensityDecomposition::loads() const {
  std::vector<double> out(block_of.size());
  for (std::size_t v = 0; v < block_of.size(); ++v) {
    out[v] = blocks[block_of[v]].density.to_double();
  }
  return out;
}

DensityResult rho_bruteforce(const Graph& g) {
  const int n = g.num_vertices();
  if (n > kBruteForceMaxVertices) {
    throw std::invalid_argument("rho_bruteforce supports at most 22 vertices, got " +
                                std::to_string(n));
  }
  if (n == 0) return {Fraction(0), {}};
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : g.edges()) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  Fraction best(0);
  std::uint32_t best_union = 0;
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    int twice_edges = 0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      twice_edges += std::popcount(adj[std::countr_zero(rest)] & mask);
    }
    const Fraction density(twice_edges / 2, std::popcount(mask));
    if (density > best) {
      best = density;
      best_union = mask;
    } else if (density == best) {
      best_union |= mask;
    }
  }
  DensityResult result{best, {}};
  for (int v = 0; v < n; ++v) {
    if (best_union >> v & 1u) result.vertices.push_back(v);
  }
  return result;
}

DensityResult rho_maxflow(const Graph& g) {
  const int n = g.num_vertices();
  if (n == 0) return {Fraction(0), {}};
  const std::vector<std::int64_t> zero(static_cast<std::size_t>(n), 0);
  auto [density, in_set] = weighted_densest(g, zero);
  return {density, members(in_set)};
}

DensityDecomposition density_decomposition(const Graph& g) {
  std::vector<std::pair<Fraction, std::vector<int>>> pieces;
  for (auto& comp : components(g)) {
    for (auto& block : peel_component(g, std::move(comp))) pieces.push_back(std::move(block));
  }
  std::map<Fraction, std::vector<int>, std::greater<>> grouped;
  for (auto& [density, vertices] : pieces) {
    auto& target = grouped[density];
    target.insert(target.end(), vertices.begin(), vertices.end());
  }
  DensityDecomposition out;
  out.block_of.assign(static_cast<std::size_t>(g.num_vertices()), -1);
  for (auto& [density, vertices] : grouped) {
    std::sort(vertices.begin(), vertices.end());
    for (int v : vertices) out.block_of[v] = static_cast<int>(out.blocks.size());
    out.blocks.push_back({density, std::move(vertices)});
  }
  return out;
}

double mean_excess(std::span<const double> loads, double t) {
  if (loads.empty()) return 0.0;
  double sum = 0.0;
  for (double x : loads) sum += std::max(0.0, x - t);
  return sum / static_cast<double>(loads.size());
}

std::vector<double> mean_excess_curve(std::span<const double> loads,
                                      std::span<const double> t_grid) {
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(mean_excess(loads, t));
  return out;
}

OrientationResult k_orientable(const Graph& g, int k) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  const int n = g.num_vertices();
  const int m = g.num_edges();
  OrientationResult result;
  if (m == 0) {
    result.orientable = true;
    return result;
  }
  // source -> edge node (1) -> either endpoint (1) -> sink (k)
  const int source = m + n;
  const int sink = source + 1;
  MaxFlow flow(m + n + 2);
  std::vector<int> to_u(static_cast<std::size_t>(m)), to_v(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    flow.add_arc(source, e, 1);
    to_u[e] = flow.add_arc(e, m + g.edges()[e].u, 1);
    to_v[e] = flow.add_arc(e, m + g.edges()[e].v, 1);
  }
  for (int v = 0; v < n; ++v) flow.add_arc(m + v, sink, k);
  const std::int64_t value = flow.run(source, sink);
  if (value == m) {
    result.orientable = true;
    result.head.resize(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) {
      result.head[e] = flow.flow(to_u[e]) > 0 ? g.edges()[e].u : g.edges()[e].v;
    }
    return result;
  }
  auto densest = rho_maxflow(g);
  if (densest.rho <= Fraction(k)) {
    throw std::logic_error("orientation flow and density disagree");
  }
  result.violating_set = std::move(densest.vertices);
  return result;
}

}  // namespace balload
