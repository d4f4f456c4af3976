#ifndef BALLOAD_GRAPH_HPP
#define BALLOAD_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace balload {

struct Edge {
  int u;
  int v;
};

// One entry of a vertex's adjacency list. `out` is the oriented-edge index of
// (self -> neighbor); the reversed orientation is `out ^ 1`.
struct Incidence {
  int neighbor;
  int out;
};

using DegreeSequence = std::vector<int>;

class GraphError : public std::runtime_error {
 public:
  GraphError(const std::string& what, int line = 0);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Simple undirected finite graph on vertices 0..n-1. Undirected edge e owns the
// oriented slots 2e (u -> v) and 2e + 1 (v -> u) where edges()[e] == {u, v}.
// Immutable after construction.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, std::vector<Edge> edges);

  int num_vertices() const noexcept { return n_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  int num_oriented() const noexcept { return 2 * num_edges(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Incidence> adjacency(int v) const;
  int degree(int v) const { return static_cast<int>(adjacency(v).size()); }
  int max_degree() const noexcept { return max_degree_; }
  DegreeSequence degrees() const;

  // Tail and head of an oriented edge.
  int tail(int oriented) const;
  int head(int oriented) const;
  static int reverse(int oriented) noexcept { return oriented ^ 1; }

  bool has_edge(int u, int v) const;
  bool is_forest() const;
  bool is_tree() const;

  // Subgraph on the same vertex set keeping edges whose flag is set.
  Graph edge_subgraph(std::span<const char> keep) const;
  // Induced subgraph on `vertices` relabelled 0..k-1 in the given order.
  Graph induced(std::span<const int> vertices) const;

 private:
  int n_ = 0;
  int max_degree_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<Incidence> incidences_;
};

// Reads the edge-list interchange format: one "u v" pair per line, '#' comments,
// optional "# n=<int>" header. Errors carry the 1-based line number.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);

// Isolates every vertex of degree > max_degree: keeps {i,j} iff
// deg(i) and deg(j) are both <= max_degree in g.
Graph truncate(const Graph& g, int max_degree);
// Per-edge keep flags of truncate(g, max_degree), aligned with g.edges().
std::vector<char> truncation_mask(const Graph& g, int max_degree);

// Number of edges with both endpoints in the vertex set marked by `in_set`.
std::int64_t edges_within(const Graph& g, std::span<const char> in_set);

}  // namespace balload

#endif  // BALLOAD_GRAPH_HPP
