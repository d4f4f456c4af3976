#include "balload/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace balload {

namespace {

std::uint64_t pair_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_int(std::string_view token, long long& out) {
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

GraphError::GraphError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

Graph::Graph(int n) : Graph(n, {}) {}

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw GraphError("negative vertex count");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size() * 2);
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [u, v] = edges_[e];
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw GraphError("edge " + std::to_string(e) + " has an endpoint outside 0.." +
                       std::to_string(n - 1));
    }
    if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
    if (!seen.insert(pair_key(u, v)).second) {
      throw GraphError("duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
    }
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  incidences_.resize(2 * edges_.size());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [u, v] = edges_[e];
    const int o = static_cast<int>(2 * e);
    incidences_[fill[u]++] = {v, o};
    incidences_[fill[v]++] = {u, o + 1};
  }
  max_degree_ = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::span<const Incidence> Graph::adjacency(int v) const {
  return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
}

DegreeSequence Graph::degrees() const {
  DegreeSequence d(static_cast<std::size_t>(n_));
  for (int v = 0; v < n_; ++v) d[v] = degree(v);
  return d;
}

int Graph::tail(int oriented) const {
  const Edge& e = edges_[static_cast<std::size_t>(oriented >> 1)];
  return (oriented & 1) ? e.v : e.u;
}

int Graph::head(int oriented) const {
  const Edge& e = edges_[static_cast<std::size_t>(oriented >> 1)];
  return (oriented & 1) ? e.u : e.v;
}

bool Graph::has_edge(int u, int v) const {
  if (degree(u) > degree(v)) std::swap(u, v);
  for (const auto& inc : adjacency(u)) {
    if (inc.neighbor == v) return true;
  }
  return false;
}

bool Graph::is_forest() const {
  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : edges_) {
    const int a = find(u), b = find(v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

bool Graph::is_tree() const {
  return n_ >= 1 && num_edges() == n_ - 1 && is_forest();
}

Graph Graph::edge_subgraph(std::span<const char> keep) const {
  std::vector<Edge> kept;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (keep[e]) kept.push_back(edges_[e]);
  }
  return Graph(n_, std::move(kept));
}

Graph Graph::induced(std::span<const int> vertices) const {
  std::vector<int> local(static_cast<std::size_t>(n_), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
  std::vector<Edge> kept;
  for (const auto& [u, v] : edges_) {
    if (local[u] >= 0 && local[v] >= 0) kept.push_back({local[u], local[v]});
  }
  return Graph(static_cast<int>(vertices.size()), std::move(kept));
}

Graph load_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  long long header_n = -1;
  int max_id = -1;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(std::string_view(line).substr(1));
      if (body.rfind("n=", 0) == 0) {
        if (!parse_int(trim(std::string_view(body).substr(2)), header_n) || header_n < 0) {
          throw GraphError("malformed header '" + line + "'", line_no);
        }
      }
      continue;
    }
    std::istringstream fields(line);
    std::string a, b, extra;
    long long u = 0, v = 0;
    if (!(fields >> a >> b) || (fields >> extra) || !parse_int(a, u) || !parse_int(b, v) ||
        u < 0 || v < 0 || u > 2147483646 || v > 2147483646) {
      throw GraphError("expected 'u v' with non-negative integer ids, got '" + line + "'",
                       line_no);
    }
    if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u), line_no);
    if (!seen.insert(pair_key(static_cast<int>(u), static_cast<int>(v))).second) {
      throw GraphError("duplicate edge {" + a + "," + b + "}", line_no);
    }
    edges.push_back({static_cast<int>(u), static_cast<int>(v)});
    max_id = std::max(max_id, static_cast<int>(std::max(u, v)));
  }
  int n = max_id + 1;
  if (header_n >= 0) {
    if (header_n < n) {
      throw GraphError("header n=" + std::to_string(header_n) + " but vertex id " +
                       std::to_string(max_id) + " appears");
    }
    n = static_cast<int>(header_n);
  }
  return Graph(n, std::move(edges));
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open '" + path + "'");
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# n=" << g.num_vertices() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write '" + path + "'");
  write_edge_list(out, g);
}

std::vector<char> truncation_mask(const Graph& g, int max_degree) {
  std::vector<char> keep(static_cast<std::size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edges()[e];
    keep[e] = std::max(g.degree(u), g.degree(v)) <= max_degree;
  }
  return keep;
}

Graph truncate(const Graph& g, int max_degree) {
  return g.edge_subgraph(truncation_mask(g, max_degree));
}

std::int64_t edges_within(const Graph& g, std::span<const char> in_set) {
  std::int64_t count = 0;
  for (const auto& [u, v] : g.edges()) count += (in_set[u] && in_set[v]);
  return count;
}

}  // namespace balload
