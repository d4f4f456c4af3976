#include "balload/tree_engine.hpp"

#include <algorithm>
#include <cmath>

namespace balload {

namespace {

void require_tree(const Graph& g) {
  if (!g.is_tree()) throw NotATreeError();
}

// BFS from `root` never crossing into `blocked`; parent_out[v] is the oriented
// edge (v -> parent), -1 for the root.
struct Rooted {
  std::vector<int> order;
  std::vector<int> parent_out;
};

Rooted root_at(const Graph& g, int root, int blocked) {
  Rooted r;
  r.parent_out.assign(static_cast<std::size_t>(g.num_vertices()), -2);
  r.parent_out[root] = -1;
  r.order.push_back(root);
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    const int u = r.order[k];
    for (const auto& inc : g.adjacency(u)) {
      if (inc.neighbor == blocked || r.parent_out[inc.neighbor] != -2) continue;
      r.parent_out[inc.neighbor] = inc.out ^ 1;
      r.order.push_back(inc.neighbor);
    }
  }
  return r;
}

// Contribution of a child subtree with inverse response `child` to its parent's
// inverse response: [1 - step(child)]^1_0.
template <class T, class Step>
PiecewiseLinear<T> pressure_term(const PiecewiseLinear<T>& child, const Step& step) {
  return (T(1) - step(child)).clamp01();
}

template <class T, class Step>
PiecewiseLinear<T> bottom_up(const Graph& g, int root, int blocked, const Step& step) {
  const Rooted r = root_at(g, root, blocked);
  std::vector<PiecewiseLinear<T>> inv(static_cast<std::size_t>(g.num_vertices()));
  std::vector<PiecewiseLinear<T>> pressure(static_cast<std::size_t>(g.num_vertices()),
                                           PiecewiseLinear<T>::constant(T(0)));
  for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
    const int v = *it;
    inv[v] = PiecewiseLinear<T>::identity() - pressure[v];
    if (v == root) break;
    const int parent = g.head(r.parent_out[v]);
    pressure[parent] = pressure[parent] + pressure_term(inv[v], step);
  }
  return inv[root];
}

template <class T>
auto limit_step() {
  return [](const PiecewiseLinear<T>& f) { return f; };
}

template <class T>
auto eps_step(const T& eps) {
  return [eps](const PiecewiseLinear<T>& f) { return f.shifted_response_inverse(eps); };
}

template <class T>
void check_eps(const T& eps) {
  if (!(eps > T(0))) throw std::invalid_argument("eps must be positive");
}

void check_oriented(const Graph& g, int oriented) {
  if (oriented < 0 || oriented >= g.num_oriented()) {
    throw std::out_of_range("oriented edge index out of range");
  }
}

void check_vertex(const Graph& g, int v) {
  if (v < 0 || v >= g.num_vertices()) throw std::out_of_range("vertex out of range");
}

}  // namespace

template <class T>
PiecewiseLinear<T> response_inverse_eps(const Graph& tree, int oriented_edge, const T& eps) {
  require_tree(tree);
  check_oriented(tree, oriented_edge);
  check_eps(eps);
  return bottom_up<T>(tree, tree.tail(oriented_edge), tree.head(oriented_edge), eps_step(eps));
}

template <class T>
PiecewiseLinear<T> response_inverse_limit(const Graph& tree, int oriented_edge) {
  require_tree(tree);
  check_oriented(tree, oriented_edge);
  return bottom_up<T>(tree, tree.tail(oriented_edge), tree.head(oriented_edge), limit_step<T>());
}

template <class T>
PiecewiseLinear<T> response_inverse_eps_rooted(const Graph& tree, int root, const T& eps) {
  require_tree(tree);
  check_vertex(tree, root);
  check_eps(eps);
  return bottom_up<T>(tree, root, -1, eps_step(eps));
}

template <class T>
PiecewiseLinear<T> response_inverse_limit_rooted(const Graph& tree, int root) {
  require_tree(tree);
  check_vertex(tree, root);
  return bottom_up<T>(tree, root, -1, limit_step<T>());
}

template <class T>
std::vector<PiecewiseLinear<T>> all_response_inverses_limit(const Graph& tree) {
  require_tree(tree);
  using Fn = PiecewiseLinear<T>;
  const Rooted r = root_at(tree, 0, -1);
  std::vector<Fn> inv(static_cast<std::size_t>(tree.num_oriented()));
  const Fn zero = Fn::constant(T(0));

  // Upward: (v -> parent) from the children of v.
  for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
    const int v = *it;
    if (r.parent_out[v] < 0) continue;
    Fn pressure = zero;
    for (const auto& inc : tree.adjacency(v)) {
      if (inc.out == r.parent_out[v]) continue;
      pressure = pressure + pressure_term(inv[inc.out ^ 1], limit_step<T>());
    }
    inv[r.parent_out[v]] = Fn::identity() - pressure;
  }
  // Downward: (i -> c) for each child c, from every other neighbour of i.
  for (const int i : r.order) {
    const auto adj = tree.adjacency(i);
    const std::size_t d = adj.size();
    std::vector<Fn> terms;
    terms.reserve(d);
    for (const auto& inc : adj) terms.push_back(pressure_term(inv[inc.out ^ 1], limit_step<T>()));
    std::vector<Fn> prefix(d + 1, zero), suffix(d + 1, zero);
    for (std::size_t k = 0; k < d; ++k) prefix[k + 1] = prefix[k] + terms[k];
    for (std::size_t k = d; k-- > 0;) suffix[k] = suffix[k + 1] + terms[k];
    for (std::size_t k = 0; k < d; ++k) {
      if (adj[k].out == r.parent_out[i]) continue;
      inv[adj[k].out] = Fn::identity() - (prefix[k] + suffix[k + 1]);
    }
  }
  return inv;
}

template <class T>
PiecewiseLinear<T> incoming_pressure(const Graph& tree, int o,
                                     const std::vector<PiecewiseLinear<T>>& inverses) {
  auto total = PiecewiseLinear<T>::constant(T(0));
  for (const auto& inc : tree.adjacency(o)) {
    total = total + pressure_term(inverses[inc.out ^ 1], limit_step<T>());
  }
  return total;
}

template <class T>
std::vector<T> exact_tree_loads(const Graph& tree) {
  const auto inverses = all_response_inverses_limit<T>(tree);
  std::vector<T> loads(static_cast<std::size_t>(tree.num_vertices()));
  for (int o = 0; o < tree.num_vertices(); ++o) {
    // pressure - Id is strictly decreasing, so its zero is the crossing point.
    loads[o] = (incoming_pressure(tree, o, inverses) - PiecewiseLinear<T>::identity()).root();
  }
  return loads;
}

LoadVector exact_tree_loads(const Graph& tree) {
  const auto exact = exact_tree_loads<Rational>(tree);
  LoadVector out;
  out.reserve(exact.size());
  for (const auto& x : exact) out.push_back(static_cast<double>(x));
  return out;
}

double CavityMarks::incoming(const Graph& g, int v) const {
  double sum = 0.0;
  for (const auto& inc : g.adjacency(v)) sum += xi[static_cast<std::size_t>(inc.out ^ 1)];
  return sum;
}

CavityMarks cavity_messages(const Graph& g, double t, int max_sweeps) {
  CavityMarks marks;
  marks.t = t;
  marks.xi.assign(static_cast<std::size_t>(g.num_oriented()), 0.0);
  std::vector<double> next(marks.xi.size());
  std::vector<double> in_sum(static_cast<std::size_t>(g.num_vertices()));
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (int v = 0; v < g.num_vertices(); ++v) in_sum[v] = marks.incoming(g, v);
    double change = 0.0;
    for (int o = 0; o < g.num_oriented(); ++o) {
      const int i = g.tail(o);
      next[o] = std::clamp(1.0 - t + in_sum[i] - marks.xi[o ^ 1], 0.0, 1.0);
      change = std::max(change, std::abs(next[o] - marks.xi[o]));
    }
    marks.xi.swap(next);
    marks.sweeps = sweep;
    marks.residual = change;
    if (change <= 1e-13) {
      marks.converged = true;
      break;
    }
  }
  if (g.num_oriented() == 0) marks.converged = true;
  return marks;
}

template PiecewiseLinear<double> response_inverse_eps(const Graph&, int, const double&);
template PiecewiseLinear<Rational> response_inverse_eps(const Graph&, int, const Rational&);
template PiecewiseLinear<double> response_inverse_limit(const Graph&, int);
template PiecewiseLinear<Rational> response_inverse_limit(const Graph&, int);
template PiecewiseLinear<double> response_inverse_eps_rooted(const Graph&, int, const double&);
template PiecewiseLinear<Rational> response_inverse_eps_rooted(const Graph&, int, const Rational&);
template PiecewiseLinear<double> response_inverse_limit_rooted(const Graph&, int);
template PiecewiseLinear<Rational> response_inverse_limit_rooted(const Graph&, int);
template std::vector<PiecewiseLinear<double>> all_response_inverses_limit(const Graph&);
template std::vector<PiecewiseLinear<Rational>> all_response_inverses_limit(const Graph&);
template PiecewiseLinear<double> incoming_pressure(const Graph&, int,
                                                   const std::vector<PiecewiseLinear<double>>&);
template PiecewiseLinear<Rational> incoming_pressure(
    const Graph&, int, const std::vector<PiecewiseLinear<Rational>>&);
template std::vector<double> exact_tree_loads<double>(const Graph&);
template std::vector<Rational> exact_tree_loads<Rational>(const Graph&);

}  // namespace balload
