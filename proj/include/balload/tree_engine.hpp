#ifndef BALLOAD_TREE_ENGINE_HPP
#define BALLOAD_TREE_ENGINE_HPP

#include <stdexcept>
#include <vector>

#include "balload/allocator.hpp"
#include "balload/graph.hpp"
#include "balload/piecewise_linear.hpp"

namespace balload {

class NotATreeError : public std::invalid_argument {
 public:
  NotATreeError() : std::invalid_argument("graph is not a tree") {}
};

using ResponseInverse = PiecewiseLinear<double>;
using ExactResponseInverse = PiecewiseLinear<Rational>;

// Inverse response function of the subtree T_{i->j}: vertex i and everything
// reachable from it without crossing {i, j}, where oriented_edge = (i -> j).
// The response maps a baseload injected at i to i's total felt load.
template <class T>
PiecewiseLinear<T> response_inverse_eps(const Graph& tree, int oriented_edge, const T& eps);
template <class T>
PiecewiseLinear<T> response_inverse_limit(const Graph& tree, int oriented_edge);

// Same for the whole tree rooted at a vertex.
template <class T>
PiecewiseLinear<T> response_inverse_eps_rooted(const Graph& tree, int root, const T& eps);
template <class T>
PiecewiseLinear<T> response_inverse_limit_rooted(const Graph& tree, int root);

// Limit inverse responses of every oriented subtree, indexed by oriented edge,
// from one upward and one downward pass.
template <class T>
std::vector<PiecewiseLinear<T>> all_response_inverses_limit(const Graph& tree);

// sum over neighbours i of o of [1 - f^-1_{T_{i->o}}(t)]^1_0 as a function of t.
template <class T>
PiecewiseLinear<T> incoming_pressure(const Graph& tree, int o,
                                     const std::vector<PiecewiseLinear<T>>& inverses);

// Balanced load of every vertex: l_o = sup{t : incoming_pressure(o)(t) > t}.
template <class T>
std::vector<T> exact_tree_loads(const Graph& tree);
LoadVector exact_tree_loads(const Graph& tree);

// xi per oriented edge (i -> j) satisfying
// xi(i, j) = [1 - t + sum_{k ~ i, k != j} xi(k, i)]^1_0.
struct CavityMarks {
  double t = 0.0;
  std::vector<double> xi;
  int sweeps = 0;
  bool converged = false;
  double residual = 0.0;

  // sum of xi(k, v) over neighbours k
  double incoming(const Graph& g, int v) const;
};

// Synchronous sweeps from xi = 0 until the largest change is below 1e-13.
// Exact after diameter + 1 sweeps on trees; a heuristic elsewhere.
CavityMarks cavity_messages(const Graph& g, double t, int max_sweeps = 10000);

extern template PiecewiseLinear<double> response_inverse_eps(const Graph&, int, const double&);
extern template PiecewiseLinear<Rational> response_inverse_eps(const Graph&, int, const Rational&);
extern template PiecewiseLinear<double> response_inverse_limit(const Graph&, int);
extern template PiecewiseLinear<Rational> response_inverse_limit(const Graph&, int);
extern template PiecewiseLinear<double> response_inverse_eps_rooted(const Graph&, int, const double&);
extern template PiecewiseLinear<Rational> response_inverse_eps_rooted(const Graph&, int,
                                                                      const Rational&);
extern template PiecewiseLinear<double> response_inverse_limit_rooted(const Graph&, int);
extern template PiecewiseLinear<Rational> response_inverse_limit_rooted(const Graph&, int);
extern template std::vector<PiecewiseLinear<double>> all_response_inverses_limit(const Graph&);
extern template std::vector<PiecewiseLinear<Rational>> all_response_inverses_limit(const Graph&);
extern template PiecewiseLinear<double> incoming_pressure(
    const Graph&, int, const std::vector<PiecewiseLinear<double>>&);
extern template PiecewiseLinear<Rational> incoming_pressure(
    const Graph&, int, const std::vector<PiecewiseLinear<Rational>>&);
extern template std::vector<double> exact_tree_loads<double>(const Graph&);
extern template std::vector<Rational> exact_tree_loads<Rational>(const Graph&);

}  // namespace balload

#endif  // BALLOAD_TREE_ENGINE_HPP
