#ifndef BALLOAD_ALLOCATOR_HPP
#define BALLOAD_ALLOCATOR_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "balload/graph.hpp"

namespace balload {

using LoadVector = std::vector<double>;
using Baseload = std::vector<double>;

// theta(i, j) in [0, 1] is the share of edge {i, j} sent to j. One value per
// undirected edge (the share sent to edges()[e].v), so theta(i,j) + theta(j,i) = 1
// holds by construction. Edges marked inactive carry nothing in either direction
// (used for truncated graphs).
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<double> to_head, std::vector<char> inactive = {});
  static Allocation uniform(const Graph& g, double value = 0.5);

  int num_edges() const noexcept { return static_cast<int>(to_head_.size()); }
  // Share sent along the oriented edge (tail -> head).
  double theta(int oriented) const;
  double to_head(int edge) const { return to_head_[static_cast<std::size_t>(edge)]; }
  bool active(int edge) const;
  const std::vector<double>& values() const noexcept { return to_head_; }

 private:
  std::vector<double> to_head_;
  std::vector<char> inactive_;
};

class AllocationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// d(theta)(o) = sum over neighbours i of theta(i, o).
LoadVector load_of(const Graph& g, const Allocation& a);

struct BalanceViolation {
  int oriented;  // (i -> j) with load(i) < load(j) - tol and theta(i, j) > tol
  double theta;
  double load_tail;
  double load_head;
};

struct BalanceCheck {
  bool balanced = true;
  std::vector<BalanceViolation> violations;
};

BalanceCheck is_balanced(const Graph& g, const Allocation& a, double tol);

struct EpsilonBalanced {
  Allocation allocation;
  LoadVector loads;   // d(theta), baseload excluded
  int iterations = 0;
  double residual = 0.0;  // sup-norm of loads minus the loads induced by the update rule
};

inline constexpr int kDefaultMaxSweeps = 500;

// Unique allocation with theta(i,j) = [1/2 + (load(i) - load(j)) / (2 eps)] clamped
// to [0, 1]. With max_degree set, runs on truncate(g, max_degree); removed edges
// are inactive. Loads are accurate to tol in sup-norm.
EpsilonBalanced epsilon_balance(const Graph& g, double eps, std::optional<int> max_degree = {},
                                double tol = 1e-10, int max_sweeps = kDefaultMaxSweeps);

// Same with the felt load b + d(theta) in place of d(theta).
EpsilonBalanced epsilon_balance_baseload(const Graph& g, std::span<const double> baseload,
                                         double eps, double tol = 1e-10,
                                         int max_sweeps = kDefaultMaxSweeps);

// Largest |theta(i,j) - [1/2 + (felt(i) - felt(j)) / (2 eps)]| over oriented edges,
// with felt = b + d(theta) recomputed from the allocation itself.
double epsilon_fixed_point_residual(const Graph& g, const Allocation& a, double eps,
                                    std::span<const double> baseload = {});

struct ExactLoads {
  LoadVector loads;
  Allocation allocation;
  double final_eps = 0.0;
  int levels = 0;
};

struct ExactLoadOptions {
  double tol = 1e-8;
  double initial_eps = 1.0;
  int max_levels = 80;
  int max_sweeps = kDefaultMaxSweeps;
};

// Balanced loads as the limit of eps-balanced loads along eps_k = eps_0 2^-k,
// warm-started, stopping once consecutive levels differ by less than tol / 2.
ExactLoads exact_loads(const Graph& g, const ExactLoadOptions& options = {});

// Sorted multiset of loads, i.e. the empirical load distribution.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  // P(X <= x)
  double cdf(double x) const;
  // P(X > x)
  double tail(double x) const { return 1.0 - cdf(x); }
  double mean() const;

 private:
  std::vector<double> sorted_;
};

EmpiricalDistribution empirical_load_distribution(const LoadVector& loads);

// sup_x |F(x) - G(x)|
double kolmogorov_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
// integral |F(x) - G(x)| dx
double wasserstein1_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

}  // namespace balload

#endif  // BALLOAD_ALLOCATOR_HPP
