#include "balload/allocator.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>

namespace balload {

Allocation::Allocation(std::vector<double> to_head, std::vector<char> inactive)
    : to_head_(std::move(to_head)), inactive_(std::move(inactive)) {
  if (!inactive_.empty() && inactive_.size() != to_head_.size()) {
    throw AllocationError("inactive mask size does not match edge count");
  }
}

Allocation Allocation::uniform(const Graph& g, double value) {
  return Allocation(std::vector<double>(static_cast<std::size_t>(g.num_edges()), value));
}

bool Allocation::active(int edge) const {
  return inactive_.empty() || !inactive_[static_cast<std::size_t>(edge)];
}

double Allocation::theta(int oriented) const {
  const int e = oriented >> 1;
  if (!active(e)) return 0.0;
  const double v = to_head_[static_cast<std::size_t>(e)];
  return (oriented & 1) ? 1.0 - v : v;
}

LoadVector load_of(const Graph& g, const Allocation& a) {
  if (a.num_edges() != g.num_edges()) {
    throw AllocationError("allocation has " + std::to_string(a.num_edges()) +
                          " edges, graph has " + std::to_string(g.num_edges()));
  }
  LoadVector load(static_cast<std::size_t>(g.num_vertices()), 0.0);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!a.active(e)) continue;
    const auto [u, v] = g.edges()[e];
    load[v] += a.to_head(e);
    load[u] += 1.0 - a.to_head(e);
  }
  return load;
}

BalanceCheck is_balanced(const Graph& g, const Allocation& a, double tol) {
  const LoadVector load = load_of(g, a);
  BalanceCheck check;
  for (int o = 0; o < g.num_oriented(); ++o) {
    const int i = g.tail(o);
    const int j = g.head(o);
    const double th = a.theta(o);
    if (load[i] < load[j] - tol && th > tol) {
      check.balanced = false;
      check.violations.push_back({o, th, load[i], load[j]});
    }
  }
  return check;
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Share sent to the head when the felt-load difference tail - head is z.
double share(double z, double eps) { return clamp01(0.5 + z / (2.0 * eps)); }

// Antiderivative of share(., eps).
double share_integral(double z, double eps) {
  if (z <= -eps) return 0.0;
  if (z >= eps) return z;
  return (z + eps) * (z + eps) / (4.0 * eps);
}

// Load-space formulation: with felt = b + l, the eps-balanced loads are the
// unique zero of R(l)_o = l_o - sum_i share(felt_i - felt_o). R is the gradient
// of the strongly convex potential below, and its Jacobian I + L_free / (2 eps)
// is a diagonally dominant M-matrix, so |l - l*|_inf <= |R(l)|_inf.
class LoadSystem {
 public:
  LoadSystem(const Graph& g, std::span<const char> active, std::span<const double> base,
             double eps)
      : g_(g), active_(active), base_(base), eps_(eps) {}

  double residual(const std::vector<double>& l, std::vector<double>& r) const {
    r = l;
    for (int e = 0; e < g_.num_edges(); ++e) {
      if (!active_[e]) continue;
      const auto [u, v] = g_.edges()[e];
      const double s = share(felt(l, u) - felt(l, v), eps_);
      r[v] -= s;
      r[u] -= 1.0 - s;
    }
    double worst = 0.0;
    for (double x : r) worst = std::max(worst, std::abs(x));
    return worst;
  }

  double potential(const std::vector<double>& l) const {
    double psi = 0.0;
    for (double x : l) psi += 0.5 * x * x;
    for (int e = 0; e < g_.num_edges(); ++e) {
      if (!active_[e]) continue;
      const auto [u, v] = g_.edges()[e];
      psi += share_integral(felt(l, u) - felt(l, v), eps_) - l[u];
    }
    return psi;
  }

  // Newton direction from J d = -r with J = I + L_free / (2 eps).
  bool newton_direction(const std::vector<double>& l, const std::vector<double>& r,
                        std::vector<double>& d) const {
    const int n = g_.num_vertices();
    d.assign(r.size(), 0.0);
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> vertices;
    std::vector<Eigen::Triplet<double>> triplets;
    const double w = 1.0 / (2.0 * eps_);
    std::vector<double> diag;
    auto slot = [&](int v) {
      if (index[v] < 0) {
        index[v] = static_cast<int>(vertices.size());
        vertices.push_back(v);
        diag.push_back(1.0);
      }
      return index[v];
    };
    for (int e = 0; e < g_.num_edges(); ++e) {
      if (!active_[e]) continue;
      const auto [u, v] = g_.edges()[e];
      if (std::abs(felt(l, u) - felt(l, v)) >= eps_) continue;
      const int a = slot(u), b = slot(v);
      diag[a] += w;
      diag[b] += w;
      triplets.emplace_back(a, b, -w);
      triplets.emplace_back(b, a, -w);
    }
    for (int v = 0; v < n; ++v) {
      if (index[v] < 0) d[v] = -r[v];
    }
    if (vertices.empty()) return true;
    const auto k = static_cast<Eigen::Index>(vertices.size());
    for (Eigen::Index i = 0; i < k; ++i) triplets.emplace_back(i, i, diag[i]);
    Eigen::SparseMatrix<double> jac(k, k);
    jac.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(jac);
    if (solver.info() != Eigen::Success) return false;
    Eigen::VectorXd rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) rhs[i] = -r[vertices[i]];
    const Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success) return false;
    for (Eigen::Index i = 0; i < k; ++i) d[vertices[i]] = x[i];
    return true;
  }

  // One synchronous load-space sweep: every vertex solves its own equation with
  // neighbours frozen. Contracts in sup-norm by deg / (deg + 2 eps).
  void jacobi_sweep(std::vector<double>& l) const {
    const int n = g_.num_vertices();
    std::vector<double> next(l.size());
    for (int o = 0; o < n; ++o) {
      double lo = 0.0, hi = 0.0;
      for (const auto& inc : g_.adjacency(o)) hi += active_[inc.out >> 1] ? 1.0 : 0.0;
      auto excess = [&](double x) {
        double incoming = 0.0;
        for (const auto& inc : g_.adjacency(o)) {
          if (!active_[inc.out >> 1]) continue;
          incoming += share(felt(l, inc.neighbor) - base(o) - x, eps_);
        }
        return x - incoming;
      };
      for (int it = 0; it < 100 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? hi : lo) = mid;
      }
      next[o] = 0.5 * (lo + hi);
    }
    l = std::move(next);
  }

  double felt(const std::vector<double>& l, int v) const { return base(v) + l[v]; }
  double base(int v) const { return base_.empty() ? 0.0 : base_[v]; }

 private:
  const Graph& g_;
  std::span<const char> active_;
  std::span<const double> base_;
  double eps_;
};

// Newton on the load system with an exact line search on the potential.
// Returns the iteration count and leaves the final residual in `residual`.
int solve_loads(const Graph& g, std::span<const char> active, std::span<const double> base,
                double eps, double tol, int max_iterations, std::vector<double>& l,
                double& residual) {
  const LoadSystem system(g, active, base, eps);
  double scale = 1.0 + g.max_degree();
  for (double b : base) scale = std::max(scale, 1.0 + std::abs(b));
  // Shares are (felt difference) / (2 eps), so rounding in R grows like 1 / eps.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * scale / std::min(1.0, eps);
  const double target = std::max(tol * std::min(1.0, eps), floor);

  std::vector<double> r, d, trial, r_trial;
  auto slope_at = [&](double step) {
    trial = l;
    for (std::size_t i = 0; i < d.size(); ++i) trial[i] += step * d[i];
    system.residual(trial, r_trial);
    double slope = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) slope += r_trial[i] * d[i];
    return slope;
  };
  residual = system.residual(l, r);
  for (int it = 0; it < max_iterations; ++it) {
    if (residual <= target) return it;
    if (!system.newton_direction(l, r, d)) {
      system.jacobi_sweep(l);
      residual = system.residual(l, r);
      continue;
    }
    // The potential is convex along d, so its slope is non-decreasing in the step.
    double step = 1.0;
    if (slope_at(1.0) > 0.0) {
      double lo = 0.0, hi = 1.0;
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        (slope_at(mid) > 0.0 ? hi : lo) = mid;
      }
      step = 0.5 * (lo + hi);
    }
    for (std::size_t i = 0; i < d.size(); ++i) l[i] += step * d[i];
    residual = system.residual(l, r);
  }
  if (residual <= target) return max_iterations;
  throw NonConvergenceError("eps-balancing did not converge in " + std::to_string(max_iterations) +
                                " iterations",
                            residual);
}

// Walks eps down a halving schedule, warm-starting each level from a linear
// extrapolation in eps of the previous two solutions. Small eps solved cold
// can take many damped steps; near the limit loads are affine in eps, so the
// extrapolated guess usually lands in the right linear piece.
class Continuation {
 public:
  Continuation(const Graph& g, std::span<const char> active, std::span<const double> base,
               double tol, int max_iterations)
      : g_(g), active_(active), base_(base), tol_(tol), max_iterations_(max_iterations) {}

  void solve(double eps, std::vector<double>& l) {
    if (history_.size() == 2) {
      const auto& [e0, l0] = history_[0];
      const auto& [e1, l1] = history_[1];
      const double w = (eps - e1) / (e0 - e1);
      for (std::size_t v = 0; v < l.size(); ++v) l[v] = l1[v] + w * (l0[v] - l1[v]);
    } else if (history_.size() == 1) {
      l = history_[0].second;
    }
    iterations_ += solve_loads(g_, active_, base_, eps, tol_, max_iterations_, l, residual_);
    if (history_.size() == 2) history_.erase(history_.begin());
    history_.emplace_back(eps, l);
  }

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  const Graph& g_;
  std::span<const char> active_;
  std::span<const double> base_;
  double tol_;
  int max_iterations_;
  std::vector<std::pair<double, std::vector<double>>> history_;
  int iterations_ = 0;
  double residual_ = 0.0;
};

// Continuation from eps = 1 when eps is small; eps >= 1/4 is solved directly.
void solve_eps(Continuation& path, double eps, std::vector<double>& l) {
  for (double level = 1.0; level > 2.0 * eps && eps < 0.25; level *= 0.5) path.solve(level, l);
  path.solve(eps, l);
}

EpsilonBalanced finish(const Graph& g, std::span<const char> active, std::span<const double> base,
                       double eps, const std::vector<double>& l, int iterations,
                       double residual) {
  std::vector<double> to_head(static_cast<std::size_t>(g.num_edges()), 0.0);
  std::vector<char> inactive(static_cast<std::size_t>(g.num_edges()), 0);
  bool any_inactive = false;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!active[e]) {
      inactive[e] = 1;
      any_inactive = true;
      continue;
    }
    const auto [u, v] = g.edges()[e];
    const double bu = base.empty() ? 0.0 : base[u];
    const double bv = base.empty() ? 0.0 : base[v];
    to_head[e] = share(bu + l[u] - bv - l[v], eps);
  }
  EpsilonBalanced out;
  out.allocation = Allocation(std::move(to_head), any_inactive ? std::move(inactive)
                                                               : std::vector<char>{});
  out.loads = load_of(g, out.allocation);
  out.iterations = iterations;
  out.residual = residual;
  return out;
}

std::vector<double> half_degrees(const Graph& g, std::span<const char> active) {
  std::vector<double> l(static_cast<std::size_t>(g.num_vertices()), 0.0);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!active[e]) continue;
    l[g.edges()[e].u] += 0.5;
    l[g.edges()[e].v] += 0.5;
  }
  return l;
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("eps must be positive and finite");
  }
}

}  // namespace

EpsilonBalanced epsilon_balance(const Graph& g, double eps, std::optional<int> max_degree,
                                double tol, int max_sweeps) {
  check_eps(eps);
  if (max_degree && *max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
  const std::vector<char> active = max_degree
                                       ? truncation_mask(g, *max_degree)
                                       : std::vector<char>(static_cast<std::size_t>(g.num_edges()), 1);
  std::vector<double> l = half_degrees(g, active);
  Continuation path(g, active, {}, tol, max_sweeps);
  solve_eps(path, eps, l);
  return finish(g, active, {}, eps, l, path.iterations(), path.residual());
}

EpsilonBalanced epsilon_balance_baseload(const Graph& g, std::span<const double> baseload,
                                         double eps, double tol, int max_sweeps) {
  check_eps(eps);
  if (static_cast<int>(baseload.size()) != g.num_vertices()) {
    throw AllocationError("baseload size does not match vertex count");
  }
  for (double b : baseload) {
    if (!std::isfinite(b)) throw AllocationError("baseload entries must be finite");
  }
  const std::vector<char> active(static_cast<std::size_t>(g.num_edges()), 1);
  std::vector<double> l = half_degrees(g, active);
  Continuation path(g, active, baseload, tol, max_sweeps);
  solve_eps(path, eps, l);
  return finish(g, active, baseload, eps, l, path.iterations(), path.residual());
}

double epsilon_fixed_point_residual(const Graph& g, const Allocation& a, double eps,
                                    std::span<const double> baseload) {
  const LoadVector load = load_of(g, a);
  double worst = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!a.active(e)) continue;
    const auto [u, v] = g.edges()[e];
    const double bu = baseload.empty() ? 0.0 : baseload[u];
    const double bv = baseload.empty() ? 0.0 : baseload[v];
    worst = std::max(worst, std::abs(a.to_head(e) - share(bu + load[u] - bv - load[v], eps)));
  }
  return worst;
}

ExactLoads exact_loads(const Graph& g, const ExactLoadOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  check_eps(options.initial_eps);
  const std::vector<char> active(static_cast<std::size_t>(g.num_edges()), 1);
  ExactLoads out;
  if (g.num_edges() == 0) {
    out.loads.assign(static_cast<std::size_t>(g.num_vertices()), 0.0);
    out.allocation = Allocation(std::vector<double>{});
    return out;
  }
  std::vector<double> l = half_degrees(g, active);
  const double inner_tol = options.tol * 1e-3;
  // Loads approach the limit like l0 + c eps + O(eps^2), so the stopping rule
  // is applied to the Richardson combination 2 theta(eps) - theta(2 eps) of
  // consecutive levels. Raw levels would need eps near tol, where shares lose
  // most of their digits to the 1 / eps amplification.
  Continuation path(g, active, {}, inner_tol, options.max_sweeps);
  std::vector<double> coarse;
  LoadVector previous;
  double eps = options.initial_eps;
  // Below this eps the 1 / eps amplification leaves shares with fewer than
  // about four correct digits; continuing returns noise.
  const double min_eps = 1e4 * 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + g.max_degree());
  for (int level = 0; level < options.max_levels; ++level, eps *= 0.5) {
    if (eps < min_eps) {
      throw NonConvergenceError("eps schedule reached the double-precision limit (eps " +
                                    std::to_string(eps) + ") before settling to tol",
                                options.tol);
    }
    path.solve(eps, l);
    EpsilonBalanced current = finish(g, active, {}, eps, l, path.iterations(), path.residual());
    std::vector<double> fine = current.allocation.values();
    if (coarse.empty()) {
      coarse = std::move(fine);
      continue;
    }
    std::vector<double> extrapolated(fine.size());
    for (std::size_t e = 0; e < fine.size(); ++e) {
      extrapolated[e] = clamp01(2.0 * fine[e] - coarse[e]);
    }
    coarse = std::move(fine);
    Allocation allocation(std::move(extrapolated));
    LoadVector loads = load_of(g, allocation);
    double change = std::numeric_limits<double>::infinity();
    if (!previous.empty()) {
      change = 0.0;
      for (std::size_t v = 0; v < loads.size(); ++v) {
        change = std::max(change, std::abs(loads[v] - previous[v]));
      }
    }
    previous = loads;
    out.loads = std::move(loads);
    out.allocation = std::move(allocation);
    out.final_eps = eps;
    out.levels = level + 1;
    if (change < options.tol / 2) return out;
  }
  throw NonConvergenceError("eps schedule did not settle within " +
                                std::to_string(options.max_levels) + " levels",
                            options.tol);
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::mean() const {
  if (sorted_.empty()) return 0.0;
  double sum = 0.0;
  for (double x : sorted_) sum += x;
  return sum / static_cast<double>(sorted_.size());
}

EmpiricalDistribution empirical_load_distribution(const LoadVector& loads) {
  return EmpiricalDistribution(loads);
}

namespace {

std::vector<double> merged_support(const EmpiricalDistribution& a,
                                   const EmpiricalDistribution& b) {
  std::vector<double> xs;
  xs.reserve(a.size() + b.size());
  std::merge(a.sorted().begin(), a.sorted().end(), b.sorted().begin(), b.sorted().end(),
             std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

double kolmogorov_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  double worst = 0.0;
  for (double x : merged_support(a, b)) worst = std::max(worst, std::abs(a.cdf(x) - b.cdf(x)));
  return worst;
}

double wasserstein1_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto xs = merged_support(a, b);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    total += std::abs(a.cdf(xs[k]) - b.cdf(xs[k])) * (xs[k + 1] - xs[k]);
  }
  return total;
}

}  // namespace balload
