#include "balload/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

#include "balload/densest.hpp"
#include "balload/rng.hpp"

namespace balload {

namespace {

double half_degree_sum(const DegreeSequence& d) {
  long long total = 0;
  for (int x : d) total += x;
  if (total == 0) throw std::invalid_argument("degree sum is zero");
  return static_cast<double>(total) / 2.0;
}

double log_sum_exp_degrees(const DegreeSequence& d, double theta) {
  double top = -std::numeric_limits<double>::infinity();
  for (int x : d) top = std::max(top, theta * x);
  double s = 0.0;
  for (int x : d) s += std::exp(theta * x - top);
  return top + std::log(s);
}

LogBound from_log(double log_value) {
  return {log_value, log_value > 709.0 ? std::numeric_limits<double>::infinity() : std::exp(log_value)};
}

McStat bernoulli_stat(long long hits, int samples) {
  const double p = static_cast<double>(hits) / samples;
  return {p, std::sqrt(p * (1.0 - p) / samples)};
}

// Calls visit(mask) for every subset of {0..n-1} with exactly k elements.
template <class F>
void for_each_k_subset(int n, int k, std::uint64_t mask, int start, const F& visit) {
  if (k == 0) {
    visit(mask);
    return;
  }
  for (int v = start; v <= n - k; ++v) for_each_k_subset(n, k - 1, mask | (1ULL << v), v + 1, visit);
}

std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
  if (g.num_vertices() > 64) throw std::invalid_argument("subset enumeration needs n <= 64");
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.num_vertices()), 0);
  for (const auto& [u, v] : g.edges()) {
    adj[u] |= 1ULL << v;
    adj[v] |= 1ULL << u;
  }
  return adj;
}

int edges_in(const std::vector<std::uint64_t>& adj, std::uint64_t mask) {
  int twice = 0;
  for (std::uint64_t rest = mask; rest; rest &= rest - 1) {
    twice += std::popcount(adj[std::countr_zero(rest)] & mask);
  }
  return twice / 2;
}

}  // namespace

BinomialBound binomial_bound(const DegreeSequence& d, std::span<const int> subset) {
  BinomialBound b;
  b.m = half_degree_sum(d);
  for (int v : subset) {
    if (v < 0 || v >= static_cast<int>(d.size())) throw std::out_of_range("vertex out of range");
    b.s += d[v];
  }
  b.trials = b.s;
  b.p = std::min(1.0, static_cast<double>(b.s) / (2.0 * b.m));
  b.mean = static_cast<double>(b.s) * static_cast<double>(b.s) / b.m;
  return b;
}

double binomial_tail(std::int64_t trials, double p, std::int64_t r) {
  if (r <= 0) return 1.0;
  if (r > trials || p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  const double ln_fact_n = std::lgamma(static_cast<double>(trials) + 1.0);
  double total = 0.0;
  for (std::int64_t j = r; j <= trials; ++j) {
    total += std::exp(ln_fact_n - std::lgamma(static_cast<double>(j) + 1.0) -
                      std::lgamma(static_cast<double>(trials - j) + 1.0) + j * lp +
                      (trials - j) * lq);
  }
  return std::min(1.0, total);
}

LogBound expected_dense_count_bound(const DegreeSequence& d, int k, int r, double theta) {
  if (k < 1 || r < 1) throw std::invalid_argument("k and r must be >= 1");
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  const double m = half_degree_sum(d);
  const double log_value = r * std::log(2.0 * r / (theta * theta * m)) +
                           k * (1.0 - std::log(static_cast<double>(k)) + log_sum_exp_degrees(d, theta));
  return from_log(log_value);
}

ThetaMinimum expected_dense_count_bound_min(const DegreeSequence& d, int k, int r,
                                            std::span<const double> theta_grid) {
  if (theta_grid.empty()) throw std::invalid_argument("empty theta grid");
  ThetaMinimum best;
  best.bound.log_value = std::numeric_limits<double>::infinity();
  for (double theta : theta_grid) {
    const LogBound b = expected_dense_count_bound(d, k, r, theta);
    if (b.log_value < best.bound.log_value) best = {b, theta};
  }
  return best;
}

MomentParams moment_params(const DegreeSequence& d, double theta) {
  if (d.empty()) throw std::invalid_argument("empty degree sequence");
  MomentParams p;
  p.theta = theta;
  p.alpha = 2.0 * half_degree_sum(d) / static_cast<double>(d.size());
  p.lambda = exponential_moment(d, theta);
  return p;
}

double z_f(const MomentParams& params, double t, double delta) {
  const double base = std::max(1.0, 2.0 * (1.0 + t) / (params.alpha * params.theta * params.theta));
  return std::pow(base, t + 1.0) * std::exp(1.0) * params.lambda * std::pow(delta, t - 1.0);
}

ZBound z_delta_t_bound(const DegreeSequence& d, double t, double theta, std::int64_t n) {
  if (!(t > 1.0)) throw BoundError("t must exceed 1");
  if (!(theta > 0.0)) throw BoundError("theta must be positive");
  if (n < 3) throw BoundError("n must be at least 3");
  ZBound z;
  z.params = moment_params(d, theta);
  z.t = t;
  int j = 0;
  for (; j <= 1000; ++j) {
    if (z_f(z.params, t, std::ldexp(1.0, -j)) < 1.0) break;
  }
  if (j > 1000) throw BoundError("f(delta) >= 1 on the whole grid; theta too small");
  z.delta_exponent = j;
  z.delta = std::ldexp(1.0, -j);
  z.f_delta = z_f(z.params, t, z.delta);
  z.c = std::max(1.0, (t - 1.0) / -std::log(z.f_delta));

  const double nn = static_cast<double>(n);
  const double scale = std::pow(std::log(nn) / nn, t - 1.0);
  // Sets up to c ln n vertices: f(k/n) <= x; larger ones: f(k/n) <= f(delta).
  const double x = z_f(z.params, t, std::min(z.delta, z.c * std::log(nn) / nn));
  const double leading = z.f_delta / std::pow(z.delta, t - 1.0);
  z.kappa = x < 1.0 ? leading * std::pow(z.c, t - 1.0) / (1.0 - x) + 1.0 / (1.0 - z.f_delta)
                    : std::numeric_limits<double>::infinity();
  z.bound = z.kappa * scale;
  z.max_set_size = static_cast<std::int64_t>(std::floor(z.delta * nn));
  for (std::int64_t k = 1; k <= z.max_set_size; ++k) {
    z.direct_sum += std::pow(z_f(z.params, t, static_cast<double>(k) / nn), static_cast<double>(k));
  }
  return z;
}

std::vector<BinomialCheckRow> validate_binomial_bound(const DegreeSequence& d, int set_size,
                                                      int samples, std::uint64_t seed) {
  if (set_size < 0 || set_size > static_cast<int>(d.size())) {
    throw std::invalid_argument("set size out of range");
  }
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::vector<int> subset(static_cast<std::size_t>(set_size));
  for (int v = 0; v < set_size; ++v) subset[v] = v;
  const BinomialBound b = binomial_bound(d, subset);
  std::vector<long long> hits(static_cast<std::size_t>(set_size) + 1, 0);
  for (int s = 0; s < samples; ++s) {
    const Graph g = pairing_model(d, derive_seed(seed, static_cast<std::uint64_t>(s)));
    int inside = 0;
    for (const auto& [u, v] : g.edges()) inside += (u < set_size && v < set_size) ? 1 : 0;
    for (int r = 1; r <= set_size; ++r) hits[r] += inside >= r ? 1 : 0;
  }
  std::vector<BinomialCheckRow> rows;
  for (int r = 1; r <= set_size; ++r) {
    BinomialCheckRow row;
    row.r = r;
    row.bound = binomial_tail(b.trials, b.p, r);
    row.empirical = bernoulli_stat(hits[r], samples);
    row.pass = row.empirical.mean <= row.bound + 3.0 * row.empirical.stderr_;
    rows.push_back(row);
  }
  return rows;
}

std::vector<DenseCountRow> validate_dense_count_bound(const DegreeSequence& d, int max_k,
                                                      double theta, int samples,
                                                      std::uint64_t seed) {
  const int n = static_cast<int>(d.size());
  if (n > 64) throw std::invalid_argument("dense count validation needs n <= 64");
  if (max_k < 1 || max_k > n) throw std::invalid_argument("max_k out of range");
  // counts[k][r] per sample, accumulated as sum and sum of squares
  std::vector<std::vector<double>> sum(max_k + 1), sum_sq(max_k + 1);
  for (int k = 1; k <= max_k; ++k) {
    sum[k].assign(static_cast<std::size_t>(k * (k - 1) / 2) + 1, 0.0);
    sum_sq[k] = sum[k];
  }
  for (int s = 0; s < samples; ++s) {
    const Graph g = pairing_model(d, derive_seed(seed, static_cast<std::uint64_t>(s)));
    const auto adj = adjacency_masks(g);
    for (int k = 1; k <= max_k; ++k) {
      std::vector<long long> by_edges(sum[k].size(), 0);
      for_each_k_subset(n, k, 0, 0, [&](std::uint64_t mask) { ++by_edges[edges_in(adj, mask)]; });
      long long at_least = 0;
      for (std::size_t r = by_edges.size(); r-- > 1;) {
        at_least += by_edges[r];
        sum[k][r] += static_cast<double>(at_least);
        sum_sq[k][r] += static_cast<double>(at_least) * static_cast<double>(at_least);
      }
    }
  }
  std::vector<DenseCountRow> rows;
  for (int k = 1; k <= max_k; ++k) {
    for (std::size_t r = 1; r < sum[k].size(); ++r) {
      DenseCountRow row;
      row.k = k;
      row.r = static_cast<int>(r);
      row.bound = expected_dense_count_bound(d, k, row.r, theta).value;
      const double mean = sum[k][r] / samples;
      const double var = std::max(0.0, sum_sq[k][r] / samples - mean * mean);
      row.empirical = {mean, std::sqrt(var / samples)};
      row.pass = row.empirical.mean <= row.bound + 3.0 * row.empirical.stderr_;
      rows.push_back(row);
    }
  }
  return rows;
}

std::int64_t count_dense_small_sets(const Graph& g, int max_size, double t) {
  const int n = g.num_vertices();
  max_size = std::min(max_size, n);
  if (max_size <= 0) return 0;
  if (rho_maxflow(g).rho.to_double() < t) return 0;
  double combos = 0.0;
  for (int k = 1; k <= max_size; ++k) combos += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
  if (combos > 1e8) throw std::invalid_argument("too many subsets to enumerate");
  const auto adj = adjacency_masks(g);
  std::int64_t count = 0;
  for (int k = 1; k <= max_size; ++k) {
    for_each_k_subset(n, k, 0, 0, [&](std::uint64_t mask) {
      if (edges_in(adj, mask) >= t * k) ++count;
    });
  }
  return count;
}

void write_dense_count_csv(std::ostream& out, std::span<const DenseCountRow> rows) {
  const auto old = out.precision(17);
  out << "k,r,bound,mc_mean,mc_stderr\n";
  for (const auto& row : rows) {
    out << row.k << ',' << row.r << ',' << row.bound << ',' << row.empirical.mean << ','
        << row.empirical.stderr_ << '\n';
  }
  out.precision(old);
}

}  // namespace balload
