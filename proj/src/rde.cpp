#include "balload/rde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace balload {

std::string to_string(Branch b) { return b == Branch::Delta0 ? "delta0" : "delta1"; }

namespace {

// Work is cut into a fixed number of chunks with their own RNG streams, so the
// output depends on the seed only, not on the worker count.
constexpr int kChunks = 64;

template <class F>
void for_each_chunk(int chunks, int workers, const F& body) {
  workers = std::clamp(workers, 1, chunks);
  if (workers == 1) {
    for (int c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (int c = w; c < chunks; c += workers) body(c);
    });
  }
  for (auto& th : threads) th.join();
}

std::pair<std::size_t, std::size_t> chunk_range(std::size_t n, int chunk) {
  const std::size_t lo = n * static_cast<std::size_t>(chunk) / kChunks;
  const std::size_t hi = n * static_cast<std::size_t>(chunk + 1) / kChunks;
  return {lo, hi};
}

void check_pool_size(int n) {
  if (n < kMinPoolSize) {
    throw std::invalid_argument("pool size must be at least " + std::to_string(kMinPoolSize));
  }
}

// Degree draws and uniform positions fixed for all sweeps.
struct QuenchedDraws {
  std::vector<std::size_t> offsets;
  std::vector<double> positions;  // in [0, 1)
};

QuenchedDraws quenched_draws(const DegreeDistribution& size_biased, std::size_t n,
                             std::uint64_t seed, int workers) {
  std::vector<std::vector<int>> degrees(kChunks);
  std::vector<std::vector<double>> positions(kChunks);
  for_each_chunk(kChunks, workers, [&](int c) {
    const auto [lo, hi] = chunk_range(n, c);
    Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    std::discrete_distribution<int> draw(size_biased.pmf().begin(), size_biased.pmf().end());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t k = lo; k < hi; ++k) {
      const int d = draw(rng);
      degrees[c].push_back(d);
      for (int j = 0; j < d; ++j) positions[c].push_back(unif(rng));
    }
  });
  QuenchedDraws q;
  q.offsets.reserve(n + 1);
  q.offsets.push_back(0);
  for (int c = 0; c < kChunks; ++c) {
    for (int d : degrees[c]) q.offsets.push_back(q.offsets.back() + static_cast<std::size_t>(d));
    q.positions.insert(q.positions.end(), positions[c].begin(), positions[c].end());
  }
  return q;
}

void quenched_sweep(const QuenchedDraws& q, const std::vector<double>& sorted, double t,
                    std::vector<double>& out, int workers) {
  const std::size_t n = sorted.size();
  out.resize(n);
  for_each_chunk(kChunks, workers, [&](int c) {
    const auto [lo, hi] = chunk_range(n, c);
    for (std::size_t k = lo; k < hi; ++k) {
      double s = 1.0 - t;
      for (std::size_t j = q.offsets[k]; j < q.offsets[k + 1]; ++j) {
        s += sorted[std::min(n - 1, static_cast<std::size_t>(q.positions[j] * n))];
      }
      out[k] = std::clamp(s, 0.0, 1.0);
    }
  });
}

}  // namespace

SamplePool rde_update(const SamplePool& pool, const DegreeDistribution& size_biased, double t,
                      std::uint64_t seed, int workers) {
  const std::size_t n = pool.values.size();
  if (n == 0) throw std::invalid_argument("empty pool");
  SamplePool next;
  next.values.resize(n);
  next.generation = pool.generation + 1;
  next.seed = seed;
  for_each_chunk(kChunks, workers, [&](int c) {
    const auto [lo, hi] = chunk_range(n, c);
    Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    std::discrete_distribution<int> draw(size_biased.pmf().begin(), size_biased.pmf().end());
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = lo; k < hi; ++k) {
      double s = 1.0 - t;
      for (int j = draw(rng); j > 0; --j) s += pool.values[pick(rng)];
      next.values[k] = std::clamp(s, 0.0, 1.0);
    }
  });
  return next;
}

double pool_wasserstein1(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pools differ in size");
  if (a.empty()) return 0.0;
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += std::abs(x[k] - y[k]);
  return s / static_cast<double>(x.size());
}

FixedPointResult solve_fixed_point(const DegreeDistribution& pi, double t, Branch init,
                                   const RdeOptions& options, std::uint64_t seed) {
  check_pool_size(options.pool_size);
  const DegreeDistribution hat = size_bias(pi);
  const auto n = static_cast<std::size_t>(options.pool_size);
  FixedPointResult result;
  result.pool.values.assign(n, init == Branch::Delta0 ? 0.0 : 1.0);
  result.pool.seed = seed;

  QuenchedDraws q;
  if (options.common_random_numbers) q = quenched_draws(hat, n, seed, options.workers);
  std::vector<double> sorted_prev(result.pool.values);
  std::vector<double> next, sorted_next;
  int stable = 0;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    if (options.common_random_numbers) {
      quenched_sweep(q, sorted_prev, t, next, options.workers);
    } else {
      next = rde_update(result.pool, hat, t, derive_seed(seed, 1u << 20, sweep), options.workers)
                 .values;
    }
    sorted_next = next;
    std::sort(sorted_next.begin(), sorted_next.end());
    double w1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) w1 += std::abs(sorted_next[k] - sorted_prev[k]);
    w1 /= static_cast<double>(n);
    result.pool.values.swap(next);
    result.pool.generation = sweep;
    sorted_prev.swap(sorted_next);
    result.sweeps = sweep;
    result.residual = w1;
    stable = w1 < options.tol ? stable + 1 : 0;
    if (stable >= options.stable_sweeps) {
      result.converged = true;
      break;
    }
  }
  return result;
}

ObjectiveEstimate estimate_objective(const DegreeDistribution& pi, std::span<const double> pool,
                                     double t, const RdeOptions& options, std::uint64_t seed) {
  if (pool.empty()) throw std::invalid_argument("empty pool");
  if (options.batches < 2 || options.objective_samples < options.batches) {
    throw std::invalid_argument("need at least two batches with one sample each");
  }
  const double half_mean = pi.mean() / 2.0;
  const int batches = options.batches;
  std::vector<double> value_means(static_cast<std::size_t>(batches));
  std::vector<double> tail_means(static_cast<std::size_t>(batches));
  const long long per_batch = options.objective_samples / batches;
  for_each_chunk(batches, options.workers, [&](int b) {
    Rng rng = make_rng(derive_seed(seed, 0xb00000u + static_cast<std::uint64_t>(b)));
    std::discrete_distribution<int> draw(pi.pmf().begin(), pi.pmf().end());
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    long long edge_hits = 0, tail_hits = 0;
    for (long long s = 0; s < per_batch; ++s) {
      if (pool[pick(rng)] + pool[pick(rng)] > 1.0) ++edge_hits;
      double sum = 0.0;
      for (int j = draw(rng); j > 0; --j) sum += pool[pick(rng)];
      if (sum > t) ++tail_hits;
    }
    const double edge = static_cast<double>(edge_hits) / static_cast<double>(per_batch);
    const double tail = static_cast<double>(tail_hits) / static_cast<double>(per_batch);
    value_means[b] = half_mean * edge - t * tail;
    tail_means[b] = tail;
  });
  auto mean_and_stderr = [batches](const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= batches;
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= (batches - 1);
    return std::pair{m, std::sqrt(v / batches)};
  };
  ObjectiveEstimate out;
  std::tie(out.value, out.stderr_) = mean_and_stderr(value_means);
  std::tie(out.tail, out.tail_stderr) = mean_and_stderr(tail_means);
  return out;
}

PhiEstimate phi_of_t(const DegreeDistribution& pi, double t, const RdeOptions& options,
                     std::uint64_t seed) {
  if (!(pi.mean() > 0.0)) throw std::invalid_argument("phi needs a positive mean degree");
  const auto low = solve_fixed_point(pi, t, Branch::Delta0, options, derive_seed(seed, 1));
  const auto high = solve_fixed_point(pi, t, Branch::Delta1, options, derive_seed(seed, 2));
  const std::uint64_t objective_seed = derive_seed(seed, 3);
  PhiEstimate est;
  est.t = t;
  est.from_delta0 = estimate_objective(pi, low.pool.values, t, options, objective_seed);
  est.from_delta1 = estimate_objective(pi, high.pool.values, t, options, objective_seed);
  const bool use_high = est.from_delta1.value > est.from_delta0.value;
  const auto& chosen = use_high ? est.from_delta1 : est.from_delta0;
  const auto& run = use_high ? high : low;
  est.branch = use_high ? Branch::Delta1 : Branch::Delta0;
  est.phi = chosen.value;
  est.stderr_ = chosen.stderr_;
  est.tail = chosen.tail;
  est.tail_stderr = chosen.tail_stderr;
  est.sweeps = run.sweeps;
  est.residual = run.residual;
  est.converged = low.converged && high.converged;
  return est;
}

RhoEstimate rho_of_mu(const DegreeDistribution& pi, double tol_t, const RdeOptions& options,
                      std::uint64_t seed) {
  if (!(tol_t > 0.0)) throw std::invalid_argument("tol_t must be positive");
  RhoEstimate out;
  if (!(pi.mean() > 0.0)) return out;
  auto positive = [&](double t) {
    const PhiEstimate est = phi_of_t(pi, t, options, seed);
    ++out.evaluations;
    out.all_converged = out.all_converged && est.converged;
    return est.phi > 3.0 * est.stderr_;
  };
  double lower = pi.has_mass_above_one() ? 1.0 : 0.0;
  if (lower > 0.0 && !positive(lower)) {
    out.lower_bracket_held = false;
    lower = 0.0;
  }
  double upper = std::max(pi.mean(), lower + tol_t);
  if (out.lower_bracket_held) {
    while (positive(upper)) {
      lower = upper;
      upper *= 2.0;
    }
  } else {
    upper = 1.0;
  }
  while (upper - lower > tol_t) {
    const double mid = 0.5 * (lower + upper);
    (positive(mid) ? lower : upper) = mid;
  }
  out.lower = lower;
  out.upper = upper;
  out.rho = 0.5 * (lower + upper);
  return out;
}

std::vector<double> isotonic_non_increasing(std::span<const double> y) {
  // Pool adjacent violators on blocks (mean, weight).
  std::vector<double> mean;
  std::vector<int> weight;
  for (double v : y) {
    mean.push_back(v);
    weight.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] < mean.back()) {
      const double w1 = weight[weight.size() - 2], w2 = weight.back();
      const double merged = (mean[mean.size() - 2] * w1 + mean.back() * w2) / (w1 + w2);
      mean.pop_back();
      weight.pop_back();
      mean.back() = merged;
      weight.back() += static_cast<int>(w2);
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (std::size_t b = 0; b < mean.size(); ++b) out.insert(out.end(), weight[b], mean[b]);
  return out;
}

std::vector<LoadTailPoint> predicted_load_cdf(const DegreeDistribution& pi,
                                              std::span<const double> t_grid,
                                              const RdeOptions& options, std::uint64_t seed) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw std::invalid_argument("t grid must be sorted");
  }
  std::vector<LoadTailPoint> points;
  std::vector<double> raw;
  for (double t : t_grid) {
    const PhiEstimate est = phi_of_t(pi, t, options, seed);
    LoadTailPoint p;
    p.t = t;
    p.phi = est.phi;
    p.phi_stderr = est.stderr_;
    p.raw_tail = est.tail;
    p.tail_stderr = est.tail_stderr;
    points.push_back(p);
    raw.push_back(est.tail);
  }
  const auto cleaned = isotonic_non_increasing(raw);
  for (std::size_t k = 0; k < points.size(); ++k) points[k].tail = std::clamp(cleaned[k], 0.0, 1.0);
  return points;
}

}  // namespace balload
