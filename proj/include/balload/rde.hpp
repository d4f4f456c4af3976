#ifndef BALLOAD_RDE_HPP
#define BALLOAD_RDE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "balload/degseq.hpp"

namespace balload {

// Empirical stand-in for a law Q on [0, 1].
struct SamplePool {
  std::vector<double> values;
  int generation = 0;
  std::uint64_t seed = 0;
};

enum class Branch { Delta0, Delta1 };
std::string to_string(Branch b);

inline constexpr int kMinPoolSize = 1000;

struct RdeOptions {
  int pool_size = 100000;
  int objective_samples = 1000000;
  int batches = 20;
  // Stop once the W1 distance between consecutive pools stays below tol for
  // `stable_sweeps` sweeps.
  double tol = 1e-6;
  int stable_sweeps = 5;
  int max_sweeps = 2000;
  // Reuse one set of degree draws and uniform positions for every sweep,
  // indexing the sorted previous pool. The sweep map is then deterministic and
  // monotone, so the extremal iterates converge instead of jittering at the
  // 1/sqrt(N) noise level. false draws fresh randomness every sweep.
  bool common_random_numbers = true;
  int workers = 1;
};

// One synchronous sweep with fresh randomness: entry k of the new pool is
// [1 - t + xi_{I_1} + ... + xi_{I_D}]^1_0 with D ~ size_biased and I_j uniform.
SamplePool rde_update(const SamplePool& pool, const DegreeDistribution& size_biased, double t,
                      std::uint64_t seed, int workers = 1);

struct FixedPointResult {
  SamplePool pool;
  int sweeps = 0;
  bool converged = false;
  double residual = 0.0;  // last W1 between consecutive pools
};

// Iterates from the point mass at 0 (Delta0) or 1 (Delta1).
FixedPointResult solve_fixed_point(const DegreeDistribution& pi, double t, Branch init,
                                   const RdeOptions& options, std::uint64_t seed);

// W1 between equal-size pools: mean |sorted difference|.
double pool_wasserstein1(std::span<const double> a, std::span<const double> b);

struct ObjectiveEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double tail = 0.0;  // P(xi_1 + ... + xi_D > t)
  double tail_stderr = 0.0;
};

// (E[D] / 2) P(xi_1 + xi_2 > 1) - t P(xi_1 + ... + xi_D > t), D ~ pi, xi ~ pool,
// by batch means.
ObjectiveEstimate estimate_objective(const DegreeDistribution& pi, std::span<const double> pool,
                                     double t, const RdeOptions& options, std::uint64_t seed);

struct PhiEstimate {
  double t = 0.0;
  double phi = 0.0;  // unclamped
  double stderr_ = 0.0;
  Branch branch = Branch::Delta0;
  int sweeps = 0;
  double residual = 0.0;
  bool converged = false;
  double tail = 0.0;  // P(load > t) at the chosen branch
  double tail_stderr = 0.0;
  ObjectiveEstimate from_delta0;
  ObjectiveEstimate from_delta1;
};

// Both extremal fixed points, larger objective wins (Delta0 on ties).
PhiEstimate phi_of_t(const DegreeDistribution& pi, double t, const RdeOptions& options,
                     std::uint64_t seed);

struct RhoEstimate {
  double rho = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  // Whether Phi(lower bracket) was found positive; if not the bracket restarts at 0.
  bool lower_bracket_held = true;
  int evaluations = 0;
  bool all_converged = true;
};

// sup{t : Phi(t) > 0} by bisection; Phi counts as positive when it exceeds
// three standard errors. Lower bracket 1 when pi_0 + pi_1 < 1, else 0.
RhoEstimate rho_of_mu(const DegreeDistribution& pi, double tol_t, const RdeOptions& options,
                      std::uint64_t seed);

struct LoadTailPoint {
  double t = 0.0;
  double phi = 0.0;
  double phi_stderr = 0.0;
  double tail = 0.0;  // P(load > t) after isotonic cleanup
  double raw_tail = 0.0;
  double tail_stderr = 0.0;
};

// P(load > t) on the grid, non-increasing after pool-adjacent-violators.
std::vector<LoadTailPoint> predicted_load_cdf(const DegreeDistribution& pi,
                                              std::span<const double> t_grid,
                                              const RdeOptions& options, std::uint64_t seed);

// Least-squares non-increasing fit.
std::vector<double> isotonic_non_increasing(std::span<const double> y);

}  // namespace balload

#endif  // BALLOAD_RDE_HPP
