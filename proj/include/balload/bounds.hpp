#ifndef BALLOAD_BOUNDS_HPP
#define BALLOAD_BOUNDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "balload/degseq.hpp"
#include "balload/graph.hpp"

namespace balload {

// Edges inside S in the pairing model are dominated by Binomial(trials, p).
struct BinomialBound {
  std::int64_t s = 0;  // sum of degrees in S
  double m = 0.0;      // half the degree sum
  std::int64_t trials = 0;
  double p = 0.0;      // s / 2m
  double mean = 0.0;   // s^2 / m
};

// Throws std::invalid_argument when the degree sum is zero.
BinomialBound binomial_bound(const DegreeSequence& d, std::span<const int> subset);

// P(Binomial(trials, p) >= r)
double binomial_tail(std::int64_t trials, double p, std::int64_t r);

struct LogBound {
  double log_value = 0.0;
  double value = 0.0;  // +inf when exp overflows
};

// Bound on the expected number of k-vertex sets spanning at least r edges:
// (2r / (theta^2 m))^r ((e / k) sum_i e^{theta d_i})^k.
LogBound expected_dense_count_bound(const DegreeSequence& d, int k, int r, double theta);

// Minimum of the bound over a theta grid, with the minimizing theta.
struct ThetaMinimum {
  LogBound bound;
  double theta = 0.0;
};
ThetaMinimum expected_dense_count_bound_min(const DegreeSequence& d, int k, int r,
                                            std::span<const double> theta_grid);

struct MomentParams {
  double theta = 0.0;
  double alpha = 0.0;   // mean degree
  double lambda = 0.0;  // (1/n) sum e^{theta d_i}
};
MomentParams moment_params(const DegreeSequence& d, double theta);

// f(delta) = (1 v 2(1+t)/(alpha theta^2))^{t+1} e lambda delta^{t-1}
double z_f(const MomentParams& params, double t, double delta);

struct ZBound {
  MomentParams params;
  double t = 0.0;
  double delta = 0.0;  // largest 2^-j with f(delta) < 1
  int delta_exponent = 0;
  double f_delta = 0.0;
  double c = 0.0;      // split point m = c ln n
  double kappa = 0.0;  // E[Z] <= kappa (ln n / n)^{t-1}
  double bound = 0.0;  // kappa (ln n / n)^{t-1} at the requested n
  double direct_sum = 0.0;  // sum_{k <= delta n} f(k/n)^k
  std::int64_t max_set_size = 0;  // floor(delta n)
};

class BoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws BoundError when t <= 1, theta <= 0, or no grid delta has f < 1.
ZBound z_delta_t_bound(const DegreeSequence& d, double t, double theta, std::int64_t n);

// Monte Carlo checks over pairing-model samples.
struct McStat {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct BinomialCheckRow {
  int r = 0;
  double bound = 0.0;  // P(Bin >= r)
  McStat empirical;    // P(Z_S >= r)
  bool pass = false;   // empirical <= bound + 3 stderr
};

// S = {0, ..., set_size - 1}; the pairing model is exchangeable in vertex labels.
std::vector<BinomialCheckRow> validate_binomial_bound(const DegreeSequence& d, int set_size,
                                                      int samples, std::uint64_t seed);

struct DenseCountRow {
  int k = 0;
  int r = 0;
  double bound = 0.0;
  McStat empirical;  // number of k-sets spanning >= r edges
  bool pass = false;
};

// All (k, r) with 1 <= k <= max_k and 1 <= r <= k(k-1)/2; needs n <= 64.
std::vector<DenseCountRow> validate_dense_count_bound(const DegreeSequence& d, int max_k,
                                                      double theta, int samples,
                                                      std::uint64_t seed);

// Number of vertex sets S with 1 <= |S| <= max_size and |E(S)| >= t |S|.
// Returns 0 without enumeration when max_size is 0 or the densest subgraph
// density is below t.
std::int64_t count_dense_small_sets(const Graph& g, int max_size, double t);

void write_dense_count_csv(std::ostream& out, std::span<const DenseCountRow> rows);

}  // namespace balload

#endif  // BALLOAD_BOUNDS_HPP
