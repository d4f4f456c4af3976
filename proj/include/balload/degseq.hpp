#ifndef BALLOAD_DEGSEQ_HPP
#define BALLOAD_DEGSEQ_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "balload/graph.hpp"
#include "balload/rng.hpp"

namespace balload {

class DegreeSpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Probability distribution on {0, 1, ..., K}. Poisson laws are truncated where
// the remaining tail mass drops below 1e-12 and renormalized.
class DegreeDistribution {
 public:
  DegreeDistribution() = default;

  // "poisson:<lambda>", "regular:<d>", "explicit:<p0,p1,...>" (the list may be
  // wrapped in parentheses).
  static DegreeDistribution parse(const std::string& spec);
  static DegreeDistribution poisson(double lambda);
  static DegreeDistribution regular(int d);
  static DegreeDistribution from_pmf(std::vector<double> pmf, std::string label = "");

  const std::vector<double>& pmf() const noexcept { return pmf_; }
  double operator[](int k) const;
  int max_degree() const noexcept { return static_cast<int>(pmf_.size()) - 1; }
  double mean() const;
  // pi_0 + pi_1 < 1
  bool has_mass_above_one() const;
  // sum_k pi_k e^{theta k}
  double exponential_moment(double theta) const;
  const std::string& label() const noexcept { return label_; }

 private:
  std::vector<double> pmf_{1.0};
  std::string label_ = "regular:0";
};

// pi_hat_n = (n + 1) pi_{n+1} / mean; throws std::invalid_argument on zero mean.
DegreeDistribution size_bias(const DegreeDistribution& pi);

// i.i.d. draws; if the sum is odd the last entry is incremented.
DegreeSequence sample_degree_sequence(const DegreeDistribution& pi, int n, std::uint64_t seed);

enum class MultiEdgePolicy {
  RemoveAll,  // drop loops and every copy of a repeated pair
  KeepOne,    // drop loops, keep one copy of a repeated pair
  Reject,     // resample the matching until it is simple
};

// Uniform matching of half-edges, then loop/multi-edge handling per policy.
Graph pairing_model(const DegreeSequence& d, std::uint64_t seed,
                    MultiEdgePolicy policy = MultiEdgePolicy::RemoveAll);
Graph pairing_model(const DegreeSequence& d, Rng& rng,
                    MultiEdgePolicy policy = MultiEdgePolicy::RemoveAll);

// Uniform simple graph with exactly m edges (Floyd sampling of pair indices).
Graph erdos_renyi_nm(int n, std::int64_t m, std::uint64_t seed);

// (1/n) sum_i e^{theta d_i}
double exponential_moment(const DegreeSequence& d, double theta);

}  // namespace balload

#endif  // BALLOAD_DEGSEQ_HPP
