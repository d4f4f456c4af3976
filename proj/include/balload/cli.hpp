#ifndef BALLOAD_CLI_HPP
#define BALLOAD_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "balload/degseq.hpp"
#include "balload/graph.hpp"
#include "balload/rde.hpp"

namespace balload::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;

// git describe of the source tree at configure time.
std::string version();

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "a:b:step" (inclusive of b up to rounding) or "x,y,z".
std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

enum class GraphModel { Pairing, ErdosRenyi };
GraphModel parse_graph_model(const std::string& text);

// Random graph for a degree-distribution spec: pairing model on an i.i.d.
// degree sequence, or G(n, floor(mean n / 2)) for the ER variant.
Graph generate_graph(const DegreeDistribution& pi, int n, std::uint64_t seed, GraphModel model,
                     MultiEdgePolicy policy = MultiEdgePolicy::RemoveAll);

struct CompareConfig {
  std::string model;
  GraphModel graph_model = GraphModel::Pairing;
  std::vector<int> n_grid;
  int replicates = 10;
  std::uint64_t seed = 1;
  std::vector<double> t_grid;
  RdeOptions rde;
  double tol_t = 0.005;
  int workers = 1;
};

struct CompareRow {
  int n = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  int edges = 0;
  double rho_graph = 0.0;
  double kolmogorov = 0.0;    // max over the t grid of |F_G(t) - F_pred(t)|
  double wasserstein1 = 0.0;  // left Riemann sum of |F_G - F_pred| on the grid
};

struct CompareSummary {
  int n = 0;
  double median_rho = 0.0;
  double median_kolmogorov = 0.0;
  double median_wasserstein1 = 0.0;
};

struct CompareResult {
  std::vector<LoadTailPoint> prediction;
  std::optional<RhoEstimate> rho_mu;  // only when pi_0 + pi_1 < 1
  std::vector<CompareRow> rows;       // sorted by (n, replicate)
  std::vector<CompareSummary> summary;
  bool kolmogorov_non_increasing = true;
};

CompareResult run_compare(const CompareConfig& config);

// Sup distance on a grid between the empirical CDF of `loads` and 1 - tail.
double grid_kolmogorov(const std::vector<double>& loads, const std::vector<LoadTailPoint>& pred);
double grid_wasserstein1(const std::vector<double>& loads, const std::vector<LoadTailPoint>& pred);

double median(std::vector<double> xs);

}  // namespace balload::cli

#endif  // BALLOAD_CLI_HPP
