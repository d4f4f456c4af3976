#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "balload/allocator.hpp"
#include "balload/densest.hpp"
#include "balload/degseq.hpp"
#include "support.hpp"

using namespace balload;
using namespace balload::testing;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Allocation sending `share` along (i -> j) for the given oriented edge, 1/2 elsewhere.
Allocation with_share(const Graph& g, int oriented_edge, double share, Allocation base) {
  std::vector<double> v = base.values();
  const int e = oriented_edge / 2;
  v[e] = oriented_edge % 2 == 0 ? share : 1.0 - share;
  return Allocation(v);
}

}  // namespace

TEST_CASE("load_of examples") {
  const Graph k2 = complete_graph(2);
  CHECK(load_of(k2, Allocation::uniform(k2)) == std::vector<double>{0.5, 0.5});
  const Graph k3 = complete_graph(3);
  CHECK(load_of(k3, Allocation::uniform(k3)) == std::vector<double>{1.0, 1.0, 1.0});

  const Graph p = path_graph(3);  // a=0, b=1, c=2
  Allocation a = Allocation::uniform(p);
  a = with_share(p, oriented(p, 1, 0), 2.0 / 3.0, a);
  a = with_share(p, oriented(p, 1, 2), 2.0 / 3.0, a);
  const auto loads = load_of(p, a);
  for (double x : loads) CHECK(x == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("allocation size mismatch is rejected") {
  CHECK_THROWS(load_of(complete_graph(3), Allocation(std::vector<double>{0.5})));
}

TEST_CASE("is_balanced examples") {
  const Graph k3 = complete_graph(3);
  CHECK(is_balanced(k3, Allocation::uniform(k3), 1e-9).balanced);

  const Graph k2 = complete_graph(2);
  // theta(0 -> 1) = 1: loads (0, 1) and mass flows toward the heavier end
  const auto check = is_balanced(k2, Allocation({1.0}), 1e-9);
  CHECK_FALSE(check.balanced);
  REQUIRE(check.violations.size() == 1);
  CHECK(check.violations[0].oriented == oriented(k2, 0, 1));

  const Graph tp = triangle_pendant();
  const auto exact = exact_loads(tp);
  CHECK(is_balanced(tp, exact.allocation, 1e-6).balanced);
}

TEST_CASE("epsilon_balance examples") {
  const Graph k2 = complete_graph(2);
  const auto r = epsilon_balance(k2, 0.5);
  CHECK(r.allocation.to_head(0) == doctest::Approx(0.5));

  // scalar oracle: y = theta(b, a) solves y = clamp(1/2 + (2(1 - y) - y) / (2 eps))
  const double eps = 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double y = 0.5 * (lo + hi);
    const double rhs = std::clamp(0.5 + (2.0 * (1.0 - y) - y) / (2.0 * eps), 0.0, 1.0);
    (y - rhs < 0 ? lo : hi) = y;
  }
  const double y = 0.5 * (lo + hi);
  CHECK(y == doctest::Approx(0.6).epsilon(1e-12));
  const Graph p = path_graph(3);
  const auto path = epsilon_balance(p, eps);
  CHECK(path.allocation.theta(oriented(p, 1, 0)) == doctest::Approx(y).epsilon(1e-9));
  CHECK(path.allocation.theta(oriented(p, 1, 2)) == doctest::Approx(y).epsilon(1e-9));
  CHECK(max_abs_diff(path.loads, {y, 2.0 * (1.0 - y), y}) < 1e-9);

  const Graph star = star_graph(4);
  const auto cut = epsilon_balance(star, 0.1, 3);
  for (double x : cut.loads) CHECK(x == 0.0);
  for (int e = 0; e < star.num_edges(); ++e) CHECK_FALSE(cut.allocation.active(e));
}

TEST_CASE("epsilon_balance rejects bad eps") {
  CHECK_THROWS_AS(epsilon_balance(complete_graph(2), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_balance(complete_graph(2), -1.0), std::invalid_argument);
}

TEST_CASE("epsilon_balance_baseload examples") {
  const Graph k2 = complete_graph(2);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(epsilon_balance_baseload(k2, zero, 1.0).allocation.to_head(0) == doctest::Approx(0.5));

  const Graph lonely(1);
  const std::vector<double> b1{3.0};
  CHECK(epsilon_balance_baseload(lonely, b1, 1.0).allocation.num_edges() == 0);

  const std::vector<double> b{10.0, 0.0};
  const auto r = epsilon_balance_baseload(k2, b, 1.0);
  CHECK(r.allocation.theta(oriented(k2, 0, 1)) == doctest::Approx(1.0));
  CHECK(r.allocation.theta(oriented(k2, 1, 0)) == doctest::Approx(0.0));
  CHECK(b[0] + r.loads[0] == doctest::Approx(10.0));
  CHECK(b[1] + r.loads[1] == doctest::Approx(1.0));
}

TEST_CASE("exact_loads examples") {
  const auto star = exact_loads(star_graph(3));
  for (double x : star.loads) CHECK(x == doctest::Approx(0.75).epsilon(1e-8));

  // brute-force grid oracle for K_{1,3}: minimize sum load^2 over the three shares
  double best = 1e9;
  const int steps = 60;
  for (int a = 0; a <= steps; ++a)
    for (int b = 0; b <= steps; ++b)
      for (int c = 0; c <= steps; ++c) {
        const double x = double(a) / steps, y = double(b) / steps, z = double(c) / steps;
        const double center = 3.0 - x - y - z;
        best = std::min(best, center * center + x * x + y * y + z * z);
      }
  double exact_sum = 0.0;
  for (double x : star.loads) exact_sum += x * x;
  CHECK(exact_sum <= best + 1e-9);
  CHECK(exact_sum == doctest::Approx(4 * 0.5625).epsilon(1e-8));

  for (double x : exact_loads(triangle_pendant()).loads) CHECK(x == doctest::Approx(1.0).epsilon(1e-8));
  for (double x : exact_loads(complete_graph(4)).loads) CHECK(x == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("exact_loads agrees with the coordinate-descent oracle and the decomposition") {
  for (int i = 0; i < 60; ++i) {
    const Graph g = small_random_graph(99, i);
    const auto loads = exact_loads(g).loads;
    CHECK(max_abs_diff(loads, coordinate_descent_loads(g)) < 1e-6);
    CHECK(max_abs_diff(loads, density_decomposition(g).loads()) < 1e-7);
  }
}

TEST_CASE("property: exact_loads never returns loads worse than requested") {
  ExactLoadOptions opts;
  opts.tol = 1e-11;
  int returned = 0, refused = 0;
  for (int i = 0; i < 60; ++i) {
    const Graph g = small_random_graph(61, i);
    try {
      const auto loads = exact_loads(g, opts).loads;
      CHECK(max_abs_diff(loads, density_decomposition(g).loads()) < 1e-9);
      ++returned;
    } catch (const NonConvergenceError&) {
      ++refused;
    }
  }
  CHECK(returned + refused == 60);
}

TEST_CASE("property: load sum equals edge count and shares stay in [0,1]") {
  for (int i = 0; i < 60; ++i) {
    const Graph g = small_random_graph(7, i);
    for (double eps : {2.0, 0.5, 0.05}) {
      const auto r = epsilon_balance(g, eps);
      const double total = std::accumulate(r.loads.begin(), r.loads.end(), 0.0);
      CHECK(total == doctest::Approx(g.num_edges()).epsilon(1e-12));
      for (double x : r.allocation.values()) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
      }
      CHECK(epsilon_fixed_point_residual(g, r.allocation, eps) < 1e-8);
    }
  }
}

TEST_CASE("property: eps-balanced loads converge to the balanced loads") {
  for (int i = 0; i < 30; ++i) {
    const Graph g = small_random_graph(3, i);
    const auto target = density_decomposition(g).loads();
    double previous = 1e9;
    for (double eps = 1.0; eps > 1e-3; eps /= 4) {
      const double gap = max_abs_diff(epsilon_balance(g, eps).loads, target);
      CHECK(gap <= previous + 1e-9);
      previous = gap;
    }
    CHECK(previous < 0.01);
  }
}

TEST_CASE("property: balanced loads minimize every convex sum") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const Graph g = small_random_graph(21, i);
    const auto best = exact_loads(g).loads;
    auto convex_sums = [](const std::vector<double>& l) {
      double sq = 0.0, cube = 0.0, excess = 0.0;
      for (double x : l) {
        sq += x * x;
        cube += x * x * x;
        excess += std::max(0.0, x - 1.0);
      }
      return std::array<double, 3>{sq, cube, excess};
    };
    const auto ref = convex_sums(best);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 20; ++s) {
      std::vector<double> v(static_cast<std::size_t>(g.num_edges()));
      for (auto& x : v) x = unit(rng);
      const auto other = convex_sums(load_of(g, Allocation(v)));
      for (int k = 0; k < 3; ++k) CHECK(ref[k] <= other[k] + 1e-6);
    }
  }
}

TEST_CASE("empirical distribution helpers") {
  const EmpiricalDistribution a(std::vector<double>{0.0, 1.0, 1.0, 2.0});
  CHECK(a.cdf(-1.0) == 0.0);
  CHECK(a.cdf(0.0) == 0.25);
  CHECK(a.cdf(1.0) == 0.75);
  CHECK(a.tail(1.5) == 0.25);
  CHECK(a.mean() == 1.0);
  const EmpiricalDistribution b(std::vector<double>{1.0, 1.0, 1.0, 1.0});
  CHECK(kolmogorov_distance(a, b) == doctest::Approx(0.25));
  // |F_a - F_b| is 1/4 on [0, 1) and 1/4 on [1, 2)
  CHECK(wasserstein1_distance(a, b) == doctest::Approx(0.5));
}
