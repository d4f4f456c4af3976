#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "balload/bounds.hpp"
#include "balload/densest.hpp"
#include "balload/rng.hpp"

using namespace balload;

TEST_CASE("binomial bound plug-in") {
  const DegreeSequence d{1, 1};
  const std::vector<int> s{0, 1};
  const auto b = binomial_bound(d, s);
  CHECK(b.s == 2);
  CHECK(b.m == 1.0);
  CHECK(b.mean == doctest::Approx(4.0));
  CHECK(b.p == doctest::Approx(1.0));
  CHECK_THROWS_AS(binomial_bound(DegreeSequence{0, 0}, s), std::invalid_argument);
}

TEST_CASE("binomial tail against direct sums") {
  CHECK(binomial_tail(4, 0.5, 0) == 1.0);
  CHECK(binomial_tail(4, 0.5, 5) == 0.0);
  CHECK(binomial_tail(4, 0.5, 3) == doctest::Approx(5.0 / 16.0));
  CHECK(binomial_tail(10, 0.1, 1) == doctest::Approx(1.0 - std::pow(0.9, 10)));
}

TEST_CASE("dense count bound spot value") {
  const DegreeSequence d{1, 1};
  const auto b = expected_dense_count_bound(d, 2, 1, 1.0);
  CHECK(b.value == doctest::Approx(2.0 * std::exp(4.0)));
  CHECK(b.value == doctest::Approx(109.196).epsilon(1e-5));
  CHECK(b.log_value == doctest::Approx(std::log(2.0) + 4.0));

  const std::vector<double> grid{0.5, 1.0, 2.0};
  const auto m = expected_dense_count_bound_min(d, 2, 1, grid);
  for (double th : grid) CHECK(m.bound.log_value <= expected_dense_count_bound(d, 2, 1, th).log_value);
}

TEST_CASE("dense count bound certifies absence in 3-regular graphs") {
  const DegreeSequence d(1000, 3);
  const auto b = expected_dense_count_bound(d, 10, 20, 1.0);
  CHECK(std::isfinite(b.log_value));
  // a 10-set with 20 edges has density 2 > 3/2, so it never occurs
  for (int s = 0; s < 100; ++s) {
    const Graph g = pairing_model(d, derive_seed(12, s));
    CHECK(rho_maxflow(g).rho.to_double() < 2.0);
  }
}

TEST_CASE("f(delta) spot value") {
  const DegreeSequence d(50, 3);
  const auto p = moment_params(d, 1.0);
  CHECK(p.alpha == doctest::Approx(3.0));
  CHECK(p.lambda == doctest::Approx(std::exp(3.0)));
  for (double delta : {0.01, 0.001}) {
    CHECK(z_f(p, 2.0, delta) == doctest::Approx(8.0 * std::exp(1.0) * p.lambda * delta));
  }
}

TEST_CASE("z bound structure") {
  const DegreeSequence d(200, 3);
  const auto z = z_delta_t_bound(d, 2.0, 1.0, 200);
  CHECK(z.f_delta < 1.0);
  CHECK(z_f(z.params, 2.0, 2.0 * z.delta) >= 1.0);
  CHECK(z.c >= 1.0);
  CHECK(z.kappa > 0.0);
  CHECK(z.max_set_size == static_cast<std::int64_t>(std::floor(z.delta * 200)));
  CHECK_THROWS_AS(z_delta_t_bound(d, 1.0, 1.0, 200), BoundError);
  CHECK_THROWS_AS(z_delta_t_bound(d, 2.0, 0.0, 200), BoundError);
}

TEST_CASE("Monte Carlo validation of the binomial bound") {
  const DegreeSequence d(20, 3);
  for (const auto& row : validate_binomial_bound(d, 5, 20000, 3)) {
    CHECK(row.pass);
    CHECK(row.empirical.mean <= row.bound + 3.0 * row.empirical.stderr_);
  }
}

TEST_CASE("Monte Carlo validation of the dense count bound") {
  const DegreeSequence d(14, 3);
  const auto rows = validate_dense_count_bound(d, 4, 1.0, 2000, 5);
  CHECK(!rows.empty());
  for (const auto& row : rows) CHECK(row.pass);
  std::ostringstream out;
  write_dense_count_csv(out, rows);
  CHECK(out.str().rfind("k,r,bound,mc_mean,mc_stderr\n", 0) == 0);
}

TEST_CASE("small dense set counting") {
  const Graph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  // sets with |E(S)| >= 1.5 |S|: only V itself
  CHECK(count_dense_small_sets(k4, 4, 1.5) == 1);
  CHECK(count_dense_small_sets(k4, 3, 1.5) == 0);
  // |E(S)| >= |S|: each triangle and V
  CHECK(count_dense_small_sets(k4, 4, 1.0) == 5);
  CHECK(count_dense_small_sets(k4, 0, 1.0) == 0);
}
