#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <numeric>

#include "balload/degseq.hpp"
#include "balload/rng.hpp"
#include "support.hpp"

using namespace balload;
using namespace balload::testing;

TEST_CASE("distribution parsing") {
  const auto p = DegreeDistribution::parse("poisson:2");
  CHECK(p.mean() == doctest::Approx(2.0).epsilon(1e-10));
  double total = 0.0;
  for (double x : p.pmf()) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  const auto r = DegreeDistribution::parse("regular:3");
  CHECK(r.max_degree() == 3);
  CHECK(r[3] == 1.0);
  CHECK(r[7] == 0.0);

  const auto e = DegreeDistribution::parse("explicit:(0,0.3,0.7)");
  CHECK(e[1] == doctest::Approx(0.3));
  CHECK(e.has_mass_above_one());
  CHECK_FALSE(DegreeDistribution::parse("regular:1").has_mass_above_one());

  for (const char* bad : {"poisson:-1", "regular:x", "explicit:0.5,0.2", "explicit:-0.1,1.1",
                          "binomial:3", "poisson:", ""}) {
    CHECK_THROWS_AS(DegreeDistribution::parse(bad), DegreeSpecError);
  }
}

TEST_CASE("size bias examples") {
  const auto r = size_bias(DegreeDistribution::regular(4));
  CHECK(r[3] == doctest::Approx(1.0));
  CHECK(r.mean() == doctest::Approx(3.0));

  const auto p = DegreeDistribution::poisson(2.5);
  const auto q = size_bias(p);
  for (int k = 0; k < q.max_degree(); ++k) CHECK(std::abs(q[k] - p[k]) < 1e-12);

  const auto e = size_bias(DegreeDistribution::from_pmf({0.0, 0.5, 0.5}));
  CHECK(e[0] == doctest::Approx(1.0 / 3.0));
  CHECK(e[1] == doctest::Approx(2.0 / 3.0));

  CHECK_THROWS_AS(size_bias(DegreeDistribution::regular(0)), std::invalid_argument);
}

TEST_CASE("degree sequence sampling") {
  CHECK(sample_degree_sequence(DegreeDistribution::regular(3), 4, 1) == DegreeSequence{3, 3, 3, 3});
  const auto ones = sample_degree_sequence(DegreeDistribution::regular(1), 3, 1);
  CHECK(ones == DegreeSequence{1, 1, 2});

  const auto big = sample_degree_sequence(DegreeDistribution::poisson(2.0), 100000, 7);
  const double mean = std::accumulate(big.begin(), big.end(), 0.0) / big.size();
  CHECK(std::abs(mean - 2.0) < 0.03);

  CHECK(sample_degree_sequence(DegreeDistribution::poisson(2.0), 500, 3) ==
        sample_degree_sequence(DegreeDistribution::poisson(2.0), 500, 3));
}

TEST_CASE("pairing model small cases") {
  for (int s = 0; s < 20; ++s) {
    const Graph g = pairing_model({1, 1}, s);
    CHECK(g.num_edges() == 1);
  }
  CHECK_THROWS(pairing_model({1, 2}, 1));

  // three matchings of four half-edges: two loops, or a double edge (twice)
  const int samples = 30000;
  int remove_all = 0, keep_one = 0;
  for (int s = 0; s < samples; ++s) {
    remove_all += pairing_model({2, 2}, derive_seed(1, s), MultiEdgePolicy::RemoveAll).num_edges();
    keep_one += pairing_model({2, 2}, derive_seed(2, s), MultiEdgePolicy::KeepOne).num_edges();
  }
  CHECK(remove_all == 0);
  const double p = static_cast<double>(keep_one) / samples;
  CHECK(std::abs(p - 2.0 / 3.0) < 4.0 * std::sqrt(2.0 / 9.0 / samples));
}

TEST_CASE("property: pairing output is simple and never gains degree") {
  for (int s = 0; s < 50; ++s) {
    const auto d = sample_degree_sequence(DegreeDistribution::poisson(3.0), 200, derive_seed(9, s));
    for (auto policy : {MultiEdgePolicy::RemoveAll, MultiEdgePolicy::KeepOne}) {
      const Graph g = pairing_model(d, derive_seed(10, s), policy);
      for (int v = 0; v < g.num_vertices(); ++v) CHECK(g.degree(v) <= d[v]);
    }
  }
  const DegreeSequence three(100, 3);
  const Graph r = pairing_model(three, 5, MultiEdgePolicy::Reject);
  for (int v = 0; v < 100; ++v) CHECK(r.degree(v) == 3);
}

TEST_CASE("property: pairing model is exchangeable in vertex labels") {
  const DegreeSequence d{1, 1, 2, 2};
  const DegreeSequence swapped{2, 2, 1, 1};  // vertex v plays 3 - v
  const int samples = 10000;
  std::map<std::pair<int, int>, int> a, b;
  for (int s = 0; s < samples; ++s) {
    const Graph ga = pairing_model(d, derive_seed(3, s));
    const Graph gb = pairing_model(swapped, derive_seed(4, s));
    for (const auto& [u, v] : ga.edges()) ++a[{std::min(u, v), std::max(u, v)}];
    for (const auto& [u, v] : gb.edges()) {
      const int x = 3 - u, y = 3 - v;
      ++b[{std::min(x, y), std::max(x, y)}];
    }
  }
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) {
      const double pa = static_cast<double>(a[{u, v}]) / samples;
      const double pb = static_cast<double>(b[{u, v}]) / samples;
      const double se = std::sqrt((pa * (1 - pa) + pb * (1 - pb)) / samples) + 1e-9;
      CHECK(std::abs(pa - pb) < 5.0 * se);
    }
}

TEST_CASE("Erdos-Renyi G(n, m)") {
  for (int s = 0; s < 5; ++s) CHECK(erdos_renyi_nm(3, 3, s).num_edges() == 3);
  CHECK(erdos_renyi_nm(2, 1, 1).num_edges() == 1);
  CHECK_THROWS(erdos_renyi_nm(3, 4, 1));

  const int n = 10000;
  const Graph g = erdos_renyi_nm(n, 10000, 42);
  CHECK(g.num_edges() == 10000);
  // chi-square goodness of fit against Poisson(2), bins 0..7 and 8+
  std::vector<double> observed(9, 0.0), expected(9, 0.0);
  for (int v = 0; v < n; ++v) observed[std::min(g.degree(v), 8)] += 1.0;
  double pk = std::exp(-2.0), cumulative = 0.0;
  for (int k = 0; k < 8; ++k) {
    expected[k] = n * pk;
    cumulative += pk;
    pk *= 2.0 / (k + 1);
  }
  expected[8] = n * (1.0 - cumulative);
  double chi2 = 0.0;
  for (int k = 0; k < 9; ++k) chi2 += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
  const boost::math::chi_squared dist(8);
  CHECK(chi2 < boost::math::quantile(boost::math::complement(dist, 1e-3)));
}

TEST_CASE("exponential moments") {
  const DegreeSequence d{1, 1};
  CHECK(exponential_moment(d, 1.0) == doctest::Approx(std::exp(1.0)));
  CHECK(DegreeDistribution::regular(3).exponential_moment(1.0) == doctest::Approx(std::exp(3.0)));
}
