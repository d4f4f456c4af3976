#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "balload/rde.hpp"

using namespace balload;

namespace {

RdeOptions small_options(int pool = 5000, int samples = 100000) {
  RdeOptions o;
  o.pool_size = pool;
  o.objective_samples = samples;
  return o;
}

SamplePool constant_pool(double value, int n = 2000) {
  SamplePool p;
  p.values.assign(static_cast<std::size_t>(n), value);
  return p;
}

bool all_equal(const std::vector<double>& v, double x, double tol = 1e-15) {
  return std::all_of(v.begin(), v.end(), [&](double y) { return std::abs(y - x) <= tol; });
}

const DegreeDistribution kDelta3 = DegreeDistribution::regular(3);

}  // namespace

TEST_CASE("rde_update examples") {
  const auto hat = size_bias(kDelta3);
  CHECK(all_equal(rde_update(constant_pool(0.5), hat, 1.5, 1).values, 0.5));
  CHECK(all_equal(rde_update(constant_pool(1.0), hat, 1.0, 2).values, 1.0));
  const auto poisson_hat = size_bias(DegreeDistribution::poisson(2.0));
  for (double t : {1.0, 1.7, 3.0}) CHECK(all_equal(rde_update(constant_pool(0.0), poisson_hat, t, 3).values, 0.0));
}

TEST_CASE("property: rde_update stays in [0,1] and is reproducible across worker counts") {
  const auto hat = size_bias(DegreeDistribution::poisson(3.0));
  SamplePool pool = constant_pool(0.3, 4000);
  for (int k = 0; k < static_cast<int>(pool.values.size()); ++k) pool.values[k] = (k % 97) / 96.0;
  for (double t : {-0.5, 0.4, 1.2, 2.5}) {
    const auto a = rde_update(pool, hat, t, 77, 1);
    const auto b = rde_update(pool, hat, t, 77, 3);
    CHECK(a.values == b.values);
    for (double x : a.values) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
}

TEST_CASE("solve_fixed_point examples") {
  const auto o = small_options();
  const auto from_one = solve_fixed_point(kDelta3, 1.5, Branch::Delta1, o, 1);
  CHECK(from_one.converged);
  CHECK(all_equal(from_one.pool.values, 1.0));
  CHECK(all_equal(solve_fixed_point(kDelta3, 1.6, Branch::Delta0, o, 1).pool.values, 0.0));
  CHECK(all_equal(solve_fixed_point(kDelta3, 1.5, Branch::Delta0, o, 1).pool.values, 0.0));
}

TEST_CASE("property: extremal iterates are fixed points and ordered") {
  const auto pi = DegreeDistribution::poisson(2.0);
  const auto o = small_options(20000);
  for (double t : {0.5, 1.0, 1.2, 1.5}) {
    const auto lo = solve_fixed_point(pi, t, Branch::Delta0, o, 5);
    const auto hi = solve_fixed_point(pi, t, Branch::Delta1, o, 5);
    CHECK(lo.converged);
    CHECK(hi.converged);
    CHECK(lo.residual < o.tol);
    auto a = lo.pool.values, b = hi.pool.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // from delta0 stochastically below from delta1
    for (std::size_t k = 0; k < a.size(); k += 97) CHECK(a[k] <= b[k] + 3.0 / std::sqrt(a.size()));
  }
}

TEST_CASE("phi_of_t closed forms for delta_3") {
  const auto o = small_options(5000, 200000);
  const auto at1 = phi_of_t(kDelta3, 1.0, o, 11);
  CHECK(at1.branch == Branch::Delta1);
  CHECK(std::abs(at1.phi - 0.5) <= 3.0 * at1.stderr_ + 1e-12);
  CHECK(at1.from_delta1.value == doctest::Approx(0.5));

  const auto at16 = phi_of_t(kDelta3, 1.6, o, 11);
  CHECK(at16.from_delta1.value == doctest::Approx(-0.1));
  CHECK(at16.from_delta0.value == doctest::Approx(0.0));
  CHECK(at16.phi == doctest::Approx(0.0));
  CHECK(at16.branch == Branch::Delta0);
}

TEST_CASE("phi_of_t for t <= 0 equals mean/2 - t") {
  const auto o = small_options(5000, 200000);
  for (const auto& pi : {DegreeDistribution::poisson(2.0), DegreeDistribution::parse("explicit:0.2,0.3,0.5")}) {
    for (double t : {-0.5, 0.0}) {
      const auto est = phi_of_t(pi, t, o, 3);
      CHECK(std::abs(est.phi - (pi.mean() / 2.0 - t)) <= 5.0 * est.stderr_ + 5e-3);
    }
  }
}

TEST_CASE("property: Phi is non-increasing and convex on a grid") {
  const auto o = small_options(10000, 200000);
  const auto pi = DegreeDistribution::poisson(3.0);
  std::vector<PhiEstimate> est;
  for (double t = 0.0; t <= 2.5; t += 0.25) est.push_back(phi_of_t(pi, t, o, 21));
  for (std::size_t k = 1; k < est.size(); ++k) {
    CHECK(est[k].phi <= est[k - 1].phi + 5.0 * (est[k].stderr_ + est[k - 1].stderr_));
  }
  for (std::size_t k = 1; k + 1 < est.size(); ++k) {
    const double second = est[k - 1].phi - 2.0 * est[k].phi + est[k + 1].phi;
    const double noise = est[k - 1].stderr_ + 2.0 * est[k].stderr_ + est[k + 1].stderr_;
    CHECK(second >= -5.0 * noise - 1e-9);
  }
}

TEST_CASE("rho_of_mu") {
  const auto o = small_options(5000, 100000);
  const auto r = rho_of_mu(kDelta3, 0.005, o, 4);
  CHECK(std::abs(r.rho - 1.5) <= 0.005 + 1e-9);
  CHECK(r.lower_bracket_held);
  CHECK(rho_of_mu(DegreeDistribution::regular(0), 0.005, o, 4).rho == doctest::Approx(0.0).epsilon(0.01));
  const auto p = rho_of_mu(DegreeDistribution::poisson(2.0), 0.01, o, 4);
  CHECK(p.rho >= 1.0 - 0.01);
}

TEST_CASE("predicted load tail") {
  const auto o = small_options(5000, 100000);
  const std::vector<double> grid{-0.5, 0.0, 0.7, 1.2, 1.49, 1.5, 1.6, 2.0};
  const auto curve = predicted_load_cdf(kDelta3, grid, o, 6);
  REQUIRE(curve.size() == grid.size());
  for (const auto& p : curve) CHECK(p.tail == doctest::Approx(p.t < 1.5 ? 1.0 : 0.0));
}

TEST_CASE("predicted tail is the slope of Phi") {
  const auto o = small_options(20000, 400000);
  const auto pi = DegreeDistribution::poisson(2.0);
  std::vector<double> grid;
  for (double t = 0.113; t < 2.0; t += 0.1) grid.push_back(t);
  const auto curve = predicted_load_cdf(pi, grid, o, 8);
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    CHECK(curve[k + 1].tail <= curve[k].tail);
    const double slope = -(curve[k + 1].phi - curve[k].phi) / (grid[k + 1] - grid[k]);
    const double lo = curve[k + 1].tail, hi = curve[k].tail;
    const double se = (curve[k].phi_stderr + curve[k + 1].phi_stderr) / (grid[k + 1] - grid[k]) +
                      curve[k].tail_stderr + curve[k + 1].tail_stderr;
    // the difference quotient lies between the tails at both ends
    CHECK(slope >= lo - 5.0 * se);
    CHECK(slope <= hi + 5.0 * se);
  }
}

TEST_CASE("isotonic cleanup") {
  const std::vector<double> y{1.0, 0.8, 0.9, 0.5, 0.6, 0.1};
  const auto fit = isotonic_non_increasing(y);
  CHECK(fit[0] == doctest::Approx(1.0));
  CHECK(fit[1] == doctest::Approx(0.85));
  CHECK(fit[2] == doctest::Approx(0.85));
  CHECK(fit[3] == doctest::Approx(0.55));
  CHECK(fit[4] == doctest::Approx(0.55));
  CHECK(fit[5] == doctest::Approx(0.1));
}

TEST_CASE("pool Wasserstein distance") {
  const std::vector<double> a{0.0, 0.5, 1.0}, b{1.0, 0.5, 0.0};
  CHECK(pool_wasserstein1(a, b) == 0.0);
  const std::vector<double> c{0.1, 0.6, 1.0};
  CHECK(pool_wasserstein1(a, c) == doctest::Approx(0.2 / 3.0));
}
