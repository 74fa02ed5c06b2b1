#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cdpre/estimate.hpp"

using namespace cdpre;

namespace {

ThetaTable synthetic_table(const std::vector<int>& ns, double (*theta)(int)) {
  ThetaTable table;
  table.model = Model::bernoulli;
  table.t = 0.3;
  for (int n : ns) {
    ThetaRow row;
    row.n = n;
    row.theta_hat = theta(n);
    row.stderr_ = 0.0;
    row.replicates = 1;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace

TEST_SUITE("estimate") {

TEST_CASE("theta endpoints") {
  ConstraintDist d({0, 0, 0, 1});
  ThetaTable zero = theta_table(Model::bernoulli, d, 0.0, {1, 2, 4}, 50, 0, 1);
  for (const ThetaRow& row : zero.rows) {
    CHECK(row.theta_hat == 0.0);
    CHECK(row.zero_upper95 == doctest::Approx(3.0 / 50));
  }
  ThetaTable one = theta_table(Model::bernoulli, d, 1.0, {1, 2, 4}, 50, 0, 1);
  for (const ThetaRow& row : one.rows) CHECK(row.theta_hat == 1.0);
  CHECK_THROWS_AS(theta_table(Model::bernoulli, d, 0.5, {1}, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("star reduction on the radius-1 window") {
  // with kappa = 3 everywhere, {0 <-> dB(1)} is exactly {some spoke open}
  ThetaTable table =
      theta_table(Model::cdpre, ConstraintDist({0, 0, 0, 1}), 0.5, {1}, 20000, 0, 31);
  double expected = 1.0 - std::pow(0.5, 4);  // 0.9375
  double tol = 4.0 * std::sqrt(expected * (1.0 - expected) / 20000);
  CHECK(std::abs(table.rows[0].theta_hat - expected) <= tol);
}

TEST_CASE("estimates are pathwise ordered across models") {
  ConstraintDist d({0, 0, 0.5, 0.5});
  const double t = 0.55;
  for (int n : {2, 4}) {
    ThetaTable c = theta_table(Model::cdpre, d, t, {n}, 800, 8, 5);
    ThetaTable i = theta_table(Model::intermediate, d, t, {n}, 800, 0, 5);
    ThetaTable b = theta_table(Model::bernoulli, d, t, {n}, 800, 0, 5);
    CHECK(c.rows[0].theta_hat <= i.rows[0].theta_hat);
    CHECK(i.rows[0].theta_hat <= b.rows[0].theta_hat);
  }
}

TEST_CASE("theta is monotone in n and in t under a shared seed") {
  ConstraintDist d({0, 0, 0, 1});
  ThetaTable b = theta_table(Model::bernoulli, d, 0.45, {2, 4, 6}, 600, 0, 9);
  CHECK(b.rows[0].theta_hat >= b.rows[1].theta_hat);
  CHECK(b.rows[1].theta_hat >= b.rows[2].theta_hat);
  ThetaTable i = theta_table(Model::intermediate, d, 0.45, {2, 4, 6}, 600, 0, 9);
  CHECK(i.rows[0].theta_hat >= i.rows[1].theta_hat);
  CHECK(i.rows[1].theta_hat >= i.rows[2].theta_hat);

  ThetaTable lo = theta_table(Model::cdpre, d, 0.3, {3}, 600, 8, 9);
  ThetaTable hi = theta_table(Model::cdpre, d, 0.6, {3}, 600, 8, 9);
  CHECK(lo.rows[0].theta_hat <= hi.rows[0].theta_hat);
}

TEST_CASE("susceptibility endpoints") {
  ConstraintDist d({0, 0, 0, 1});
  SusceptibilityEstimate zero = susceptibility(Model::cdpre, d, 0.0, 3, 100, 1);
  CHECK(zero.mean_size == 1.0);
  CHECK(zero.stderr_ == 0.0);
  SusceptibilityEstimate full = susceptibility(Model::bernoulli, d, 1.0, 3, 50, 1);
  CHECK(full.mean_size == 49.0);

  SusceptibilityEstimate lo = susceptibility(Model::cdpre, d, 0.3, 4, 300, 2);
  SusceptibilityEstimate hi = susceptibility(Model::cdpre, d, 0.6, 4, 300, 2);
  CHECK(lo.mean_size <= hi.mean_size);
}

TEST_CASE("recursive scale check arithmetic") {
  ThetaTable table = synthetic_table({4, 12, 16}, [](int n) {
    if (n == 4) return 0.9;
    if (n == 12) return 0.5;
    return 0.3;
  });
  SimonLiebCheck check = simon_lieb_check(table, 16, 1);
  CHECK(check.scale == 4);
  CHECK(check.product_term == doctest::Approx(32.0 * 0.9 * 0.5));
  CHECK(check.margin == doctest::Approx(0.3 - 14.4));
  CHECK(check.c3_term == doctest::Approx(4.0 * std::exp(-2.0 * std::log(4.0))));

  // all-ones table: the product term dominates trivially
  ThetaTable ones = synthetic_table({4, 12, 16}, [](int) { return 1.0; });
  SimonLiebCheck vac = simon_lieb_check(ones, 16, 1);
  CHECK(vac.product_term == doctest::Approx(32.0));
  CHECK(vac.theta_n_hat <= vac.product_term);

  CHECK_THROWS_AS(simon_lieb_check(table, 25, 1), std::invalid_argument);  // rows missing
}

TEST_CASE("recursive scale check at stage 2") {
  ThetaTable table = synthetic_table({9, 18, 27}, [](int n) { return std::exp(-0.1 * n); });
  SimonLiebCheck check = simon_lieb_check(table, 27, 2);
  CHECK(check.scale == 9);  // floor(27^(2/3))
  CHECK(check.product_term ==
        doctest::Approx(72.0 * std::exp(-0.1 * 9) * std::exp(-0.1 * 18)));
}

TEST_CASE("decay fit recovers synthetic laws") {
  ThetaTable pure = synthetic_table({4, 8, 12, 16, 20}, [](int n) { return std::exp(-0.2 * n); });
  DecayFit fit = decay_fit(pure, DecayFamily::pure_exponential, 0.0, 1, 100);
  CHECK(fit.alpha_hat == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  ThetaTable stretched = synthetic_table(
      {4, 8, 12, 16, 20}, [](int n) { return std::exp(-0.5 * std::pow(n, 0.8)); });
  DecayFit sfit = decay_fit(stretched, DecayFamily::stretched, 0.2, 1, 100);
  CHECK(sfit.alpha_hat == doctest::Approx(0.5).epsilon(1e-9));

  ThetaTable with_zero = synthetic_table({4, 8, 12, 16, 24},
                                         [](int n) { return n == 24 ? 0.0 : std::exp(-0.3 * n); });
  DecayFit zfit = decay_fit(with_zero, DecayFamily::pure_exponential, 0.0, 1, 100);
  CHECK(zfit.skipped_zero_rows == std::vector<int>{24});

  ThetaTable tiny = synthetic_table({4, 8}, [](int n) { return std::exp(-0.2 * n); });
  CHECK_THROWS_AS(decay_fit(tiny, DecayFamily::pure_exponential, 0.0, 1, 100),
                  std::invalid_argument);
}

TEST_CASE("threshold scan is monotone and crosses near the product threshold") {
  ConstraintDist d({0, 0, 0, 1});
  std::vector<double> grid;
  for (double t = 0.30; t <= 0.701; t += 0.05) grid.push_back(t);
  ScanResult bern = threshold_scan(Model::bernoulli, d, 16, grid, 500, 33, 0);
  for (std::size_t i = 0; i + 1 < bern.theta.size(); ++i)
    CHECK(bern.theta[i] <= bern.theta[i + 1]);
  CHECK(bern.crossed);
  CHECK(bern.crossing > 0.35);
  CHECK(bern.crossing < 0.65);

  ScanResult cd = threshold_scan(Model::cdpre, d, 16, grid, 500, 33, 8);
  CHECK(cd.crossed);
  CHECK(cd.crossing > bern.crossing);

  CHECK_THROWS_AS(threshold_scan(Model::bernoulli, d, 16, {0.5, 0.4}, 10, 1, 0),
                  std::invalid_argument);
}

TEST_CASE("block combinatorics") {
  CombinatoricReport report = verify_block_combinatorics(1000000, 4242);
  CHECK(report.block_edge_count == 49);
  CHECK(report.a_count == 6);
  CHECK(report.c_denominator == 13983816ull);
  CHECK(report.p_c_exact == doctest::Approx(1.0 / 13983816.0));
  CHECK(report.reduced_exact == 0.1);
  CHECK(std::abs(report.reduced_mc - 0.1) <= 0.001);
}

}  // TEST_SUITE
