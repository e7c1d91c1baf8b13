#include <doctest.h>

#include <cmath>

#include "mfhmc/errors.hpp"
#include "mfhmc/rng.hpp"
#include "mfhmc/statistics.hpp"
#include "oracles.hpp"

using namespace mfhmc;

TEST_CASE("W1 small cases") {
  const std::vector<double> a{0.0, 0.0}, b{1.0, 1.0}, c{0.0, 1.0}, d{1.0, 2.0};
  CHECK(wasserstein1_1d(a, a) == 0.0);
  CHECK(wasserstein1_1d(a, b) == 1.0);
  CHECK(wasserstein1_1d(c, d) == 1.0);
  CHECK(oracle::w1_bruteforce(c, d) == 1.0);
  CHECK(wasserstein1_1d(SampleEnsemble::scalars(c), SampleEnsemble::scalars(d)) == 1.0);
}

TEST_CASE("W1 equals the exhaustive assignment minimum") {
  RngStream s(1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = s.normal();
    for (auto& v : b) v = 2 * s.uniform() - 0.5;
    CHECK(std::abs(wasserstein1_1d(a, b) - oracle::w1_bruteforce(a, b)) <= 1e-12);
  }
}

TEST_CASE("W1 metric properties") {
  RngStream s(2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = s.normal_vector(64), b = s.normal_vector(64), c = s.normal_vector(64);
    const double ab = wasserstein1_1d(a, b), ba = wasserstein1_1d(b, a);
    CHECK(ab == ba);
    CHECK(ab <= wasserstein1_1d(a, c) + wasserstein1_1d(c, b) + 1e-12);
    double ma = 0, mb = 0;
    for (std::size_t k = 0; k < 64; ++k) ma += a[k] / 64, mb += b[k] / 64;
    CHECK(std::abs(ma - mb) <= ab + 1e-12);
  }
}

TEST_CASE("W1 with unequal sizes thins the larger sample") {
  const std::vector<double> a{0, 1, 2, 3}, b{0, 2};
  CHECK(wasserstein1_1d(a, b) >= 0.0);
  CHECK(wasserstein1_1d(a, b) == wasserstein1_1d(b, a));
  CHECK_THROWS(wasserstein1_1d(std::vector<double>{}, b));
}

TEST_CASE("KDE relative error") {
  RngStream s(3, 3);
  const auto xs = s.normal_vector(1000000);
  CHECK(kde_relative_error(xs) < 0.02);
  std::vector<double> shifted(100000);
  for (auto& v : shifted) v = s.normal() + 0.5;
  const double e = kde_relative_error(shifted);
  CHECK(e > 0.1);
  CHECK(e == doctest::Approx(2 * (2 * oracle::std_normal_cdf(0.25) - 1)).epsilon(0.1));
  KdeOptions bad;
  bad.grid.points = 0;
  CHECK_THROWS_AS(kde_relative_error(xs, bad), ConfigError);
  CHECK_THROWS_AS(kde_relative_error(std::vector<double>(10, 0.0)), ConfigError);
  CHECK_THROWS_AS(kde_relative_error(std::vector<double>(1000, 1.0)), ConfigError);
}

TEST_CASE("KDE integrates to one on the grid") {
  RngStream s(4, 4);
  const auto xs = s.normal_vector(50000);
  const KdeGrid grid;
  const auto p = kde_on_grid(xs, silverman_bandwidth(xs), grid);
  const double dx = (grid.hi - grid.lo) / (grid.points - 1);
  double mass = 0.0;
  for (double v : p) mass += v * dx;
  double outside = 0.0;
  for (double x : xs) outside += std::abs(x) > 4.0;
  CHECK(std::abs(mass + outside / xs.size() - 1.0) < 0.01);
}

TEST_CASE("binned KDE agrees with the exact KDE") {
  RngStream s(5, 5);
  const auto xs = s.normal_vector(20000);
  BinnedKde binned;
  for (double x : xs) binned.add(x);
  CHECK(binned.count() == xs.size());
  CHECK(binned.silverman_bandwidth() == doctest::Approx(silverman_bandwidth(xs)).epsilon(1e-10));
  CHECK(binned.relative_error() == doctest::Approx(kde_relative_error(xs)).epsilon(1e-3));
  BinnedKde half_a, half_b;
  for (std::size_t k = 0; k < xs.size(); ++k) (k % 2 ? half_a : half_b).add(xs[k]);
  half_a.merge(half_b);
  CHECK(half_a.relative_error() == doctest::Approx(binned.relative_error()).epsilon(1e-12));
}

TEST_CASE("Silverman bandwidth") {
  const std::vector<double> xs{-1, 0, 1, 2};
  const double sd = std::sqrt(5.0 / 3.0);
  CHECK(silverman_bandwidth(xs) == doctest::Approx(1.06 * sd * std::pow(4.0, -0.2)));
}

TEST_CASE("moments") {
  SampleEnsemble e({{2.0, -1.0}, {2.0, -1.0}, {2.0, -1.0}}, 2);
  const auto m = moments(e);
  CHECK(m.mean == std::vector<double>{2.0, -1.0});
  CHECK(m.variance == std::vector<double>{0.0, 0.0});
  CHECK(m.second_moment == doctest::Approx(5.0));

  RngStream s(6, 6);
  const auto xs = s.normal_vector(1000000);
  const auto big = moments(SampleEnsemble::scalars(xs));
  CHECK(std::abs(big.second_moment - 1.0) < 1e-2);
  CHECK(big.second_moment_stderr > 0.0);
  CHECK_THROWS(SampleEnsemble({{1.0}, {1.0, 2.0}}, 1).validate());
}

TEST_CASE("mean with standard error") {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto st = mean_with_stderr(xs);
  CHECK(st.mean == 2.5);
  CHECK(st.variance == doctest::Approx(5.0 / 3.0));
  CHECK(st.se == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("normal pdf and cdf") {
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327));
  for (double x : {-3.0, -0.5, 0.0, 1.7}) CHECK(normal_cdf(x) == doctest::Approx(oracle::std_normal_cdf(x)).epsilon(1e-14));
}

TEST_CASE("KS statistic matches the oracle") {
  RngStream s(7, 7);
  const auto xs = s.normal_vector(5000);
  CHECK(ks_statistic(xs, normal_cdf) == doctest::Approx(oracle::ks(xs, oracle::std_normal_cdf)).epsilon(1e-12));
  CHECK(ks_statistic(std::vector<double>{0.0}, normal_cdf) == doctest::Approx(0.5));
}

TEST_CASE("log-log slope") {
  const std::vector<double> xs{0.1, 0.2, 0.4, 0.8, 1.6};
  CHECK(loglog_slope(xs, xs).slope == doctest::Approx(1.0).epsilon(1e-14));
  std::vector<double> ys;
  for (double x : xs) ys.push_back(std::pow(x, 1.5));
  CHECK(std::abs(loglog_slope(xs, ys).slope - 1.5) < 1e-12);
  RngStream s(8, 8);
  std::vector<double> noisy;
  for (double x : xs) noisy.push_back(x * (1 + 0.1 * (s.uniform() - 0.5)));
  const double sl = loglog_slope(xs, noisy).slope;
  CHECK(sl >= 0.9);
  CHECK(sl <= 1.1);
  CHECK_THROWS(loglog_slope(std::vector<double>{1, 2}, std::vector<double>{1, 2}));
  CHECK_THROWS(loglog_slope(std::vector<double>{1, 2, 3}, std::vector<double>{1, -2, 3}));
  const auto lf = linear_fit(std::vector<double>{0, 1, 2}, std::vector<double>{1, 3, 5});
  CHECK(lf.slope == doctest::Approx(2.0));
  CHECK(lf.intercept == doctest::Approx(1.0));
  CHECK(lf.residual == doctest::Approx(0.0));
}
