#include <doctest.h>

#include <cmath>

#include "mfhmc/errors.hpp"
#include "mfhmc/kernels.hpp"
#include "mfhmc/statistics.hpp"
#include "mfhmc/theory.hpp"
#include "oracles.hpp"

using namespace mfhmc;

TEST_CASE("kernel params validation") {
  CHECK_NOTHROW(KernelParams{1.0, 0.25, 1}.validate());
  CHECK_NOTHROW(KernelParams{1.0, 0.0, 1}.validate());
  CHECK_THROWS_AS((KernelParams{1.0, 0.3, 1}.validate()), ConfigError);
  CHECK_THROWS_AS((KernelParams{1.0, 0.25, 0}.validate()), ConfigError);
  CHECK_THROWS_AS((KernelParams{-1.0, 0.25, 1}.validate()), ConfigError);
}

TEST_CASE("uhmc step with T = h is a refresh followed by one randomized step") {
  const auto m = gaussian_model(0.25);
  RngStream s(1, 1);
  const auto x = s.normal_vector(6);
  RngStream a(2, 2), b(2, 2);
  const auto out = uhmc_step(m, x, KernelParams{0.2, 0.2, 1}, a);
  const auto p = b.normal_vector(6);
  const auto ref = randomized_step(m, PhaseState(x, p), 0.2, b.uniform());
  CHECK(out == ref.q);
}

TEST_CASE("uhmc step is reproducible") {
  const auto m = multiwell_model(1.0, 2, 0.1, true);
  RngStream s(3, 3);
  const auto x = s.normal_vector(8);
  RngStream a(4, 4), b(4, 4);
  CHECK(uhmc_step(m, x, KernelParams{1.0, 0.1, 1}, a) == uhmc_step(m, x, KernelParams{1.0, 0.1, 1}, b));
}

TEST_CASE("single-particle uhmc targets N(0,1)") {
  const auto m = gaussian_model(0.0);
  RngStream s(5, 5);
  const std::vector<double> x0{0.0};
  const auto out = run_chain(m, x0, KernelKind::uhmc, 10000, KernelParams{1.0, 1.0 / 32, 1}, s);
  std::vector<double> xs;
  for (std::size_t k = 1; k < out.positions.size(); ++k) xs.push_back(out.positions[k][0]);
  const auto st = mean_with_stderr(xs);
  CHECK(std::abs(st.variance - 1.0) < 0.1);
}

TEST_CASE("xhmc with T = 0 leaves positions unchanged") {
  RngStream s(6, 6);
  const auto x = s.normal_vector(5);
  CHECK(xhmc_step_gaussian(0.25, x, 0.0, s) == x);
}

TEST_CASE("single-particle xhmc with eps = 0 is the exact oscillator with a refresh") {
  RngStream a(7, 7), b(7, 7);
  const std::vector<double> x{0.8};
  const auto out = xhmc_step_gaussian(0.0, x, 1.3, a);
  const double p = b.normal_vector(1)[0];
  CHECK(out[0] == doctest::Approx(0.8 * std::cos(1.3) + p * std::sin(1.3)).epsilon(1e-14));
}

TEST_CASE("stationary sample: eps = 0 returns the raw normals") {
  RngStream a(8, 8), b(8, 8);
  CHECK(stationary_gaussian_sample(0.0, 7, a) == b.normal_vector(7));
}

TEST_CASE("stationary sample covariance matches the inverse of M") {
  const double eps = 0.25;
  const std::size_t N = 16, n = 100000;
  // Dense oracle for M^{-1}.
  std::vector<double> M(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) M[i * N + j] = (i == j ? 1.0 : 0.0) - eps / N;
  const auto Minv = oracle::invert(M, N);

  RngStream s(9, 9);
  std::vector<double> means(n), firsts(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = stationary_gaussian_sample(eps, N, s);
    double m = 0.0;
    for (double v : x) m += v;
    means[r] = m / N;
    firsts[r] = x[0];
  }
  const auto mv = mean_with_stderr(means);
  double mean_var_exact = 0.0;
  for (double v : Minv) mean_var_exact += v;
  mean_var_exact /= N * N;
  CHECK(mean_var_exact == doctest::Approx(1.0 / ((1 - eps) * N)).epsilon(1e-12));
  CHECK(std::abs(mv.variance * N - 1.0 / (1 - eps)) < 0.05 / (1 - eps));
  const auto fv = mean_with_stderr(firsts);
  CHECK(Minv[0] == doctest::Approx(1 + eps / (N * (1 - eps))).epsilon(1e-12));
  // Var of a sample variance of n normals is about 2 sigma^4 / n.
  CHECK(std::abs(fv.variance - Minv[0]) < 4 * std::sqrt(2.0 / n) * Minv[0]);
}

TEST_CASE("xhmc preserves the stationary two-moment fingerprint") {
  const double eps = 0.25;
  const std::size_t N = 16, R = 4000;
  std::vector<double> sq(R), msq(R);
  for (std::size_t r = 0; r < R; ++r) {
    RngStream s = RngStream::for_chain(10, r);
    auto x = stationary_gaussian_sample(eps, N, s);
    x = xhmc_step_gaussian(eps, x, 1.0, s);
    double m = 0.0, q = 0.0;
    for (double v : x) m += v, q += v * v;
    sq[r] = q / N;
    msq[r] = (m / N) * (m / N);
  }
  const auto a = mean_with_stderr(sq), b = mean_with_stderr(msq);
  CHECK(std::abs(a.mean - (1 + eps / (N * (1 - eps)))) < 3.5 * a.se);
  CHECK(std::abs(b.mean - 1 / ((1 - eps) * N)) < 3.5 * b.se);
}

TEST_CASE("run_chain bookkeeping") {
  const auto m = gaussian_model(0.25);
  RngStream s(11, 11);
  const auto x0 = s.normal_vector(4);
  RngStream a(12, 12), b(12, 12);
  const auto out = run_chain(m, x0, KernelKind::uhmc, 100, KernelParams{1.0, 0.25, 10}, a);
  CHECK(out.recorded_steps.size() == 11);
  CHECK(out.positions.size() == 11);
  CHECK(out.recorded_steps.back() == 100);
  CHECK(out.second_moments.size() == 101);
  CHECK(out.step_count == 100);
  CHECK(out.positions.front() == x0);

  const auto one = run_chain(m, x0, KernelKind::uhmc, 1, KernelParams{1.0, 0.25, 1}, b);
  RngStream c(12, 12);
  CHECK(one.positions.back() == uhmc_step(m, x0, KernelParams{1.0, 0.25, 1}, c));

  RngStream d(12, 12);
  const auto again = run_chain(m, x0, KernelKind::uhmc, 100, KernelParams{1.0, 0.25, 10}, d);
  CHECK(again.positions == out.positions);
  CHECK(again.second_moments == out.second_moments);
}

TEST_CASE("xhmc chains need the gaussian model") {
  const auto m = multiwell_model(1.0, 1, 0.0, false);
  RngStream s(13, 13);
  CHECK_THROWS_AS(run_chain(m, std::vector<double>{0.0}, KernelKind::xhmc, 3, KernelParams{1.0, 0.0, 1}, s),
                  ConfigError);
}

TEST_CASE("second moments stay below the B2 bound for a compliant gaussian chain") {
  const double eps = 1e-4;
  const auto m = gaussian_model(eps);
  const double T = max_admissible_T(m, ConditionSet::uhmc);
  const auto constants = compute_constants(m, T, 1.0 + eps / (32 * (1 - eps)));
  REQUIRE(constants.conditions.cond_CT.pass);
  REQUIRE(constants.conditions.cond_Cepsi.pass);
  RngStream s(14, 14);
  const auto x0 = stationary_gaussian_sample(eps, 32, s);
  const auto out = run_chain(m, x0, KernelKind::xhmc, 500, KernelParams{T, 0.0, 50}, s);
  for (double m2 : out.second_moments) CHECK(m2 <= constants.B2);
}

TEST_CASE("uhmc stationary variance error shrinks as h is halved") {
  // Per-coordinate variance against the exact particle-level value; the
  // remaining error is the time-discretization bias.
  const double eps = 0.25;
  const std::size_t N = 64, steps = 20000;
  const auto m = gaussian_model(eps);
  const double exact = 1 + eps / (N * (1 - eps));
  std::vector<double> err, se;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    RngStream s = RngStream::for_chain(15, static_cast<std::uint64_t>(1 / h));
    auto x = stationary_gaussian_sample(eps, N, s);
    KernelWorkspace ws;
    const IntegratorParams ip(1.0, h);
    // batch means over 20 batches
    std::vector<double> batches(20, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
      uhmc_step_inplace(m, x, ip, s, ws);
      double q = 0.0;
      for (double v : x) q += v * v;
      batches[k * 20 / steps] += q / N / (steps / 20);
    }
    const auto st = mean_with_stderr(batches);
    err.push_back(std::abs(st.mean - exact));
    se.push_back(st.se);
  }
  CHECK(err[1] <= err[0] + 2 * std::hypot(se[0], se[1]));
  CHECK(err[2] <= err[1] + 2 * std::hypot(se[1], se[2]));
}

TEST_CASE("initial states") {
  const auto m = multiwell_model(1.0, 2, 0.0, false);
  RngStream s(16, 16);
  const auto cold = initial_state(m, 3, InitKind::cold, s, 2.5);
  CHECK(cold == std::vector<double>(6, 2.5));
  CHECK(initial_state(m, 3, InitKind::normal, s).size() == 6);
  CHECK_THROWS_AS(initial_state(m, 3, InitKind::stationary, s), ConfigError);
  CHECK(mean_square(std::vector<double>{1, 2, 3, 4}, 2) == doctest::Approx((1 + 4 + 9 + 16) / 2.0));
}
