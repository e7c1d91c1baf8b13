// Acceptance suite: one PASS/FAIL line per criterion, details indented below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mfhmc/couplings.hpp"
#include "mfhmc/experiments.hpp"
#include "mfhmc/statistics.hpp"
#include "mfhmc/theory.hpp"
#include "oracles.hpp"

using namespace mfhmc;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    detail << "    " << (ok ? "ok   " : "FAIL ") << what << '\n';
    pass = pass && ok;
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// 1. strong order of the randomized integrator
void integrator_order(Outcome& o) {
  OrderCheckConfig cfg;  // h = 1/8 .. 1/128, N = 64, eps = 1/4, T = 1
  cfg.replicas = 1000;
  const auto r = order_check(cfg);
  for (const auto& row : r.rows)
    o.detail << "    h=" << num(row.h) << " error=" << num(row.mean_weighted_error) << " se=" << num(row.stderr_error)
             << '\n';
  o.require(r.slope >= 1.3 && r.slope <= 1.8, "log-log slope " + num(r.slope) + " in [1.3, 1.8]");
}

// 2. xHMC leaves the particle-level stationary law invariant
void xhmc_invariance(Outcome& o) {
  ChaosScanConfig cfg;
  cfg.N_list = {16};
  cfg.steps = 200;
  cfg.replicas = 200;
  const auto row = chaos_scan(cfg).rows.front();
  const double eps = 0.25, N = 16;
  const double var_exact = 1 + eps / (N * (1 - eps));
  const double mean_exact = 1 / ((1 - eps) * N);
  o.detail << "    target 1 + eps/(N(1-eps)) = " << num(var_exact) << "; the value 1.016667 (= 1 + 1/60) is not this formula\n";
  o.require(std::abs(row.var_hat - var_exact) <= 3 * row.var_se,
            "Var(x_1) " + num(row.var_hat) + " vs " + num(var_exact) + " (3 SE = " + num(3 * row.var_se) + ")");
  o.require(std::abs(row.mean_coord_var - mean_exact) <= 3 * row.mean_coord_var_se,
            "Var(mean) " + num(row.mean_coord_var) + " vs " + num(mean_exact) + " (3 SE = " +
                num(3 * row.mean_coord_var_se) + ")");
}

// 3. asymptotic bias against the accuracy level
void bias_scaling(Outcome& o) {
  BiasScanConfig cfg;  // k = 1..3, 2e5 steps, h = eps^(2/3)
  const auto r = bias_scan(cfg);
  bool decreasing = true;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    o.detail << "    k=" << row.k << " N=" << row.N << " h=" << num(row.h) << " error=" << num(row.kde_rel_error)
             << " pooled variance=" << num(row.variance) << '\n';
    if (k > 0) decreasing = decreasing && row.kde_rel_error < r.rows[k - 1].kde_rel_error;
  }
  o.require(decreasing, "error strictly decreasing in k");
  o.require(r.slope >= 0.5 && r.slope <= 1.8, "log2 slope " + num(r.slope) + " in [0.5, 1.8]");
}

// 4. propagation of chaos for the marginal variance
void chaos(Outcome& o) {
  ChaosScanConfig cfg;  // N = 16, 64, 256
  const auto r = chaos_scan(cfg);
  for (const auto& row : r.rows)
    o.require(std::abs(row.var_hat - row.var_exact) <= 3 * row.var_se,
              "N=" + std::to_string(row.N) + " Var(x_1) " + num(row.var_hat) + " vs " + num(row.var_exact) +
                  " (3 SE = " + num(3 * row.var_se) + "), W1=" + num(row.w1_marginal));
  o.require(std::abs(r.slope_empirical + 1) <= 0.2, "empirical slope of |Var - 1| vs N " + num(r.slope_empirical));
  o.require(std::abs(r.slope_analytic + 1) <= 1e-9, "analytic slope " + num(r.slope_analytic));
}

// 5. contraction: synchronous strongly convex rate and the uHMC bound
void contraction(Outcome& o) {
  ContractionConfig a;
  a.model.eps = 0.0;
  a.synchronous = true;
  a.T = std::sqrt(3.0 / 20.0);
  a.h = a.T / 10;
  const auto ra = contraction_experiment(a);
  const double target = 1 - ra.theory.c_strongconvex;
  o.require(ra.table.decay_factor <= target + 3 * ra.table.decay_factor_se,
            "(a) decay factor " + num(ra.table.decay_factor) + " <= 1 - K T^2/8 = " + num(target) + " + 3 SE");

  ContractionConfig b;
  b.model.eps = 1e-4;
  const auto rb = contraction_experiment(b);
  o.require(rb.conditions_hold, "(b) eps = 1e-4, T = " + num(rb.T) + " satisfies the uHMC conditions");
  bool below = true;
  for (std::size_t m = 1; m < rb.table.mean_rho.size(); ++m)
    below = below && rb.table.mean_rho[m] <= rb.bound[m] + 3 * rb.table.stderr_rho[m];
  o.require(below, "(b) E[rho_N(m)] <= A exp(-c m) rho_N(0) + 3 SE for m = 1..50; at m = 50: " +
                       num(rb.table.mean_rho.back()) + " <= " + num(rb.bound.back()));
}

// 6. coupling marginals, reflection isometry and the meeting bound
void coupling(Outcome& o) {
  const double R = 2.0;
  const auto cp = CouplingParams::make(R, 1.0);
  const std::size_t n = 100000;
  RngStream s(2024, 6);
  std::vector<double> eta1(n), xi(1), eta(1);
  std::size_t misses = 0;
  const std::vector<double> z{R / 2};
  for (std::size_t i = 0; i < n; ++i) {
    if (couple_velocities_into(z, cp, s, xi, eta) != CouplingBranch::shift) ++misses;
    eta1[i] = eta[0];
  }
  const double ks = ks_statistic(eta1, normal_cdf);
  o.require(ks < oracle::ks_critical(n), "KS(eta, N(0,1)) = " + num(ks) + " < " + num(oracle::ks_critical(n)));

  const std::vector<double> z3{0.4, -0.3, 0.2};
  std::vector<double> x3(3), e3(3), eta_coord(n);
  double worst = 0.0;
  std::size_t reflections = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (couple_velocities_into(z3, cp, s, x3, e3) == CouplingBranch::reflection) {
      ++reflections;
      const double a = std::hypot(x3[0], x3[1], x3[2]), b = std::hypot(e3[0], e3[1], e3[2]);
      worst = std::max(worst, std::abs(a - b) / std::max(a, 1e-300));
    }
    eta_coord[i] = e3[0];
  }
  const double ks3 = ks_statistic(eta_coord, normal_cdf);
  o.require(ks3 < oracle::ks_critical(n), "KS(eta_1, N(0,1)) in d=3 = " + num(ks3));
  o.require(reflections > 0 && worst <= 32 * std::numeric_limits<double>::epsilon(),
            "reflection keeps |eta| = |xi| (" + std::to_string(reflections) + " reflections, worst relative gap " +
                num(worst) + ")");

  const double p = static_cast<double>(misses) / n;
  const double se = std::sqrt(p * (1 - p) / n);
  const double bound = cp.gamma * (R / 2) / std::sqrt(2 * std::numbers::pi);
  o.require(p <= bound + 3 * se, "non-coalescence " + num(p) + " <= gamma|z|/sqrt(2 pi) = " + num(bound) + " + 3 SE");
}

// 7. metric and constants
void metric_constants(Outcome& o) {
  RngStream s(7, 7);
  double worst = 0.0;
  bool equiv = true;
  for (int i = 0; i < 1000; ++i) {
    const double T = 0.1 + 2 * s.uniform(), R1 = 0.01 + 5 * s.uniform(), r = 10 * s.uniform();
    const double f = metric_f(r, R1, T);
    worst = std::max(worst, std::abs(f - oracle::metric_f_quadrature(r, R1, T)));
    equiv = equiv && r * metric_f_prime(R1, R1, T) <= f * (1 + 1e-15) && f <= r * (1 + 1e-15);
  }
  o.require(worst <= 1e-10, "closed-form f vs quadrature, max gap " + num(worst));
  o.require(equiv, "r f'(R1) <= f(r) <= r on 1000 points");

  double worst_A = 0.0;
  for (const auto& m : {gaussian_model(0.25), multiwell_model(1.0, 1, 0.0, false)})
    for (double T : {0.05, 0.2, 0.5, 1.0}) {
      const auto c = compute_constants(m, T, 1.0);
      worst_A = std::max(worst_A, std::abs(c.A * c.f_prime_R1 - 1.0));
    }
  o.require(worst_A <= std::numeric_limits<double>::epsilon(),
            "A f'(R1) = 1 up to one rounding (max gap " + num(worst_A) + ")");

  const double cu = compute_constants(gaussian_model(0.25), 1.0, 1.0).c_uhmc;
  o.require(std::abs(cu - 0.75 / 156) <= 1e-12, "gaussian c_uhmc " + num(cu) + " = 0.75/156");
  const double rt = compute_constants(multiwell_model(1.0, 1, 0.0, false), 0.05, 1.0).R_tilde;
  const double rt_exact = std::sqrt(17.0 / 6.0) * 4.0 / std::sqrt(std::exp(1.0));
  o.require(std::abs(rt - rt_exact) <= 1e-12, "multiwell R_tilde " + num(rt) + " = sqrt(17/6) 4/sqrt(e)");
}

// 8. sorted-pairing W1 against exhaustive assignment
void w1_oracle(Outcome& o) {
  RngStream s(8, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 8;
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = s.normal();
    for (auto& v : b) v = 3 * s.uniform() - 1;
    worst = std::max(worst, std::abs(wasserstein1_1d(a, b) - oracle::w1_bruteforce(a, b)));
  }
  o.require(worst <= 1e-12, "500 trials, max gap " + num(worst));
}

// 9. every CLI subcommand is byte-reproducible
void reproducibility(Outcome& o) {
  const std::string cli = MFHMC_CLI_PATH;
  const auto dir = std::filesystem::temp_directory_path() / "mfhmc_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"sample", "sample --steps 50 --N 8 --seed 11"},
      {"sample-shallow", "sample --model shallow-net --data DATA --N 4 --T 0.5 --h 0.05 --steps 20 --seed 3"},
      {"bias-scan", "bias-scan --steps 20000 --seed 5 --plot"},
      {"chaos-scan", "chaos-scan --steps 500 --replicas 8 --seed 5"},
      {"contraction", "contraction --replicas 200 --steps 20 --seed 5"},
      {"contraction-multiwell", "contraction --model multiwell --eps 0 --no-interaction --T 0.1 --h 0.02 --replicas 100 --steps 10"},
      {"order-check", "order-check --replicas 100 --seed 5"},
      {"constants", "constants --model multiwell --a 1 --eps 0.01"},
      {"constants-json", "constants --json"},
  };
  const auto data = (dir / "net.csv").string();
  {
    std::ofstream f(data);
    f << "y,z1\n";
    RngStream s(1, 1);
    for (int m = 0; m < 50; ++m) {
      const double z = s.normal();
      f << format_double(std::tanh(z)) << ',' << format_double(z) << '\n';
    }
  }
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  for (const auto& [name, args0] : commands) {
    std::string args = args0;
    if (const auto pos = args.find("DATA"); pos != std::string::npos) args.replace(pos, 4, data);
    std::string outputs[2], plots[2];
    int status[2];
    for (int run = 0; run < 2; ++run) {
      const auto out = dir / (name + "_" + std::to_string(run) + ".csv");
      std::filesystem::remove(out);
      std::filesystem::remove(dir / (name + "_" + std::to_string(run) + ".svg"));
      status[run] = std::system((cli + " " + args + " --out " + out.string() + " 2>/dev/null").c_str());
      outputs[run] = slurp(out);
      plots[run] = slurp(dir / (name + "_" + std::to_string(run) + ".svg"));
    }
    const bool same = status[0] == 0 && status[1] == 0 && !outputs[0].empty() && outputs[0] == outputs[1] &&
                      plots[0] == plots[1];
    o.require(same, name + ": " + std::to_string(outputs[0].size()) + " bytes, identical");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"1 integrator order", integrator_order},
      {"2 xHMC invariance", xhmc_invariance},
      {"3 bias scaling", bias_scaling},
      {"4 propagation of chaos", chaos},
      {"5 contraction", contraction},
      {"6 coupling correctness", coupling},
      {"7 metric and constants", metric_constants},
      {"8 W1 oracle", w1_oracle},
      {"9 reproducibility", reproducibility},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << "  (" << num(secs) << " s)\n"
              << o.detail.str() << std::flush;
    failures += !o.pass;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << '\n';
  return failures == 0 ? 0 : 1;
}
