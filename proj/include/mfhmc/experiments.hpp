#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mfhmc/couplings.hpp"
#include "mfhmc/kernels.hpp"
#include "mfhmc/model.hpp"
#include "mfhmc/report.hpp"
#include "mfhmc/theory.hpp"

namespace mfhmc {

/// Model name plus the parameters the factories need.
struct ModelSpec {
  std::string name = "gaussian";  ///< gaussian, multiwell or shallow-net
  double eps = 0.25;              ///< interaction strength (Gaussian: its epsilon)
  double a = 1.0;                 ///< multiwell depth
  std::size_t dim = 1;            ///< multiwell dimension
  bool interaction = true;        ///< multiwell: include W = |x - y|^2 / 2
  std::string data_path;          ///< shallow-net dataset
  ConfigEntries entries() const;
};

/// Throws ConfigError for unknown names, InvalidModel for bad parameters.
MeanFieldModel build_model(const ModelSpec& spec);

enum class HRule { fixed, eps_2_3, eps_1_2 };
HRule parse_h_rule(const std::string& text);
std::string to_string(HRule rule);

/// Largest h' <= h with T/h' integral: T / ceil(T/h).
double snap_step(double T, double h);

InitKind parse_init_kind(const std::string& text);
std::string to_string(InitKind kind);

struct BiasScanConfig {
  std::size_t k_min = 1;
  std::size_t k_max = 3;
  std::size_t steps = 200000;
  HRule h_rule = HRule::eps_2_3;
  double h_fixed = 0.0;  ///< used when h_rule is fixed
  double epsilon = 0.25;
  double T = 1.0;
  double burn_in = 0.1;  ///< fraction of steps discarded
  /// Pool every particle instead of the first one; same marginal, lower variance.
  bool all_particles = false;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  ConfigEntries entries() const;
};

struct BiasRow {
  std::size_t k = 0;
  double eps_acc = 0.0;
  std::size_t N = 0;
  double h = 0.0;
  std::size_t steps = 0;
  double kde_rel_error = 0.0;
  double variance = 0.0;  ///< sample variance of the pooled values
};

struct BiasScanResult {
  std::vector<BiasRow> rows;
  /// Least-squares slope of log2(error) against log2(eps_acc); nan with fewer than 2 rows.
  double slope = 0.0;
};

BiasScanResult bias_scan(const BiasScanConfig& config);
void write_bias_csv(std::ostream& out, const BiasScanConfig& config, const BiasScanResult& result);
void write_bias_svg(std::ostream& out, const BiasScanResult& result);

struct ChaosScanConfig {
  std::vector<std::size_t> N_list{16, 64, 256};
  std::size_t steps = 10000;
  std::size_t replicas = 64;
  double epsilon = 0.25;
  double T = 1.0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  ConfigEntries entries() const;
};

struct ChaosRow {
  std::size_t N = 0;
  double var_err = 0.0;         ///< |Var_hat(x_1) - 1|
  double mean_coord_var = 0.0;  ///< variance of the particle mean
  double w1_marginal = 0.0;     ///< W1(pooled marginal, exact normal draws)
  double var_hat = 0.0;
  double var_se = 0.0;
  double var_exact = 0.0;  ///< 1 + eps/(N(1 - eps))
  double mean_coord_var_se = 0.0;
  double mean_coord_var_exact = 0.0;  ///< 1/((1 - eps) N)
};

struct ChaosScanResult {
  std::vector<ChaosRow> rows;
  double slope_empirical = 0.0;  ///< log-log slope of var_err against N
  double slope_analytic = 0.0;   ///< same for var_exact - 1
};

ChaosScanResult chaos_scan(const ChaosScanConfig& config);
void write_chaos_csv(std::ostream& out, const ChaosScanConfig& config, const ChaosScanResult& result);

struct ContractionConfig {
  ModelSpec model;
  std::size_t N = 16;
  double T = 0.0;  ///< 0 selects the largest admissible T for uHMC
  double h = 0.0;  ///< 0 selects T/10
  std::size_t steps = 50;
  std::size_t replicas = 1000;
  double offset = 1.0;  ///< x' = x + offset in every coordinate
  bool synchronous = false;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  ConfigEntries entries() const;
};

struct ContractionResult {
  double T = 0.0;
  double h = 0.0;
  TheoryConstants theory;
  ContractionTable table;
  /// A exp(-c_uhmc m) rho_N(0) per step.
  std::vector<double> bound;
  bool conditions_hold = false;
  std::vector<std::string> warnings;
};

ContractionResult contraction_experiment(const ContractionConfig& config);
void write_contraction_csv(std::ostream& out, const ContractionConfig& config, const ContractionResult& result);

struct OrderCheckConfig {
  std::vector<double> h_list{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  double T = 1.0;
  std::size_t N = 64;
  double epsilon = 0.25;
  std::size_t replicas = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  ConfigEntries entries() const;
};

struct OrderRow {
  double h = 0.0;
  double mean_weighted_error = 0.0;
  double stderr_error = 0.0;
  double theory_bound = 0.0;  ///< 5 (L_e^{1/2} h)^{3/2}
};

struct OrderCheckResult {
  std::vector<OrderRow> rows;
  double slope = 0.0;
};

OrderCheckResult order_check(const OrderCheckConfig& config);
void write_order_csv(std::ostream& out, const OrderCheckConfig& config, const OrderCheckResult& result);

struct SampleConfig {
  ModelSpec model;
  std::size_t N = 16;
  double T = 1.0;
  double h = 0.1;  ///< 0 selects xHMC (Gaussian model only)
  std::size_t steps = 100;
  std::size_t thin = 1;
  InitKind init = InitKind::normal;
  double cold_value = 0.0;
  std::size_t coords = 0;  ///< write only the first `coords` coordinates; 0 writes all
  std::uint64_t seed = 0;
  ConfigEntries entries() const;
};

/// Runs one chain and streams `step,x_1,...` rows to `out`, then a footer of
/// comment lines with the theory constants.
void sample_command(const SampleConfig& config, std::ostream& out);

struct ConstantsConfig {
  ModelSpec model;
  double T = 0.0;  ///< 0 selects the largest admissible T for uHMC
  double m2_init = 0.0;  ///< 0 selects d (standard normal start)
  double B3 = 1.0;
  ConfigEntries entries() const;
};

struct ConstantsReport {
  std::string model;
  double epsilon = 0.0;
  double T = 0.0;
  AssumptionConstants assumptions;
  TheoryConstants theory;
};

ConstantsReport constants_report(const ConstantsConfig& config);
void write_constants_table(std::ostream& out, const ConstantsConfig& config, const ConstantsReport& report);
void write_constants_json(std::ostream& out, const ConstantsConfig& config, const ConstantsReport& report);

}  // namespace mfhmc
