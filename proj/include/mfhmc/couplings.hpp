#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mfhmc/kernels.hpp"
#include "mfhmc/model.hpp"
#include "mfhmc/rng.hpp"

namespace mfhmc {

/// Reflection coupling parameters: threshold R_tilde and strength
/// gamma = min(1/T, 1/(4 R_tilde)), with gamma = 1/T when R_tilde = 0.
struct CouplingParams {
  double R_tilde = 0.0;
  double gamma = 1.0;
  double T = 1.0;
  /// Force the synchronous coupling regardless of distance.
  bool synchronous_only = false;

  static CouplingParams make(double R_tilde, double T);
  static CouplingParams synchronous(double T);
};

enum class CouplingBranch { synchronous, shift, reflection };

struct CoupledVelocities {
  std::vector<double> xi;
  std::vector<double> eta;
};

/// Couples xi ~ N(0, I_d) with eta ~ N(0, I_d) for separation z = x - x'.
/// If |z| >= R_tilde, eta = xi. Otherwise eta = xi + gamma z with probability
/// min(1, phi(e.xi + gamma|z|)/phi(e.xi)) and the reflection of xi across
/// e^perp else, where e = z/|z| (first basis vector when z = 0).
/// Consumes d normals plus one uniform; the uniform is drawn on every branch.
CouplingBranch couple_velocities_into(std::span<const double> z, const CouplingParams& cp, RngStream& stream,
                                      std::span<double> xi, std::span<double> eta);
CoupledVelocities couple_velocities(std::span<const double> z, const CouplingParams& cp, RngStream& stream);

struct BranchCounts {
  std::size_t synchronous = 0;
  std::size_t shift = 0;
  std::size_t reflection = 0;
};

/// Particle-wise coupling: couple_velocities applied to every particle i with
/// its own separation x^i - x'^i and an independent uniform.
CoupledVelocities couple_velocities_particlewise(std::span<const double> x, std::span<const double> x_prime,
                                                 std::size_t dim, const CouplingParams& cp, RngStream& stream,
                                                 BranchCounts* counts = nullptr);

/// One coupled uHMC step, in place. Both copies share the integrator uniforms.
void coupled_uhmc_step_inplace(const MeanFieldModel& model, std::span<double> x, std::span<double> x_prime,
                               const IntegratorParams& params, const CouplingParams& cp, RngStream& stream,
                               KernelWorkspace& ws, BranchCounts* counts = nullptr);

std::pair<std::vector<double>, std::vector<double>> coupled_uhmc_step(const MeanFieldModel& model,
                                                                      std::span<const double> x,
                                                                      std::span<const double> x_prime,
                                                                      const KernelParams& params,
                                                                      const CouplingParams& cp, RngStream& stream);

/// f(r) = int_0^r exp(-min(R1, s)/T) ds in closed form.
double metric_f(double r, double R1, double T);
/// f'(r) = exp(-min(R1, r)/T).
double metric_f_prime(double r, double R1, double T);

/// N^{-1} sum_i f(|x^i - y^i|).
double rho_N(std::span<const double> x, std::span<const double> y, std::size_t dim, double R1, double T);
/// N^{-1} sum_i |x^i - y^i|.
double ell1_bar(std::span<const double> x, std::span<const double> y, std::size_t dim);

struct ContractionTable {
  std::vector<double> mean_rho;  ///< per step 0..m
  std::vector<double> stderr_rho;
  /// exp of the least-squares slope of log E[rho_N] against the step.
  double decay_factor = 1.0;
  /// Standard error of decay_factor across replica batches.
  double decay_factor_se = 0.0;
  BranchCounts branches;
};

/// Draws the initial pair (x, x') for replica `replica` from `stream`.
using PairSampler =
    std::function<std::pair<std::vector<double>, std::vector<double>>(std::size_t replica, RngStream& stream)>;

struct ContractionOptions {
  std::size_t steps = 50;
  std::size_t replicas = 1000;
  std::size_t threads = 1;
  /// Metric parameters; R1 defaults to the coupling's (5/4)(R_tilde + 2T) when 0.
  double R1 = 0.0;
  /// Batches used for the decay-factor standard error.
  std::size_t batches = 10;
};

/// Monte Carlo estimate of E[rho_N] along coupled uHMC chains.
ContractionTable estimate_contraction(const MeanFieldModel& model, const KernelParams& params,
                                      const CouplingParams& cp, const ContractionOptions& options,
                                      const PairSampler& init, std::uint64_t seed);

}  // namespace mfhmc
