#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mfhmc/integrators.hpp"
#include "mfhmc/model.hpp"
#include "mfhmc/rng.hpp"

namespace mfhmc {

enum class KernelKind {
  uhmc,  ///< randomized time integrator, no Metropolis correction
  xhmc,  ///< exact flow; Gaussian model only
};

struct KernelParams {
  double T = 1.0;
  /// Integrator step; 0 selects the exact flow (xHMC).
  double h = 0.0;
  /// Recording stride for run_chain.
  std::size_t thin = 1;

  /// Throws ConfigError when T <= 0, h < 0, thin == 0 or T/h is not integral.
  void validate() const;
  IntegratorParams integrator() const { return IntegratorParams(T, h); }
};

/// Scratch space for kernel steps; keep one per chain to avoid reallocation.
struct KernelWorkspace {
  std::vector<double> momentum;
  IntegratorWorkspace integrator;
  std::vector<double> scratch;
};

/// One uHMC transition: full velocity refresh, then the randomized flow for time T.
std::vector<double> uhmc_step(const MeanFieldModel& model, std::span<const double> x, const KernelParams& params,
                              RngStream& stream);
void uhmc_step_inplace(const MeanFieldModel& model, std::span<double> x, const IntegratorParams& params,
                       RngStream& stream, KernelWorkspace& ws);

/// One xHMC transition of the Gaussian model (d = 1).
std::vector<double> xhmc_step_gaussian(double epsilon, std::span<const double> x, double T, RngStream& stream);
void xhmc_step_gaussian_inplace(double epsilon, std::span<double> x, double T, RngStream& stream,
                                KernelWorkspace& ws);

/// Exact draw from the N-particle stationary law of the Gaussian model,
/// N(0, M^{-1}) with M = I - (eps/N) 1 1^T: the mean direction of a standard
/// normal vector is stretched by 1/sqrt(1 - eps).
std::vector<double> stationary_gaussian_sample(double epsilon, std::size_t n_particles, RngStream& stream);

enum class InitKind { cold, normal, stationary };

/// Initial state of N particles: all coordinates equal to `cold_value`, i.i.d.
/// standard normal, or the Gaussian model's stationary law.
std::vector<double> initial_state(const MeanFieldModel& model, std::size_t n_particles, InitKind kind,
                                  RngStream& stream, double cold_value = 0.0);

/// N^{-1} sum_i |x^i|^2.
double mean_square(std::span<const double> x, std::size_t dim);

struct ChainOutput {
  std::vector<std::size_t> recorded_steps;
  std::vector<std::vector<double>> positions;  ///< states at recorded_steps, initial included
  std::vector<double> second_moments;          ///< per step 0..m
  std::size_t step_count = 0;
};

/// Called after every transition with (step, state); step 0 is the initial state.
using ChainObserver = std::function<void(std::size_t, std::span<const double>)>;

/// Iterates the kernel m times from x0, calling `observer` on every state.
/// Divergence is rethrown with the chain step attached.
void run_chain_observed(const MeanFieldModel& model, std::span<const double> x0, KernelKind kind, std::size_t m,
                        const KernelParams& params, RngStream& stream, const ChainObserver& observer);

ChainOutput run_chain(const MeanFieldModel& model, std::span<const double> x0, KernelKind kind, std::size_t m,
                      const KernelParams& params, RngStream& stream);

}  // namespace mfhmc
