#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfhmc/model.hpp"
#include "mfhmc/rng.hpp"

namespace mfhmc {

/// Positions and momenta of N particles in dimension d, flattened particle-major.
struct PhaseState {
  std::vector<double> q;
  std::vector<double> p;
  std::size_t n_particles = 0;
  std::size_t dim = 1;

  PhaseState() = default;
  PhaseState(std::vector<double> q_, std::vector<double> p_, std::size_t dim_ = 1);

  std::size_t size() const { return q.size(); }
  /// Throws ConfigError on length mismatch or non-finite entries.
  void validate() const;
};

/// Duration T and step size h with T/h a positive integer.
class IntegratorParams {
 public:
  /// Throws ConfigError unless T > 0, 0 < h <= T and T/h is an integer (to 1e-9 relative).
  IntegratorParams(double T, double h);

  double T() const { return T_; }
  double h() const { return h_; }
  std::size_t n_steps() const { return n_steps_; }

 private:
  double T_;
  double h_;
  std::size_t n_steps_;
};

/// Coordinates above this magnitude abort the trajectory.
inline constexpr double kDivergenceBound = 1e100;

/// Reusable scratch buffers for the hot loops; one per worker.
struct IntegratorWorkspace {
  std::vector<double> eval_point;
  std::vector<double> force;
};

/// One step of the randomized integrator, in place.
///
/// With Q* = q + h u p and g = -grad U(Q*) held fixed over the step,
/// q <- q + h p + (h^2/2) g and p <- p + h g. `step_index` is only used for
/// error reporting.
void randomized_step_inplace(const MeanFieldModel& model, std::span<double> q, std::span<double> p, double h,
                             double u, IntegratorWorkspace& ws, std::size_t step_index = 0);

PhaseState randomized_step(const MeanFieldModel& model, const PhaseState& state, double h, double u);

/// n_steps randomized steps, one fresh uniform per step drawn from `stream`.
/// When `trajectory` is given, the states after every step are appended
/// (the initial state is not).
PhaseState randomized_flow(const MeanFieldModel& model, PhaseState state, const IntegratorParams& params,
                           RngStream& stream, std::vector<PhaseState>* trajectory = nullptr);

/// In-place variant used by the kernels.
void randomized_flow_inplace(const MeanFieldModel& model, std::span<double> q, std::span<double> p,
                             const IntegratorParams& params, RngStream& stream, IntegratorWorkspace& ws);

/// Normal coordinates of the Gaussian model: Q^1 = mean(q), Q^{i+1} = q^{i+1} - q^i.
void to_internal(std::span<const double> q, std::span<double> out);
/// O(N) inverse of to_internal.
void from_internal(std::span<const double> internal, std::span<double> out);

/// to_internal followed by from_internal.
std::vector<double> roundtrip_internal_transform(std::span<const double> q);

/// Exact Hamiltonian flow of the N-particle Gaussian model for time t (any sign), in O(N).
/// The mean mode oscillates with frequency sqrt(1 - eps), the difference modes with 1.
PhaseState exact_gaussian_flow(double epsilon, const PhaseState& state, double t);

void exact_gaussian_flow_inplace(double epsilon, std::span<double> q, std::span<double> p, double t,
                                 std::vector<double>& scratch);

}  // namespace mfhmc
