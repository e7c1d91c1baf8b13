#include "mfhmc/kernels.hpp"

#include <cmath>
#include <optional>

#include "mfhmc/errors.hpp"

namespace mfhmc {

void KernelParams::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("duration T must be positive");
  if (!(h >= 0.0)) throw ConfigError("step size h must be nonnegative");
  if (thin == 0) throw ConfigError("thin must be positive");
  if (h > 0.0) (void)integrator();
}

void uhmc_step_inplace(const MeanFieldModel& model, std::span<double> x, const IntegratorParams& params,
                       RngStream& stream, KernelWorkspace& ws) {
  ws.momentum.resize(x.size());
  stream.fill_normal(ws.momentum);
  randomized_flow_inplace(model, x, ws.momentum, params, stream, ws.integrator);
}

std::vector<double> uhmc_step(const MeanFieldModel& model, std::span<const double> x, const KernelParams& params,
                              RngStream& stream) {
  params.validate();
  if (params.h == 0.0) throw ConfigError("uHMC needs a positive step size");
  model.particle_count(x.size());
  std::vector<double> out(x.begin(), x.end());
  KernelWorkspace ws;
  uhmc_step_inplace(model, out, params.integrator(), stream, ws);
  return out;
}

void xhmc_step_gaussian_inplace(double epsilon, std::span<double> x, double T, RngStream& stream,
                                KernelWorkspace& ws) {
  ws.momentum.resize(x.size());
  stream.fill_normal(ws.momentum);
  exact_gaussian_flow_inplace(epsilon, x, ws.momentum, T, ws.scratch);
}

std::vector<double> xhmc_step_gaussian(double epsilon, std::span<const double> x, double T, RngStream& stream) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidModel("xHMC on the gaussian model needs 0 <= eps < 1");
  if (x.empty()) throw ConfigError("state must not be empty");
  std::vector<double> out(x.begin(), x.end());
  KernelWorkspace ws;
  xhmc_step_gaussian_inplace(epsilon, out, T, stream, ws);
  return out;
}

std::vector<double> stationary_gaussian_sample(double epsilon, std::size_t n_particles, RngStream& stream) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidModel("stationary sample needs 0 <= eps < 1");
  if (n_particles == 0) throw ConfigError("need at least one particle");
  std::vector<double> z = stream.normal_vector(n_particles);
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(n_particles);
  const double stretch = (1.0 / std::sqrt(1.0 - epsilon) - 1.0) * mean;
  for (double& v : z) v += stretch;
  return z;
}

std::vector<double> initial_state(const MeanFieldModel& model, std::size_t n_particles, InitKind kind,
                                  RngStream& stream, double cold_value) {
  if (n_particles == 0) throw ConfigError("need at least one particle");
  const std::size_t n = n_particles * model.dim();
  switch (kind) {
    case InitKind::cold:
      return std::vector<double>(n, cold_value);
    case InitKind::normal:
      return stream.normal_vector(n);
    case InitKind::stationary:
      if (!model.gaussian_epsilon())
        throw ConfigError("stationary initialization is only available for the gaussian model");
      return stationary_gaussian_sample(*model.gaussian_epsilon(), n_particles, stream);
  }
  throw ConfigError("unknown initialization");
}

double mean_square(std::span<const double> x, std::size_t dim) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size() / dim);
}

void run_chain_observed(const MeanFieldModel& model, std::span<const double> x0, KernelKind kind, std::size_t m,
                        const KernelParams& params, RngStream& stream, const ChainObserver& observer) {
  params.validate();
  if (m == 0) throw ConfigError("chain length must be at least 1");
  model.particle_count(x0.size());
  std::optional<IntegratorParams> integrator;
  double gaussian_eps = 0.0;
  if (kind == KernelKind::uhmc) {
    if (params.h == 0.0) throw ConfigError("uHMC needs a positive step size");
    integrator = params.integrator();
  } else {
    if (!model.gaussian_epsilon() || model.dim() != 1)
      throw ConfigError("xHMC is implemented for the gaussian model only");
    gaussian_eps = *model.gaussian_epsilon();
  }

  std::vector<double> x(x0.begin(), x0.end());
  KernelWorkspace ws;
  observer(0, x);
  for (std::size_t step = 1; step <= m; ++step) {
    try {
      if (kind == KernelKind::uhmc)
        uhmc_step_inplace(model, x, *integrator, stream, ws);
      else
        xhmc_step_gaussian_inplace(gaussian_eps, x, params.T, stream, ws);
    } catch (const IntegrationDiverged& e) {
      throw IntegrationDiverged(e, step);
    }
    observer(step, x);
  }
}

ChainOutput run_chain(const MeanFieldModel& model, std::span<const double> x0, KernelKind kind, std::size_t m,
                      const KernelParams& params, RngStream& stream) {
  ChainOutput out;
  out.step_count = m;
  out.second_moments.reserve(m + 1);
  const std::size_t d = model.dim();
  run_chain_observed(model, x0, kind, m, params, stream, [&](std::size_t step, std::span<const double> x) {
    out.second_moments.push_back(mean_square(x, d));
    if (step % params.thin == 0) {
      out.recorded_steps.push_back(step);
      out.positions.emplace_back(x.begin(), x.end());
    }
  });
  return out;
}

}  // namespace mfhmc
