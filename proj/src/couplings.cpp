#include "mfhmc/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfhmc/errors.hpp"
#include "mfhmc/parallel.hpp"
#include "mfhmc/statistics.hpp"

namespace mfhmc {

CouplingParams CouplingParams::make(double R_tilde, double T) {
  if (!(T > 0.0)) throw ConfigError("coupling duration must be positive");
  if (!(R_tilde >= 0.0)) throw ConfigError("coupling threshold must be nonnegative");
  CouplingParams cp;
  cp.R_tilde = R_tilde;
  cp.T = T;
  cp.gamma = R_tilde > 0.0 ? std::min(1.0 / T, 1.0 / (4.0 * R_tilde)) : 1.0 / T;
  return cp;
}

CouplingParams CouplingParams::synchronous(double T) {
  CouplingParams cp = make(0.0, T);
  cp.synchronous_only = true;
  return cp;
}

CouplingBranch couple_velocities_into(std::span<const double> z, const CouplingParams& cp, RngStream& stream,
                                      std::span<double> xi, std::span<double> eta) {
  const std::size_t d = z.size();
  stream.fill_normal(xi);
  const double u = stream.uniform();
  std::copy(xi.begin(), xi.end(), eta.begin());

  double norm = 0.0;
  for (double v : z) norm += v * v;
  norm = std::sqrt(norm);
  if (cp.synchronous_only || norm >= cp.R_tilde) return CouplingBranch::synchronous;

  // e = z/|z|, or the first basis vector for coincident points.
  double e_dot_xi = 0.0;
  if (norm > 0.0) {
    for (std::size_t k = 0; k < d; ++k) e_dot_xi += z[k] / norm * xi[k];
  } else {
    e_dot_xi = xi[0];
  }
  const double shift = cp.gamma * norm;
  // log phi(a + b) - log phi(a) = -(2ab + b^2)/2
  const double log_ratio = -(2.0 * e_dot_xi * shift + shift * shift) / 2.0;
  if (u == 0.0 || std::log(u) <= log_ratio) {
    for (std::size_t k = 0; k < d; ++k) eta[k] = xi[k] + cp.gamma * z[k];
    return CouplingBranch::shift;
  }
  for (std::size_t k = 0; k < d; ++k) {
    const double e_k = norm > 0.0 ? z[k] / norm : (k == 0 ? 1.0 : 0.0);
    eta[k] = xi[k] - 2.0 * e_dot_xi * e_k;
  }
  return CouplingBranch::reflection;
}

CoupledVelocities couple_velocities(std::span<const double> z, const CouplingParams& cp, RngStream& stream) {
  if (z.empty()) throw ConfigError("separation vector must not be empty");
  CoupledVelocities out{std::vector<double>(z.size()), std::vector<double>(z.size())};
  couple_velocities_into(z, cp, stream, out.xi, out.eta);
  return out;
}

namespace {

void count_branch(BranchCounts* counts, CouplingBranch branch) {
  if (!counts) return;
  switch (branch) {
    case CouplingBranch::synchronous: ++counts->synchronous; break;
    case CouplingBranch::shift: ++counts->shift; break;
    case CouplingBranch::reflection: ++counts->reflection; break;
  }
}

void couple_particlewise_into(std::span<const double> x, std::span<const double> x_prime, std::size_t dim,
                              const CouplingParams& cp, RngStream& stream, std::span<double> xi,
                              std::span<double> eta, std::vector<double>& z, BranchCounts* counts) {
  const std::size_t n = x.size() / dim;
  z.resize(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dim; ++k) z[k] = x[i * dim + k] - x_prime[i * dim + k];
    count_branch(counts,
                 couple_velocities_into(z, cp, stream, xi.subspan(i * dim, dim), eta.subspan(i * dim, dim)));
  }
}

void check_pair(std::span<const double> x, std::span<const double> x_prime, std::size_t dim) {
  if (dim == 0 || x.size() != x_prime.size() || x.empty() || x.size() % dim != 0)
    throw ConfigError("coupled states must have equal, nonzero size divisible by d");
}

}  // namespace

CoupledVelocities couple_velocities_particlewise(std::span<const double> x, std::span<const double> x_prime,
                                                 std::size_t dim, const CouplingParams& cp, RngStream& stream,
                                                 BranchCounts* counts) {
  check_pair(x, x_prime, dim);
  CoupledVelocities out{std::vector<double>(x.size()), std::vector<double>(x.size())};
  std::vector<double> z;
  couple_particlewise_into(x, x_prime, dim, cp, stream, out.xi, out.eta, z, counts);
  return out;
}

void coupled_uhmc_step_inplace(const MeanFieldModel& model, std::span<double> x, std::span<double> x_prime,
                               const IntegratorParams& params, const CouplingParams& cp, RngStream& stream,
                               KernelWorkspace& ws, BranchCounts* counts) {
  const std::size_t n = x.size();
  ws.momentum.resize(2 * n);
  std::span<double> p(ws.momentum.data(), n), p_prime(ws.momentum.data() + n, n);
  couple_particlewise_into(x, x_prime, model.dim(), cp, stream, p, p_prime, ws.scratch, counts);
  for (std::size_t k = 0; k < params.n_steps(); ++k) {
    const double u = stream.uniform();
    randomized_step_inplace(model, x, p, params.h(), u, ws.integrator, k);
    randomized_step_inplace(model, x_prime, p_prime, params.h(), u, ws.integrator, k);
  }
}

std::pair<std::vector<double>, std::vector<double>> coupled_uhmc_step(const MeanFieldModel& model,
                                                                      std::span<const double> x,
                                                                      std::span<const double> x_prime,
                                                                      const KernelParams& params,
                                                                      const CouplingParams& cp, RngStream& stream) {
  params.validate();
  if (params.h == 0.0) throw ConfigError("coupled uHMC needs a positive step size");
  check_pair(x, x_prime, model.dim());
  model.particle_count(x.size());
  std::pair<std::vector<double>, std::vector<double>> out{std::vector<double>(x.begin(), x.end()),
                                                          std::vector<double>(x_prime.begin(), x_prime.end())};
  KernelWorkspace ws;
  coupled_uhmc_step_inplace(model, out.first, out.second, params.integrator(), cp, stream, ws);
  return out;
}

double metric_f(double r, double R1, double T) {
  if (!(r >= 0.0)) throw std::domain_error("metric_f needs r >= 0");
  if (r <= R1) return -T * std::expm1(-r / T);
  return -T * std::expm1(-R1 / T) + std::exp(-R1 / T) * (r - R1);
}

double metric_f_prime(double r, double R1, double T) { return std::exp(-std::min(R1, r) / T); }

double rho_N(std::span<const double> x, std::span<const double> y, std::size_t dim, double R1, double T) {
  check_pair(x, y, dim);
  const std::size_t n = x.size() / dim;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += (x[i * dim + k] - y[i * dim + k]) * (x[i * dim + k] - y[i * dim + k]);
    total += metric_f(std::sqrt(s), R1, T);
  }
  return total / static_cast<double>(n);
}

double ell1_bar(std::span<const double> x, std::span<const double> y, std::size_t dim) {
  check_pair(x, y, dim);
  const std::size_t n = x.size() / dim;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += (x[i * dim + k] - y[i * dim + k]) * (x[i * dim + k] - y[i * dim + k]);
    total += std::sqrt(s);
  }
  return total / static_cast<double>(n);
}

namespace {

// exp(slope) of log(mean) vs step over the strictly positive entries.
double fit_decay(const std::vector<double>& mean) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < mean.size(); ++k) {
    if (mean[k] > std::numeric_limits<double>::min()) {
      xs.push_back(static_cast<double>(k));
      ys.push_back(std::log(mean[k]));
    }
  }
  if (xs.size() < 2) return 0.0;
  return std::exp(linear_fit(xs, ys).slope);
}

}  // namespace

ContractionTable estimate_contraction(const MeanFieldModel& model, const KernelParams& params,
                                      const CouplingParams& cp, const ContractionOptions& options,
                                      const PairSampler& init, std::uint64_t seed) {
  params.validate();
  if (params.h == 0.0) throw ConfigError("contraction estimation needs a positive step size");
  if (options.replicas < 100) throw ConfigError("contraction estimation needs at least 100 replicas");
  if (options.steps == 0) throw ConfigError("contraction estimation needs at least one step");
  const IntegratorParams integrator = params.integrator();
  const double R1 = options.R1 > 0.0 ? options.R1 : 1.25 * (cp.R_tilde + 2.0 * params.T);
  const std::size_t m = options.steps;
  const std::size_t d = model.dim();

  std::vector<std::vector<double>> rho(options.replicas, std::vector<double>(m + 1));
  std::vector<BranchCounts> counts(options.replicas);
  parallel_for(options.replicas, options.threads, [&](std::size_t r) {
    RngStream stream = RngStream::for_chain(seed, r);
    auto [x, y] = init(r, stream);
    check_pair(x, y, d);
    KernelWorkspace ws;
    rho[r][0] = rho_N(x, y, d, R1, params.T);
    for (std::size_t step = 1; step <= m; ++step) {
      try {
        coupled_uhmc_step_inplace(model, x, y, integrator, cp, stream, ws, &counts[r]);
      } catch (const IntegrationDiverged& e) {
        throw IntegrationDiverged(e, step);
      }
      rho[r][step] = rho_N(x, y, d, R1, params.T);
    }
  });

  ContractionTable table;
  table.mean_rho.assign(m + 1, 0.0);
  table.stderr_rho.assign(m + 1, 0.0);
  std::vector<double> column(options.replicas);
  for (std::size_t step = 0; step <= m; ++step) {
    for (std::size_t r = 0; r < options.replicas; ++r) column[r] = rho[r][step];
    const auto summary = mean_with_stderr(column);
    table.mean_rho[step] = summary.mean;
    table.stderr_rho[step] = summary.se;
  }
  for (const auto& c : counts) {
    table.branches.synchronous += c.synchronous;
    table.branches.shift += c.shift;
    table.branches.reflection += c.reflection;
  }
  table.decay_factor = fit_decay(table.mean_rho);

  const std::size_t batches = std::max<std::size_t>(2, std::min(options.batches, options.replicas / 10));
  std::vector<double> batch_factors;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t lo = b * options.replicas / batches, hi = (b + 1) * options.replicas / batches;
    std::vector<double> mean(m + 1, 0.0);
    for (std::size_t r = lo; r < hi; ++r)
      for (std::size_t step = 0; step <= m; ++step) mean[step] += rho[r][step];
    for (auto& v : mean) v /= static_cast<double>(hi - lo);
    batch_factors.push_back(fit_decay(mean));
  }
  table.decay_factor_se = mean_with_stderr(batch_factors).se;
  return table;
}

}  // namespace mfhmc
