#include "mfhmc/integrators.hpp"

#include <cmath>
#include <string>

#include "mfhmc/errors.hpp"

namespace mfhmc {

PhaseState::PhaseState(std::vector<double> q_, std::vector<double> p_, std::size_t dim_)
    : q(std::move(q_)), p(std::move(p_)), n_particles(0), dim(dim_) {
  if (dim == 0) throw ConfigError("phase state dimension must be positive");
  n_particles = q.size() / dim;
  validate();
}

void PhaseState::validate() const {
  if (dim == 0 || q.size() != p.size() || q.size() != n_particles * dim)
    throw ConfigError("phase state shape mismatch: |q|=" + std::to_string(q.size()) +
                      " |p|=" + std::to_string(p.size()) + " N=" + std::to_string(n_particles) +
                      " d=" + std::to_string(dim));
  for (std::size_t k = 0; k < q.size(); ++k)
    if (!std::isfinite(q[k]) || !std::isfinite(p[k])) throw ConfigError("phase state has non-finite entries");
}

IntegratorParams::IntegratorParams(double T, double h) : T_(T), h_(h), n_steps_(0) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("duration T must be positive");
  if (!(h > 0.0) || h > T * (1.0 + 1e-12)) throw ConfigError("step size h must satisfy 0 < h <= T");
  const double ratio = T / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * rounded)
    throw ConfigError("T/h must be an integer (T=" + std::to_string(T) + ", h=" + std::to_string(h) + ")");
  n_steps_ = static_cast<std::size_t>(rounded);
}

namespace {

void check_finite(std::span<const double> q, std::span<const double> p, std::size_t step) {
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!(std::abs(q[k]) <= kDivergenceBound) || !(std::abs(p[k]) <= kDivergenceBound))
      throw IntegrationDiverged(step, "trajectory diverged");
  }
}

}  // namespace

void randomized_step_inplace(const MeanFieldModel& model, std::span<double> q, std::span<double> p, double h,
                             double u, IntegratorWorkspace& ws, std::size_t step_index) {
  const std::size_t n = q.size();
  ws.eval_point.resize(n);
  ws.force.resize(n);
  const double hu = h * u;
  for (std::size_t k = 0; k < n; ++k) ws.eval_point[k] = q[k] + hu * p[k];
  model.mean_field_grad_all(ws.eval_point, ws.force);
  const double half_h2 = 0.5 * h * h;
  for (std::size_t k = 0; k < n; ++k) {
    const double g = -ws.force[k];
    q[k] += h * p[k] + half_h2 * g;
    p[k] += h * g;
  }
  check_finite(q, p, step_index);
}

PhaseState randomized_step(const MeanFieldModel& model, const PhaseState& state, double h, double u) {
  PhaseState out = state;
  IntegratorWorkspace ws;
  randomized_step_inplace(model, out.q, out.p, h, u, ws);
  return out;
}

void randomized_flow_inplace(const MeanFieldModel& model, std::span<double> q, std::span<double> p,
                             const IntegratorParams& params, RngStream& stream, IntegratorWorkspace& ws) {
  for (std::size_t k = 0; k < params.n_steps(); ++k)
    randomized_step_inplace(model, q, p, params.h(), stream.uniform(), ws, k);
}

PhaseState randomized_flow(const MeanFieldModel& model, PhaseState state, const IntegratorParams& params,
                           RngStream& stream, std::vector<PhaseState>* trajectory) {
  IntegratorWorkspace ws;
  for (std::size_t k = 0; k < params.n_steps(); ++k) {
    randomized_step_inplace(model, state.q, state.p, params.h(), stream.uniform(), ws, k);
    if (trajectory) trajectory->push_back(state);
  }
  return state;
}

void to_internal(std::span<const double> q, std::span<double> out) {
  const std::size_t n = q.size();
  double sum = 0.0;
  for (double v : q) sum += v;
  out[0] = sum / static_cast<double>(n);
  for (std::size_t i = 1; i < n; ++i) out[i] = q[i] - q[i - 1];
}

void from_internal(std::span<const double> internal, std::span<double> out) {
  const std::size_t n = internal.size();
  // (i) anchor the first particle at zero and integrate the differences,
  // (ii) shift so that the mean equals the mean mode.
  out[0] = 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    out[i] = out[i - 1] + internal[i];
    sum += out[i];
  }
  const double shift = internal[0] - sum / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] += shift;
}

std::vector<double> roundtrip_internal_transform(std::span<const double> q) {
  if (q.empty()) return {};
  std::vector<double> internal(q.size()), out(q.size());
  to_internal(q, internal);
  from_internal(internal, out);
  return out;
}

void exact_gaussian_flow_inplace(double epsilon, std::span<double> q, std::span<double> p, double t,
                                 std::vector<double>& scratch) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidModel("exact gaussian flow needs 0 <= eps < 1");
  if (t == 0.0) return;
  const std::size_t n = q.size();
  scratch.resize(2 * n);
  std::span<double> Q(scratch.data(), n), P(scratch.data() + n, n);
  to_internal(q, Q);
  to_internal(p, P);

  const double w0 = std::sqrt(1.0 - epsilon);
  const double c0 = std::cos(w0 * t), s0 = std::sin(w0 * t);
  const double q0 = Q[0], p0 = P[0];
  Q[0] = c0 * q0 + s0 / w0 * p0;
  P[0] = -w0 * s0 * q0 + c0 * p0;

  const double c1 = std::cos(t), s1 = std::sin(t);
  for (std::size_t i = 1; i < n; ++i) {
    const double qi = Q[i], pi = P[i];
    Q[i] = c1 * qi + s1 * pi;
    P[i] = -s1 * qi + c1 * pi;
  }
  from_internal(Q, q);
  from_internal(P, p);
}

PhaseState exact_gaussian_flow(double epsilon, const PhaseState& state, double t) {
  if (state.dim != 1) throw ConfigError("exact gaussian flow requires d = 1");
  PhaseState out = state;
  std::vector<double> scratch;
  exact_gaussian_flow_inplace(epsilon, out.q, out.p, t, scratch);
  return out;
}

}  // namespace mfhmc
