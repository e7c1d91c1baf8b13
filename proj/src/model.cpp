#include "mfhmc/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mfhmc/errors.hpp"
#include "mfhmc/rng.hpp"

namespace mfhmc {

AssumptionConstants AssumptionConstants::make(double K, double L1, double L2, double L_tilde, double R_conv,
                                              double W0, bool certified) {
  AssumptionConstants c;
  c.K = K;
  c.L1 = L1;
  c.L2 = L2;
  c.L_tilde = L_tilde;
  c.R_conv = R_conv;
  c.W0 = W0;
  c.L = std::max(L1, L2);
  c.C_hat = (2.0 * c.L + K) * R_conv * R_conv;
  c.certified = certified;
  return c;
}

void ModelTerms::interaction_sums(std::span<const double> q, std::size_t n_particles, std::span<double> out) const {
  const std::size_t d = dim();
  std::vector<double> term(d);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n_particles; ++i) {
    const auto xi = q.subspan(i * d, d);
    auto acc = out.subspan(i * d, d);
    for (std::size_t j = 0; j < n_particles; ++j) {
      grad1_W(xi, q.subspan(j * d, d), term);
      for (std::size_t k = 0; k < d; ++k) acc[k] += term[k];
    }
  }
}

MeanFieldModel::MeanFieldModel(std::string name, std::shared_ptr<const ModelTerms> terms,
                               double interaction_strength, AssumptionConstants constants)
    : name_(std::move(name)), terms_(std::move(terms)), strength_(interaction_strength), constants_(constants) {
  if (!terms_) throw InvalidModel("model terms must not be null");
  if (terms_->dim() == 0) throw InvalidModel("model dimension must be positive");
  if (!(interaction_strength >= 0.0) || !std::isfinite(interaction_strength))
    throw InvalidModel("interaction strength must be finite and nonnegative");
}

MeanFieldModel MeanFieldModel::with_interaction_strength(double strength) const {
  MeanFieldModel copy(name_, terms_, strength, constants_);
  if (strength == strength_) copy.gaussian_epsilon_ = gaussian_epsilon_;
  return copy;
}

std::vector<double> MeanFieldModel::grad_V(std::span<const double> x) const {
  std::vector<double> out(dim());
  terms_->grad_V(x, out);
  return out;
}

std::vector<double> MeanFieldModel::grad1_W(std::span<const double> x, std::span<const double> y) const {
  std::vector<double> out(dim());
  terms_->grad1_W(x, y, out);
  return out;
}

std::size_t MeanFieldModel::particle_count(std::size_t flat_size) const {
  const std::size_t d = dim();
  if (flat_size == 0 || flat_size % d != 0)
    throw InvalidModel("state length " + std::to_string(flat_size) + " is not a positive multiple of d=" +
                       std::to_string(d));
  return flat_size / d;
}

std::vector<double> MeanFieldModel::mean_field_grad(std::span<const double> q, std::size_t i) const {
  const std::size_t n = particle_count(q.size());
  if (i >= n) throw std::out_of_range("particle index " + std::to_string(i) + " out of range");
  const std::size_t d = dim();
  const auto xi = q.subspan(i * d, d);
  std::vector<double> out(d);
  terms_->grad_V(xi, out);
  if (strength_ != 0.0) {
    std::vector<double> term(d), acc(d, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      terms_->grad1_W(xi, q.subspan(j * d, d), term);
      for (std::size_t k = 0; k < d; ++k) acc[k] += term[k];
    }
    const double scale = strength_ / static_cast<double>(n);
    for (std::size_t k = 0; k < d; ++k) out[k] += scale * acc[k];
  }
  return out;
}

void MeanFieldModel::mean_field_grad_all(std::span<const double> q, std::span<double> out) const {
  const std::size_t n = particle_count(q.size());
  const std::size_t d = dim();
  if (strength_ != 0.0) {
    terms_->interaction_sums(q, n, out);
    const double scale = strength_ / static_cast<double>(n);
    for (auto& v : out) v *= scale;
  } else {
    std::fill(out.begin(), out.end(), 0.0);
  }
  std::vector<double> gv(d);
  for (std::size_t i = 0; i < n; ++i) {
    terms_->grad_V(q.subspan(i * d, d), gv);
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] += gv[k];
  }
}

double MeanFieldModel::potential(std::span<const double> q) const {
  const std::size_t n = particle_count(q.size());
  const std::size_t d = dim();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = q.subspan(i * d, d);
    double pair = 0.0;
    if (strength_ != 0.0)
      for (std::size_t j = 0; j < n; ++j) pair += terms_->W(xi, q.subspan(j * d, d));
    total += terms_->V(xi) + strength_ / (2.0 * static_cast<double>(n)) * pair;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Gaussian verification model

namespace {

class GaussianTerms final : public ModelTerms {
 public:
  explicit GaussianTerms(double eps) : eps_(eps) {}

  std::size_t dim() const override { return 1; }
  double V(std::span<const double> x) const override { return x[0] * x[0] * (1.0 - eps_) / 2.0; }
  void grad_V(std::span<const double> x, std::span<double> out) const override { out[0] = (1.0 - eps_) * x[0]; }
  double W(std::span<const double> x, std::span<const double> y) const override {
    const double r = x[0] - y[0];
    return eps_ * (r * r - 1.0) / 2.0;
  }
  void grad1_W(std::span<const double> x, std::span<const double> y, std::span<double> out) const override {
    out[0] = eps_ * (x[0] - y[0]);
  }
  void interaction_sums(std::span<const double> q, std::size_t n, std::span<double> out) const override {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += q[j];
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = eps_ * (dn * q[i] - sum);
  }

 private:
  double eps_;
};

class MultiwellTerms final : public ModelTerms {
 public:
  MultiwellTerms(double a, std::size_t dim, bool interaction) : a_(a), dim_(dim), interaction_(interaction) {}

  std::size_t dim() const override { return dim_; }

  double V(std::span<const double> x) const override {
    const double r2 = norm2(x);
    return 0.5 * r2 + std::exp(-0.5 * a_ * r2);
  }
  void grad_V(std::span<const double> x, std::span<double> out) const override {
    const double scale = 1.0 - a_ * std::exp(-0.5 * a_ * norm2(x));
    for (std::size_t k = 0; k < dim_; ++k) out[k] = scale * x[k];
  }
  double W(std::span<const double> x, std::span<const double> y) const override {
    if (!interaction_) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
    return 0.5 * s;
  }
  void grad1_W(std::span<const double> x, std::span<const double> y, std::span<double> out) const override {
    for (std::size_t k = 0; k < dim_; ++k) out[k] = interaction_ ? x[k] - y[k] : 0.0;
  }
  void interaction_sums(std::span<const double> q, std::size_t n, std::span<double> out) const override {
    if (!interaction_) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    std::vector<double> sum(dim_, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < dim_; ++k) sum[k] += q[j * dim_ + k];
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < dim_; ++k) out[i * dim_ + k] = dn * q[i * dim_ + k] - sum[k];
  }

 private:
  static double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }

  double a_;
  std::size_t dim_;
  bool interaction_;
};

}  // namespace

MeanFieldModel gaussian_model(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw InvalidModel("gaussian model needs 0 <= eps < 1, got " + std::to_string(epsilon));
  auto constants = AssumptionConstants::make(1.0 - epsilon, 1.0, 1.0, epsilon, 0.0, 0.0);
  MeanFieldModel model("gaussian", std::make_shared<GaussianTerms>(epsilon), 1.0, constants);
  model.gaussian_epsilon_ = epsilon;
  return model;
}

MeanFieldModel multiwell_model(double a, std::size_t dim, double epsilon, bool interaction) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidModel("multiwell model needs a >= 0");
  if (dim == 0) throw InvalidModel("multiwell model needs dim >= 1");
  const double R = 4.0 * std::sqrt(a / std::numbers::e);
  auto constants = AssumptionConstants::make(0.25, 1.0 + a, 2.0, interaction ? 1.0 : 0.0, R, 0.0);
  return MeanFieldModel("multiwell", std::make_shared<MultiwellTerms>(a, dim, interaction),
                        interaction ? epsilon : 0.0, constants);
}

// ---------------------------------------------------------------------------
// Shallow network

void ShallowNetDataset::validate() const {
  if (outputs.empty()) throw InvalidModel("shallow-net dataset is empty");
  if (inputs.size() != outputs.size()) throw InvalidModel("shallow-net dataset has mismatched input/output counts");
  const std::size_t dz = inputs.front().size();
  if (dz == 0) throw InvalidModel("shallow-net inputs need at least one feature");
  for (std::size_t m = 0; m < inputs.size(); ++m) {
    if (inputs[m].size() != dz) throw InvalidModel("shallow-net row " + std::to_string(m) + " has wrong dimension");
    if (!std::isfinite(outputs[m])) throw InvalidModel("shallow-net row " + std::to_string(m) + " is not finite");
    for (double v : inputs[m])
      if (!std::isfinite(v)) throw InvalidModel("shallow-net row " + std::to_string(m) + " is not finite");
  }
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view field, std::size_t line_no) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw InvalidModel("line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) + "' as a real");
  return value;
}

}  // namespace

ShallowNetDataset read_shallow_net_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidModel("cannot open dataset '" + path + "'");
  ShallowNetDataset data;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split_commas(view);
    if (columns == 0) {
      if (fields.size() < 2 || trim(fields[0]) != "y")
        throw InvalidModel("dataset header must start with 'y' and list at least one z column");
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns)
      throw InvalidModel("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " fields");
    data.outputs.push_back(parse_real(fields[0], line_no));
    std::vector<double> z;
    z.reserve(columns - 1);
    for (std::size_t c = 1; c < columns; ++c) z.push_back(parse_real(fields[c], line_no));
    data.inputs.push_back(std::move(z));
  }
  data.validate();
  return data;
}

namespace {

class ShallowNetTerms final : public ModelTerms {
 public:
  explicit ShallowNetTerms(ShallowNetDataset data) : data_(std::move(data)), dz_(data_.input_dim()) {}

  std::size_t dim() const override { return dz_ + 1; }

  double V(std::span<const double> x) const override {
    check(x);
    double s = 0.0;
    for (std::size_t m = 0; m < data_.count(); ++m) s += data_.outputs[m] * phi(x, m);
    return 0.5 * norm2(x) + 2.0 * s / count();
  }

  void grad_V(std::span<const double> x, std::span<double> out) const override {
    check(x);
    std::vector<double> g(dim());
    std::copy(x.begin(), x.end(), out.begin());
    const double scale = 2.0 / count();
    for (std::size_t m = 0; m < data_.count(); ++m) {
      grad_phi(x, m, g);
      for (std::size_t k = 0; k < dim(); ++k) out[k] += scale * data_.outputs[m] * g[k];
    }
  }

  double W(std::span<const double> x, std::span<const double> y) const override {
    check(x);
    check(y);
    double s = 0.0;
    for (std::size_t m = 0; m < data_.count(); ++m) s += phi(x, m) * phi(y, m);
    return 2.0 * s / count();
  }

  void grad1_W(std::span<const double> x, std::span<const double> y, std::span<double> out) const override {
    check(x);
    check(y);
    std::vector<double> g(dim());
    std::fill(out.begin(), out.end(), 0.0);
    const double scale = 2.0 / count();
    for (std::size_t m = 0; m < data_.count(); ++m) {
      grad_phi(x, m, g);
      const double w = scale * phi(y, m);
      for (std::size_t k = 0; k < dim(); ++k) out[k] += w * g[k];
    }
  }

  void interaction_sums(std::span<const double> q, std::size_t n, std::span<double> out) const override {
    const std::size_t d = dim();
    const std::size_t M = data_.count();
    std::vector<double> phi_sum(M, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < M; ++m) phi_sum[m] += phi(q.subspan(j * d, d), m);
    std::vector<double> g(d);
    const double scale = 2.0 / count();
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = q.subspan(i * d, d);
      for (std::size_t m = 0; m < M; ++m) {
        grad_phi(xi, m, g);
        for (std::size_t k = 0; k < d; ++k) out[i * d + k] += scale * phi_sum[m] * g[k];
      }
    }
  }

 private:
  static double sigmoid(double r) { return 1.0 / (1.0 + std::exp(-r)); }
  static double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }

  double count() const { return static_cast<double>(data_.count()); }

  void check(std::span<const double> x) const {
    if (x.size() != dim())
      throw InvalidModel("shallow-net parameter has dimension " + std::to_string(x.size()) + ", expected " +
                         std::to_string(dim()));
  }

  double activation_arg(std::span<const double> x, std::size_t m) const {
    double s = 0.0;
    const auto& z = data_.inputs[m];
    for (std::size_t k = 0; k < dz_; ++k) s += x[k + 1] * z[k];
    return s;
  }

  double phi(std::span<const double> x, std::size_t m) const { return x[0] * sigmoid(activation_arg(x, m)); }

  // grad_x phi = (sigma(alpha.z), beta sigma'(alpha.z) z)
  void grad_phi(std::span<const double> x, std::size_t m, std::span<double> out) const {
    const double s = sigmoid(activation_arg(x, m));
    out[0] = s;
    const double w = x[0] * s * (1.0 - s);
    const auto& z = data_.inputs[m];
    for (std::size_t k = 0; k < dz_; ++k) out[k + 1] = w * z[k];
  }

  ShallowNetDataset data_;
  std::size_t dz_;
};

// Spectral norm of the central-difference Jacobian of g at x.
template <typename Grad>
double jacobian_norm(const std::vector<double>& x, double step, Grad&& grad) {
  const std::size_t n = x.size();
  std::vector<double> xp = x;
  std::vector<std::vector<double>> cols(n);
  for (std::size_t k = 0; k < n; ++k) {
    xp[k] = x[k] + step;
    const auto up = grad(xp);
    xp[k] = x[k] - step;
    const auto down = grad(xp);
    xp[k] = x[k];
    cols[k].resize(up.size());
    for (std::size_t r = 0; r < up.size(); ++r) cols[k][r] = (up[r] - down[r]) / (2.0 * step);
  }
  // power iteration on J^T J
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n))), w(n);
  const std::size_t m = cols.front().size();
  std::vector<double> jv(m);
  double sigma2 = 0.0;
  for (int it = 0; it < 60; ++it) {
    std::fill(jv.begin(), jv.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t r = 0; r < m; ++r) jv[r] += cols[k][r] * v[k];
    double norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      w[k] = 0.0;
      for (std::size_t r = 0; r < m; ++r) w[k] += cols[k][r] * jv[r];
      norm += w[k] * w[k];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    sigma2 = norm;
    for (std::size_t k = 0; k < n; ++k) v[k] = w[k] / norm;
  }
  return std::sqrt(sigma2);
}

// Lipschitz estimate of g on a box: the largest of |g(x) - g(y)| / |x - y|
// over random pairs and of the Jacobian norm at random points, followed by a
// local random search around the best point.
template <typename Grad>
double probe_lipschitz(std::size_t dim, std::size_t pairs, double box, RngStream rng, Grad&& grad) {
  std::vector<double> x(dim), y(dim), gx, gy, best_x(dim);
  const double step = 1e-5 * box;
  const auto clamp = [box](double v) { return std::clamp(v, -box, box); };
  double best = 0.0, best_local = -1.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    for (auto& v : x) v = box * (2.0 * rng.uniform() - 1.0);
    if (p % 2 == 1) {
      const double local = jacobian_norm(x, step, grad);
      if (local > best_local) best_local = local, best_x = x;
      continue;
    }
    for (auto& v : y) v = box * (2.0 * rng.uniform() - 1.0);
    gx = grad(x);
    gy = grad(y);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < gx.size(); ++k) num += (gx[k] - gy[k]) * (gx[k] - gy[k]);
    for (std::size_t k = 0; k < dim; ++k) den += (x[k] - y[k]) * (x[k] - y[k]);
    if (den > 0.0) best = std::max(best, std::sqrt(num / den));
  }
  double radius = 0.1 * box;
  for (int it = 0; it < 400; ++it) {
    for (std::size_t k = 0; k < dim; ++k) x[k] = clamp(best_x[k] + radius * (2.0 * rng.uniform() - 1.0));
    const double local = jacobian_norm(x, step, grad);
    if (local > best_local) {
      best_local = local;
      best_x = x;
    } else if (it % 50 == 49) {
      radius *= 0.5;
    }
  }
  return std::max(best, best_local);
}

}  // namespace

MeanFieldModel shallow_net_model(const ShallowNetDataset& data, const ShallowNetOptions& options) {
  data.validate();
  if (!(options.epsilon >= 0.0)) throw InvalidModel("shallow-net interaction strength must be nonnegative");
  if (!(options.probe_box > 0.0) || options.probe_pairs == 0)
    throw InvalidModel("shallow-net probe box and probe count must be positive");
  auto terms = std::make_shared<ShallowNetTerms>(data);
  const std::size_t d = terms->dim();
  const RngStream probe_rng(0x5EEDull, 0);

  const double L1 = probe_lipschitz(d, options.probe_pairs, options.probe_box, probe_rng.derive(1),
                                    [&](const std::vector<double>& x) {
                                      std::vector<double> g(d);
                                      terms->grad_V(x, g);
                                      return g;
                                    });
  // grad_1 W is Lipschitz in the stacked argument (x, y); probing with the
  // Euclidean norm of the stacked difference bounds the sum-norm constant too.
  const double L_tilde = probe_lipschitz(2 * d, options.probe_pairs, options.probe_box, probe_rng.derive(2),
                                         [&](const std::vector<double>& xy) {
                                           std::vector<double> g(d);
                                           terms->grad1_W(std::span(xy).first(d), std::span(xy).subspan(d), g);
                                           return g;
                                         });
  // grad V = x + g(x) with g the data term; with G >= sup |g(x) - g(y)| the
  // identity <dV, dx> - |dx|^2/2 - |dV|^2/2 = -|dg|^2/2 gives K = 1/4, L2 = 2
  // beyond R = sqrt(2) G.
  double g_max = 0.0;
  {
    RngStream rng = probe_rng.derive(3);
    std::vector<double> x(d), g(d);
    for (std::size_t p = 0; p < options.probe_pairs; ++p) {
      for (auto& v : x) v = options.probe_box * (2.0 * rng.uniform() - 1.0);
      terms->grad_V(x, g);
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += (g[k] - x[k]) * (g[k] - x[k]);
      g_max = std::max(g_max, std::sqrt(s));
    }
  }
  const double R = std::sqrt(2.0) * 2.0 * g_max;

  std::vector<double> zero(d, 0.0), w0(d);
  terms->grad1_W(zero, zero, w0);
  double W0 = 0.0;
  for (double v : w0) W0 += v * v;

  auto constants = AssumptionConstants::make(0.25, L1, 2.0, L_tilde, R, std::sqrt(W0), /*certified=*/false);
  return MeanFieldModel("shallow-net", std::move(terms), options.epsilon, constants);
}

}  // namespace mfhmc
