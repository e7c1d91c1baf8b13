#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mfhmc {

/// Constants of the standing assumptions on the confinement V and interaction W.
///
/// L = max(L1, L2) and C_hat = (2L + K) R_conv^2 are derived; use make() so they
/// stay consistent.
struct AssumptionConstants {
  double K = 0.0;        ///< strong co-coercivity constant outside the ball of radius R_conv
  double L1 = 0.0;       ///< gradient Lipschitz constant of V
  double L2 = 0.0;       ///< co-coercivity constant
  double L_tilde = 0.0;  ///< gradient Lipschitz constant of W
  double R_conv = 0.0;   ///< radius beyond which co-coercivity holds
  double W0 = 0.0;       ///< |grad_1 W(0, 0)|
  double L = 0.0;
  double C_hat = 0.0;
  /// False when the values are numerical estimates rather than proven bounds.
  bool certified = true;

  static AssumptionConstants make(double K, double L1, double L2, double L_tilde, double R_conv, double W0,
                                  bool certified = true);
};

/// The functions V, W and their gradients for one model family.
///
/// Points are spans of length dim(). Implementations must be pure and
/// thread-safe; W must be symmetric.
class ModelTerms {
 public:
  virtual ~ModelTerms() = default;

  virtual std::size_t dim() const = 0;
  virtual double V(std::span<const double> x) const = 0;
  virtual void grad_V(std::span<const double> x, std::span<double> out) const = 0;
  virtual double W(std::span<const double> x, std::span<const double> y) const = 0;
  virtual void grad1_W(std::span<const double> x, std::span<const double> y, std::span<double> out) const = 0;

  /// out[i] = sum_j grad_1 W(x^i, x^j) for every particle i, with q laid out as
  /// N consecutive blocks of dim(). The default is the O(N^2 d) pairwise sum
  /// with j ascending; models with separable interactions override it.
  virtual void interaction_sums(std::span<const double> q, std::size_t n_particles, std::span<double> out) const;
};

/// A mean-field model U(x) = sum_i V(x^i) + eps/(2N) sum_{i,j} W(x^i, x^j).
///
/// Cheap to copy; the terms are shared and immutable.
class MeanFieldModel {
 public:
  MeanFieldModel(std::string name, std::shared_ptr<const ModelTerms> terms, double interaction_strength,
                 AssumptionConstants constants);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return terms_->dim(); }
  /// eps multiplying the interaction in U; independent of any eps baked into W.
  double interaction_strength() const { return strength_; }
  const AssumptionConstants& constants() const { return constants_; }
  const ModelTerms& terms() const { return *terms_; }

  /// Interaction parameter of the Gaussian verification model, when this is one.
  const std::optional<double>& gaussian_epsilon() const { return gaussian_epsilon_; }

  /// Copy with a different interaction strength. The Gaussian marker is
  /// dropped unless the strength is unchanged, since the closed-form flow no
  /// longer applies.
  MeanFieldModel with_interaction_strength(double strength) const;

  double V(std::span<const double> x) const { return terms_->V(x); }
  double W(std::span<const double> x, std::span<const double> y) const { return terms_->W(x, y); }
  std::vector<double> grad_V(std::span<const double> x) const;
  std::vector<double> grad1_W(std::span<const double> x, std::span<const double> y) const;

  /// grad_i U(q) for a single particle (zero-based index).
  std::vector<double> mean_field_grad(std::span<const double> q, std::size_t i) const;

  /// grad U(q) for all particles into `out` (same layout as q).
  void mean_field_grad_all(std::span<const double> q, std::span<double> out) const;

  /// U(q) itself; O(N^2) and meant for diagnostics.
  double potential(std::span<const double> q) const;

  std::size_t particle_count(std::size_t flat_size) const;

 private:
  friend MeanFieldModel gaussian_model(double epsilon);

  std::string name_;
  std::shared_ptr<const ModelTerms> terms_;
  double strength_;
  AssumptionConstants constants_;
  std::optional<double> gaussian_epsilon_;
};

/// V(x) = x^2 (1-eps)/2, W(x,y) = eps((x-y)^2 - 1)/2 in d = 1 with unit
/// interaction strength, so the particle force is -q^i + (eps/N) sum_j q^j and
/// the nonlinear target is N(0, 1).
MeanFieldModel gaussian_model(double epsilon);

/// V(x) = |x|^2/2 + exp(-(a/2)|x|^2) in dimension `dim`. With `interaction`
/// set, W(x,y) = |x-y|^2/2 scaled by `epsilon`; otherwise W = 0.
MeanFieldModel multiwell_model(double a, std::size_t dim, double epsilon, bool interaction);

struct ShallowNetDataset {
  std::vector<std::vector<double>> inputs;  ///< z_m, each of dimension d-1
  std::vector<double> outputs;              ///< y_m

  std::size_t count() const { return outputs.size(); }
  std::size_t input_dim() const { return inputs.empty() ? 0 : inputs.front().size(); }
  /// Throws InvalidModel on empty, ragged or non-finite data.
  void validate() const;
};

/// Reads the `y,z1,...,z{d-1}` CSV format (header required, `#` comments skipped).
ShallowNetDataset read_shallow_net_csv(const std::string& path);

enum class Activation { sigmoid };

struct ShallowNetOptions {
  Activation activation = Activation::sigmoid;
  double epsilon = 1.0;
  /// Constants are estimated on [-probe_box, probe_box]^d.
  double probe_box = 3.0;
  std::size_t probe_pairs = 10000;
};

/// Mean-field model of a one-hidden-layer network with parameters x = (beta, alpha):
/// V(x) = |x|^2/2 + (2/M) sum_m y_m phi(x, z_m),
/// W(x, x') = (2/M) sum_m phi(x, z_m) phi(x', z_m), phi(x, z) = beta sigma(alpha . z).
/// Assumption constants are numerical estimates (certified = false).
MeanFieldModel shallow_net_model(const ShallowNetDataset& data, const ShallowNetOptions& options = {});

}  // namespace mfhmc
