#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mfhmc {

/// Empirical representation of a probability measure on R^dim.
struct SampleEnsemble {
  std::vector<std::vector<double>> values;
  std::size_t dim = 1;

  SampleEnsemble() = default;
  SampleEnsemble(std::vector<std::vector<double>> values_, std::size_t dim_);
  /// One-dimensional ensemble from scalars.
  static SampleEnsemble scalars(std::span<const double> xs);

  std::size_t count() const { return values.size(); }
  void validate() const;
};

double normal_pdf(double x);
double normal_cdf(double x);

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
  double variance = 0.0;  ///< unbiased sample variance
};

/// Sample mean, its standard error and the unbiased variance.
MeanStderr mean_with_stderr(std::span<const double> xs);

struct MomentSummary {
  std::vector<double> mean;
  std::vector<double> variance;  ///< per coordinate, unbiased
  double second_moment = 0.0;    ///< average of |x|^2
  double second_moment_stderr = 0.0;
};

MomentSummary moments(const SampleEnsemble& samples);

/// Exact empirical W1 in one dimension by matching order statistics. The larger
/// sample is thinned with a fixed stride to the smaller count.
double wasserstein1_1d(std::span<const double> a, std::span<const double> b);
double wasserstein1_1d(const SampleEnsemble& a, const SampleEnsemble& b);

/// 1.06 * sd * n^{-1/5}.
double silverman_bandwidth(std::span<const double> xs);

struct KdeGrid {
  double lo = -4.0;
  double hi = 4.0;
  std::size_t points = 401;
};

struct KdeOptions {
  /// 0 selects Silverman's rule.
  double bandwidth = 0.0;
  KdeGrid grid;
};

/// Gaussian-kernel density estimate on an evenly spaced grid.
std::vector<double> kde_on_grid(std::span<const double> xs, double bandwidth, const KdeGrid& grid);

/// sum |p_hat - phi| dx / sum phi dx over the grid, phi the standard normal density.
double kde_relative_error(std::span<const double> xs, const KdeOptions& options = {});

/// Streaming KDE for long runs: samples are counted in fine bins and the
/// kernel is evaluated at bin centres. Moments use the raw values.
class BinnedKde {
 public:
  explicit BinnedKde(double lo = -12.0, double hi = 12.0, std::size_t bins = 1u << 16);
  void add(double x);
  void merge(const BinnedKde& other);
  std::size_t count() const { return n_; }
  double variance() const;
  double silverman_bandwidth() const;
  std::vector<double> density(double bandwidth, const KdeGrid& grid) const;
  double relative_error(const KdeOptions& options = {}) const;

 private:
  double lo_, hi_, width_ = 0.0;
  std::vector<std::uint64_t> counts_;
  std::size_t n_ = 0;
  double sum_ = 0.0, sum_sq_ = 0.0;
};

/// Kolmogorov-Smirnov distance between the empirical law of xs and `cdf`.
double ks_statistic(std::span<const double> xs, const std::function<double(double)>& cdf);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< root mean square residual
};

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

/// Least-squares fit of log y on log x; needs at least 3 positive points.
LinearFit loglog_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace mfhmc
