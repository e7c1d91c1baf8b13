#include "mfhmc/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfhmc/errors.hpp"

namespace mfhmc {

SampleEnsemble::SampleEnsemble(std::vector<std::vector<double>> values_, std::size_t dim_)
    : values(std::move(values_)), dim(dim_) {
  validate();
}

SampleEnsemble SampleEnsemble::scalars(std::span<const double> xs) {
  std::vector<std::vector<double>> values;
  values.reserve(xs.size());
  for (double x : xs) values.push_back({x});
  return SampleEnsemble(std::move(values), 1);
}

void SampleEnsemble::validate() const {
  if (dim == 0) throw ConfigError("ensemble dimension must be positive");
  for (const auto& v : values) {
    if (v.size() != dim) throw ConfigError("ensemble entries must share one dimension");
    for (double x : v)
      if (!std::isfinite(x)) throw ConfigError("ensemble has non-finite entries");
  }
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

MeanStderr mean_with_stderr(std::span<const double> xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.variance = ss / (n - 1.0);
    out.se = std::sqrt(out.variance / n);
  }
  return out;
}

MomentSummary moments(const SampleEnsemble& samples) {
  samples.validate();
  if (samples.count() == 0) throw ConfigError("moments of an empty ensemble");
  const std::size_t d = samples.dim;
  const double n = static_cast<double>(samples.count());
  MomentSummary out;
  out.mean.assign(d, 0.0);
  out.variance.assign(d, 0.0);
  std::vector<double> squares;
  squares.reserve(samples.count());
  for (const auto& v : samples.values) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      out.mean[k] += v[k];
      s += v[k] * v[k];
    }
    squares.push_back(s);
  }
  for (auto& m : out.mean) m /= n;
  if (samples.count() > 1) {
    for (const auto& v : samples.values)
      for (std::size_t k = 0; k < d; ++k) out.variance[k] += (v[k] - out.mean[k]) * (v[k] - out.mean[k]);
    for (auto& s : out.variance) s /= n - 1.0;
  }
  const auto sm = mean_with_stderr(squares);
  out.second_moment = sm.mean;
  out.second_moment_stderr = sm.se;
  return out;
}

namespace {

std::vector<double> stride_subsample(std::span<const double> xs, std::size_t target) {
  std::vector<double> out;
  out.reserve(target);
  // Deterministic evenly spread indices floor(k * n / target).
  for (std::size_t k = 0; k < target; ++k) out.push_back(xs[k * xs.size() / target]);
  return out;
}

}  // namespace

double wasserstein1_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ConfigError("W1 of an empty ensemble");
  std::vector<double> sa, sb;
  if (a.size() > b.size()) {
    sa = stride_subsample(a, b.size());
    sb.assign(b.begin(), b.end());
  } else if (b.size() > a.size()) {
    sa.assign(a.begin(), a.end());
    sb = stride_subsample(b, a.size());
  } else {
    sa.assign(a.begin(), a.end());
    sb.assign(b.begin(), b.end());
  }
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double total = 0.0;
  for (std::size_t k = 0; k < sa.size(); ++k) total += std::abs(sa[k] - sb[k]);
  return total / static_cast<double>(sa.size());
}

double wasserstein1_1d(const SampleEnsemble& a, const SampleEnsemble& b) {
  if (a.dim != 1 || b.dim != 1) throw ConfigError("wasserstein1_1d needs one-dimensional ensembles");
  std::vector<double> xa, xb;
  for (const auto& v : a.values) xa.push_back(v[0]);
  for (const auto& v : b.values) xb.push_back(v[0]);
  return wasserstein1_1d(xa, xb);
}

double silverman_bandwidth(std::span<const double> xs) {
  const auto stats = mean_with_stderr(xs);
  return 1.06 * std::sqrt(stats.variance) * std::pow(static_cast<double>(xs.size()), -0.2);
}

std::vector<double> kde_on_grid(std::span<const double> xs, double bandwidth, const KdeGrid& grid) {
  if (grid.points < 2 || !(grid.hi > grid.lo)) throw ConfigError("KDE grid needs at least two points and hi > lo");
  if (xs.empty()) throw ConfigError("KDE of an empty sample");
  if (!(bandwidth > 0.0)) throw ConfigError("KDE bandwidth must be positive");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double dx = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);
  const double cutoff = 8.0 * bandwidth;  // exp(-32) is below double rounding of the sum
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> density(grid.points);
  for (std::size_t g = 0; g < grid.points; ++g) {
    const double x = grid.lo + static_cast<double>(g) * dx;
    auto first = std::lower_bound(sorted.begin(), sorted.end(), x - cutoff);
    auto last = std::upper_bound(first, sorted.end(), x + cutoff);
    double s = 0.0;
    for (auto it = first; it != last; ++it) {
      const double t = (x - *it) / bandwidth;
      s += std::exp(-0.5 * t * t);
    }
    density[g] = s * norm;
  }
  return density;
}

namespace {

double relative_l1_to_normal(const std::vector<double>& density, const KdeGrid& grid) {
  const double dx = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);
  double diff = 0.0, mass = 0.0;
  for (std::size_t g = 0; g < density.size(); ++g) {
    const double phi = normal_pdf(grid.lo + static_cast<double>(g) * dx);
    diff += std::abs(density[g] - phi) * dx;
    mass += phi * dx;
  }
  return diff / mass;
}

}  // namespace

double kde_relative_error(std::span<const double> xs, const KdeOptions& options) {
  if (xs.size() < 100) throw ConfigError("KDE relative error needs at least 100 samples");
  double bandwidth = options.bandwidth;
  if (bandwidth == 0.0) {
    bandwidth = silverman_bandwidth(xs);
    if (!(bandwidth > 0.0)) throw ConfigError("degenerate sample: zero variance");
  }
  return relative_l1_to_normal(kde_on_grid(xs, bandwidth, options.grid), options.grid);
}

BinnedKde::BinnedKde(double lo, double hi, std::size_t bins) : lo_(lo), hi_(hi), counts_(bins, 0) {
  if (bins == 0 || !(hi > lo)) throw ConfigError("binned KDE needs bins > 0 and hi > lo");
  width_ = (hi - lo) / static_cast<double>(bins);
}

void BinnedKde::add(double x) {
  ++n_;
  sum_ += x;
  sum_sq_ += x * x;
  if (x >= lo_ && x < hi_) {
    const auto b = std::min(counts_.size() - 1, static_cast<std::size_t>((x - lo_) / width_));
    ++counts_[b];
  }
}

void BinnedKde::merge(const BinnedKde& other) {
  if (other.counts_.size() != counts_.size() || other.lo_ != lo_ || other.hi_ != hi_)
    throw ConfigError("cannot merge binned KDEs with different layouts");
  n_ += other.n_;
  sum_ += other.sum_;
  sum_sq_ += other.sum_sq_;
  for (std::size_t b = 0; b < counts_.size(); ++b) counts_[b] += other.counts_[b];
}

double BinnedKde::variance() const {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  const double mean = sum_ / n;
  return std::max(0.0, (sum_sq_ - n * mean * mean) / (n - 1.0));
}

double BinnedKde::silverman_bandwidth() const {
  return 1.06 * std::sqrt(variance()) * std::pow(static_cast<double>(n_), -0.2);
}

std::vector<double> BinnedKde::density(double bandwidth, const KdeGrid& grid) const {
  if (grid.points < 2 || !(grid.hi > grid.lo)) throw ConfigError("KDE grid needs at least two points and hi > lo");
  if (n_ == 0) throw ConfigError("KDE of an empty sample");
  if (!(bandwidth > 0.0)) throw ConfigError("KDE bandwidth must be positive");
  const double dx = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);
  const double cutoff = 8.0 * bandwidth;
  const double norm = 1.0 / (static_cast<double>(n_) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  const auto nb = static_cast<std::ptrdiff_t>(counts_.size());
  std::vector<double> out(grid.points);
  for (std::size_t g = 0; g < grid.points; ++g) {
    const double x = grid.lo + static_cast<double>(g) * dx;
    const auto b0 = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::floor((x - cutoff - lo_) / width_)));
    const auto b1 = std::min<std::ptrdiff_t>(nb - 1, static_cast<std::ptrdiff_t>(std::floor((x + cutoff - lo_) / width_)));
    double s = 0.0;
    for (auto b = b0; b <= b1; ++b) {
      if (counts_[static_cast<std::size_t>(b)] == 0) continue;
      const double t = (x - (lo_ + (static_cast<double>(b) + 0.5) * width_)) / bandwidth;
      s += static_cast<double>(counts_[static_cast<std::size_t>(b)]) * std::exp(-0.5 * t * t);
    }
    out[g] = s * norm;
  }
  return out;
}

double BinnedKde::relative_error(const KdeOptions& options) const {
  if (n_ < 100) throw ConfigError("KDE relative error needs at least 100 samples");
  double bandwidth = options.bandwidth;
  if (bandwidth == 0.0) {
    bandwidth = silverman_bandwidth();
    if (!(bandwidth > 0.0)) throw ConfigError("degenerate sample: zero variance");
  }
  return relative_l1_to_normal(density(bandwidth, options.grid), options.grid);
}

double ks_statistic(std::span<const double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw ConfigError("KS statistic of an empty sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double F = cdf(sorted[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - F, F - static_cast<double>(k) / n});
  }
  return d;
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw ConfigError("linear fit needs matching inputs of size >= 2");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (sxx == 0.0) throw ConfigError("linear fit needs distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

LinearFit loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 3) throw ConfigError("log-log fit needs at least 3 matching points");
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] > 0.0) || !(ys[k] > 0.0)) throw ConfigError("log-log fit needs positive inputs");
    lx.push_back(std::log(xs[k]));
    ly.push_back(std::log(ys[k]));
  }
  return linear_fit(lx, ly);
}

}  // namespace mfhmc
