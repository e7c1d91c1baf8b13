#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library except through the ModelTerms interface being probed.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace oracle {

/// Central differences of a scalar function of a vector.
inline std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                       std::vector<double> x, double step = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double x0 = x[k];
    const double hk = step * std::max(1.0, std::abs(x0));
    x[k] = x0 + hk;
    const double up = f(x);
    x[k] = x0 - hk;
    const double down = f(x);
    x[k] = x0;
    g[k] = (up - down) / (2.0 * hk);
  }
  return g;
}

/// Nodes and weights of n-point Gauss-Hermite quadrature for the weight exp(-x^2),
/// by Newton iteration on the orthonormal Hermite recursion.
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  std::vector<double> x(n), w(n);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
  }
  return {x, w};
}

/// E[g(Y)] for Y ~ N(0,1) by Gauss-Hermite quadrature.
inline double normal_expectation(const std::function<double(double)>& g, int n = 60) {
  auto [x, w] = gauss_hermite(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += w[i] * g(std::sqrt(2.0) * x[i]);
  return s / std::sqrt(std::numbers::pi);
}

/// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                      int depth = 40) {
  const auto rec = [&](auto&& self, double lo, double hi, double flo, double fmid, double fhi, double whole,
                       double eps, int level) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (level <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
      return left + right + (left + right - whole) / 15.0;
    return self(self, lo, mid, flo, flm, fmid, left, eps / 2, level - 1) +
           self(self, mid, hi, fmid, frm, fhi, right, eps / 2, level - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(rec, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

/// int_0^r exp(-min(R1, s)/T) ds, split at the kink.
inline double metric_f_quadrature(double r, double R1, double T) {
  const auto g = [&](double s) { return std::exp(-std::min(R1, s) / T); };
  if (r <= R1) return simpson(g, 0.0, r);
  return simpson(g, 0.0, R1) + (r - R1) * std::exp(-R1 / T);
}

/// min over permutations sigma of (1/n) sum |a_i - b_sigma(i)|.
inline double w1_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[perm[i]]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(a.size());
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Kolmogorov-Smirnov distance, computed independently of the library.
inline double ks(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

/// Asymptotic KS critical value at alpha = 0.01.
inline double ks_critical(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

/// Inverse of a dense n x n matrix by Gauss-Jordan elimination with partial pivoting.
inline std::vector<double> invert(std::vector<double> a, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(a[c * n + k], a[piv * n + k]);
      std::swap(inv[c * n + k], inv[piv * n + k]);
    }
    const double d = a[c * n + c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c * n + k] /= d;
      inv[c * n + k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r * n + c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r * n + k] -= f * a[c * n + k];
        inv[r * n + k] -= f * inv[c * n + k];
      }
    }
  }
  return inv;
}

}  // namespace oracle
