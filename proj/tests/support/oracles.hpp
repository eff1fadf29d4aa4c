#pragma once

// Test-side reference computations, written independently of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

/// Piecewise-linear interpolation, zero outside the tabulated range.
inline double lerp_table(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at < x.front() || at > x.back()) return 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  if (it == x.end()) return y.back();
  const auto i = static_cast<std::size_t>(it - x.begin());
  if (i == 0) return y.front();
  const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

/// Midpoint Riemann sum of int f*w / int w over [lo, hi] with step h.
inline double riemann_weighted_mean(const std::function<double(double)>& f, const std::function<double(double)>& w,
                                    double lo, double hi, double h) {
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / h));
  const double step = (hi - lo) / static_cast<double>(n);
  long double num = 0.0L;
  long double den = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * step;
    const double wx = w(x);
    num += static_cast<long double>(f(x)) * wx;
    den += wx;
  }
  return static_cast<double>(num / den);
}

/// F(d1, d2) density.
inline double f_pdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const double log_b = std::lgamma(d1 / 2) + std::lgamma(d2 / 2) - std::lgamma((d1 + d2) / 2);
  const double log_p = (d1 / 2) * std::log(d1 / d2) + (d1 / 2 - 1) * std::log(x) -
                       ((d1 + d2) / 2) * std::log1p(d1 * x / d2) - log_b;
  return std::exp(log_p);
}

inline double adaptive_simpson(const std::function<double(double)>& g, double a, double b, double fa, double fm,
                               double fb, double whole, double eps, int depth) {
  const double m = (a + b) / 2;
  const double lm = (a + m) / 2;
  const double rm = (m + b) / 2;
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
  return adaptive_simpson(g, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

/// P(F <= f) by integrating the density; x = s^2 removes the d1 = 1 endpoint singularity.
inline double f_cdf_numeric(double f, double d1, double d2) {
  // Limit of the integrand at s = 0: 2 / (sqrt(d2) B(1/2, d2/2)) when d1 = 1, else 0.
  const double at_zero =
      d1 == 1.0 ? 2.0 / std::sqrt(d2) * std::exp(std::lgamma((1 + d2) / 2) - std::lgamma(0.5) - std::lgamma(d2 / 2))
                : 0.0;
  const auto g = [&](double s) { return s == 0.0 ? at_zero : f_pdf(s * s, d1, d2) * 2 * s; };
  const double b = std::sqrt(f);
  const double fa = g(0.0);
  const double fm = g(b / 2);
  const double fb = g(b);
  return adaptive_simpson(g, 0.0, b, fa, fm, fb, b / 6 * (fa + 4 * fm + fb), 1e-14, 60);
}

/// One-way ANOVA table by the textbook formulas.
struct Table {
  double ssb;
  double ssw;
  double f;
};

inline Table anova_table(const std::vector<std::vector<double>>& groups) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& g : groups)
    for (double v : g) {
      total += v;
      ++n;
    }
  const double grand = total / static_cast<double>(n);
  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    double s = 0.0;
    for (double v : g) s += v;
    const double m = s / static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  const double dfb = static_cast<double>(groups.size() - 1);
  const double dfw = static_cast<double>(n - groups.size());
  return {ssb, ssw, (ssb / dfb) / (ssw / dfw)};
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("uasrad_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
