#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

// Reference values computed by brute force, sharing no code with the library.
namespace negtax::oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

/// Upper tail of F(d1, d2) by integrating the density over [f, inf) after x = f + tan(t).
inline double f_sf(double f, double d1, double d2) {
  const double log_c = 0.5 * d1 * std::log(d1 / d2) - (std::lgamma(d1 / 2) + std::lgamma(d2 / 2) - std::lgamma((d1 + d2) / 2));
  auto density = [&](double x) {
    if (x <= 0) return 0.0;
    return std::exp(log_c + (d1 / 2 - 1) * std::log(x) - (d1 + d2) / 2 * std::log1p(d1 * x / d2));
  };
  auto integrand = [&](double t) {
    if (t >= M_PI / 2) return 0.0;
    double c = std::cos(t);
    return density(f + std::tan(t)) / (c * c);
  };
  return simpson(integrand, 0.0, M_PI / 2, 20000);
}

/// P(range of k standard normals < w).
inline double range_cdf(double w, double k) {
  auto inner = [&](double z) { return normal_pdf(z) * std::pow(normal_cdf(z + w) - normal_cdf(z), k - 1); };
  return k * simpson(inner, -9.0, 9.0, 600);
}

/// Upper tail of the studentized range by integrating over the scaled chi density of s.
inline double studentized_range_sf(double q, double k, double df) {
  const double log_c = 0.5 * df * std::log(df) - std::lgamma(df / 2) - (df / 2 - 1) * std::log(2.0);
  auto g = [&](double s) {
    if (s <= 0) return 0.0;
    return std::exp(log_c + (df - 1) * std::log(s) - df * s * s / 2);
  };
  const double hi = 1.0 + 12.0 / std::sqrt(df) + (df < 5 ? 10.0 : 0.0);
  double cdf = simpson([&](double s) { return g(s) * range_cdf(q * s, k); }, 0.0, hi, 3000);
  return 1.0 - cdf;
}

/// Cohen's kappa from the agreement table with an arbitrary disagreement weight.
inline double kappa(const std::vector<int>& a, const std::vector<int>& b, const std::function<double(int, int)>& w) {
  std::set<int> cats(a.begin(), a.end());
  cats.insert(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  double observed = 0, expected = 0;
  for (std::size_t i = 0; i < a.size(); ++i) observed += w(a[i], b[i]);
  for (int x : cats)
    for (int y : cats) {
      double pa = 0, pb = 0;
      for (int v : a) pa += v == x;
      for (int v : b) pb += v == y;
      expected += w(x, y) * pa * pb / (n * n);
    }
  return 1.0 - (observed / n) / expected;
}

/// One-way ANOVA F from the textbook sums of squares.
inline double anova_f(const std::vector<std::vector<double>>& groups) {
  double total = 0, n = 0;
  for (const auto& g : groups)
    for (double x : g) total += x, n += 1;
  const double grand = total / n;
  double ssb = 0, ssw = 0;
  for (const auto& g : groups) {
    double m = 0;
    for (double x : g) m += x;
    m /= static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) ssw += (x - m) * (x - m);
  }
  const double k = static_cast<double>(groups.size());
  return (ssb / (k - 1)) / (ssw / (n - k));
}

}  // namespace negtax::oracles
