// Test-side oracles, deliberately independent of the library's evaluation
// paths: plain Simpson quadrature, brute-force enumerations and series.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace oracles {

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// 2D Simpson over the ordered region a <= x1 <= x2 <= b.
inline double simpson_chamber2(const std::function<double(double, double)>& f, double b,
                               int n = 300) {
  return simpson([&](double x2) {
    return simpson([&](double x1) { return f(x1, x2); }, 0.0, x2, n);
  }, 0.0, b, n);
}

inline double log_factorial(long long n) {
  double acc = 0.0;
  for (long long i = 2; i <= n; ++i) acc += std::log(static_cast<double>(i));
  return acc;
}

// Number of set partitions of {1..n} into exactly k blocks, by direct
// enumeration (n small).
inline long long count_set_partitions(int n, int k) {
  std::vector<int> assign(static_cast<size_t>(n), 0);
  std::function<long long(int, int)> rec = [&](int i, int used) -> long long {
    if (i == n) return used == k ? 1 : 0;
    long long total = 0;
    for (int b = 0; b <= used; ++b) {
      assign[static_cast<size_t>(i)] = b;
      total += rec(i + 1, std::max(used, b + 1));
    }
    return total;
  };
  return rec(0, 0);
}

// n-th moment of Poisson(z) by brute-force summation.
inline double poisson_moment(int n, double z, long long ymax = 400) {
  double acc = 0.0;
  for (long long y = 0; y <= ymax; ++y) {
    const double lp = y * std::log(z) - z - log_factorial(y);
    acc += std::exp(lp) * std::pow(static_cast<double>(y), n);
  }
  return acc;
}

// Modified Bessel I_nu(z) by its power series.
inline double bessel_i_series(double nu, double z, int terms = 200) {
  double acc = 0.0;
  for (int m = 0; m < terms; ++m) {
    const double lt = (2.0 * m + nu) * std::log(z / 2.0) - log_factorial(m) -
                      std::lgamma(m + nu + 1.0);
    acc += std::exp(lt);
  }
  return acc;
}

// Closed Bessel form of the squared-Bessel-type transition density.
inline double besq_density_bessel(double beta, double t, double x, double y) {
  const double nu = beta - 1.0;
  return (1.0 / t) * std::pow(y / x, nu / 2.0) * std::exp(-(x + y) / t) *
         bessel_i_series(nu, 2.0 * std::sqrt(x * y) / t);
}

// All semistandard tableaux of shape lambda with entries in {1..n}, summed
// as monomials in x. Exponential; |lambda| small only.
inline double ssyt_sum(const std::vector<long long>& lambda, const std::vector<double>& x) {
  const int rows = static_cast<int>(lambda.size());
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<int>> t(static_cast<size_t>(rows));
  for (int r = 0; r < rows; ++r) t[static_cast<size_t>(r)].assign(static_cast<size_t>(lambda[static_cast<size_t>(r)]), 0);
  double total = 0.0;
  std::function<void(int, int)> rec = [&](int r, int c) {
    while (r < rows && lambda[static_cast<size_t>(r)] == 0) { ++r; c = 0; }
    if (r == rows) {
      double mono = 1.0;
      for (const auto& row : t)
        for (int v : row) mono *= x[static_cast<size_t>(v - 1)];
      total += mono;
      return;
    }
    const int next_r = (c + 1 < lambda[static_cast<size_t>(r)]) ? r : r + 1;
    const int next_c = (c + 1 < lambda[static_cast<size_t>(r)]) ? c + 1 : 0;
    int lo = 1;
    if (c > 0) lo = std::max(lo, t[static_cast<size_t>(r)][static_cast<size_t>(c - 1)]);       // weakly increasing rows
    if (r > 0 && c < static_cast<int>(t[static_cast<size_t>(r - 1)].size()))
      lo = std::max(lo, t[static_cast<size_t>(r - 1)][static_cast<size_t>(c)] + 1);           // strictly increasing columns
    for (int v = lo; v <= n; ++v) {
      t[static_cast<size_t>(r)][static_cast<size_t>(c)] = v;
      rec(next_r, next_c);
    }
  };
  rec(0, 0);
  return total;
}

// Kolmogorov-Smirnov distance of sorted draws against a CDF.
inline double ks_distance(std::vector<double> draws, const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline double ks_critical_1pct(size_t n) { return 1.62762 / std::sqrt(static_cast<double>(n)); }

// Pearson chi-square statistic over binned counts vs expected probabilities;
// cells with expected count below min_expected are pooled into one.
struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
};

template <typename Key>
ChiSquare chi_square(const std::map<Key, long long>& counts, const std::map<Key, double>& probs,
                     long long n_draws, double min_expected = 10.0) {
  const double n = static_cast<double>(n_draws);
  double stat = 0.0;
  int cells = 0;
  double kept_obs = 0.0, kept_prob = 0.0;
  for (const auto& [key, p] : probs) {
    const double expect = p * n;
    if (expect < min_expected) continue;
    const auto it = counts.find(key);
    const double obs = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    stat += (obs - expect) * (obs - expect) / expect;
    kept_obs += obs;
    kept_prob += p;
    ++cells;
  }
  // pool everything else (small cells and mass outside the enumerated probs)
  const double pooled_exp = (1.0 - kept_prob) * n;
  const double pooled_obs = n - kept_obs;
  if (pooled_exp >= min_expected) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  return {stat, std::max(cells - 1, 1)};
}

}  // namespace oracles
