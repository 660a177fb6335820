#include "gateways/scalar_math.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gateways {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_gamma(double z) {
  if (!(z > 0.0)) throw std::domain_error("log_gamma: requires z > 0");
  return std::lgamma(z);
}

double poisson_logpmf(long long k, double mean) {
  if (k < 0) throw std::domain_error("poisson_logpmf: negative k");
  if (!(mean >= 0.0)) throw std::domain_error("poisson_logpmf: negative mean");
  if (mean == 0.0) return k == 0 ? 0.0 : kNegInf;
  return static_cast<double>(k) * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0);
}

double poisson_pmf(long long k, double mean) { return std::exp(poisson_logpmf(k, mean)); }

double neg_binomial_logpmf(long long n, double beta, double sigma) {
  if (n < 0) return kNegInf;
  if (!(beta > 0.0) || !(sigma > 0.0))
    throw std::domain_error("neg_binomial_logpmf: requires beta > 0, sigma > 0");
  const double nd = static_cast<double>(n);
  return nd * std::log(sigma) - (nd + beta) * std::log1p(sigma) + std::lgamma(nd + beta) -
         std::lgamma(beta) - std::lgamma(nd + 1.0);
}

double neg_binomial_pmf(long long n, double beta, double sigma) {
  return n < 0 ? 0.0 : std::exp(neg_binomial_logpmf(n, beta, sigma));
}

double gamma_logpdf(double y, double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::domain_error("gamma_logpdf: requires shape > 0, scale > 0");
  if (y < 0.0) return kNegInf;
  if (y == 0.0) {
    if (shape < 1.0) return std::numeric_limits<double>::infinity();
    if (shape == 1.0) return -std::log(scale);
    return kNegInf;
  }
  return (shape - 1.0) * std::log(y) - y / scale - std::lgamma(shape) - shape * std::log(scale);
}

double gamma_pdf(double y, double shape, double scale) {
  return std::exp(gamma_logpdf(y, shape, scale));
}

BigCount stirling2(int n, int k) {
  if (n < 0 || k < 0) throw std::domain_error("stirling2: negative argument");
  if (n > 30) throw std::domain_error("stirling2: exact range capped at n <= 30");
  if (k > n) return 0;
  if (n == 0) return k == 0 ? 1 : 0;
  if (k == 0) return 0;
  // Recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1); subtraction-free.
  std::vector<BigCount> row(static_cast<size_t>(k) + 1, 0);
  row[0] = 1;  // S(0,0)
  for (int m = 1; m <= n; ++m) {
    const int top = std::min(m, k);
    for (int j = top; j >= 1; --j)
      row[static_cast<size_t>(j)] =
          static_cast<BigCount>(j) * row[static_cast<size_t>(j)] + row[static_cast<size_t>(j) - 1];
    row[0] = 0;  // S(m,0) = 0 for m >= 1
  }
  return row[static_cast<size_t>(k)];
}

double stirling2_d(int n, int k) {
  if (k > n || k < 0) return 0.0;
  return static_cast<double>(stirling2(n, k));
}

double touchard(int n, double z) {
  if (n < 0 || n > 30) throw std::domain_error("touchard: requires 0 <= n <= 30");
  if (!(z >= 0.0)) throw std::domain_error("touchard: requires z >= 0");
  if (n == 0) return 1.0;
  // Horner over the Stirling row, all coefficients nonnegative.
  double acc = 0.0;
  for (int k = n; k >= 1; --k) acc = acc * z + stirling2_d(n, k);
  return acc * z;
}

double gamma_moment_poly(int k, double z, double beta) {
  if (k < 0 || k > 30) throw std::domain_error("gamma_moment_poly: requires 0 <= k <= 30");
  if (!(beta > 0.0)) throw std::domain_error("gamma_moment_poly: requires beta > 0");
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= z + beta + static_cast<double>(i);
  return p;
}

}  // namespace gateways
