#pragma once

#include <cstdint>

namespace gateways {

// Natural log of Gamma(z), z > 0. Thin wrapper that enforces the domain.
double log_gamma(double z);

// log of the Poisson(mean) pmf at k. mean == 0 degenerates to the point
// mass at 0 (returns 0 for k == 0 and -inf otherwise).
double poisson_logpmf(long long k, double mean);
double poisson_pmf(long long k, double mean);

// Negative binomial weight eta_{beta,sigma}(n) = sigma^n (1+sigma)^(-n-beta) C(n+beta-1, n).
double neg_binomial_logpmf(long long n, double beta, double sigma);
double neg_binomial_pmf(long long n, double beta, double sigma);

// log pdf of Gamma(shape, scale) at y > 0.
double gamma_logpdf(double y, double shape, double scale);
double gamma_pdf(double y, double shape, double scale);

// Stirling numbers of the second kind, exact for n <= 30. Values near the
// top of that range exceed 64 bits (Bell(30) ~ 8.5e23), hence the wide type.
using BigCount = unsigned __int128;
BigCount stirling2(int n, int k);
double stirling2_d(int n, int k);

// Touchard polynomial T_n(z) = sum_k S(n,k) z^k, the n-th Poisson(z) moment.
double touchard(int n, double z);

// Rising product (z+beta)(z+beta+1)...(z+beta+k-1) = Gamma(k+z+beta)/Gamma(z+beta),
// the k-th moment of Gamma(z+beta, 1); monic of degree k in z.
double gamma_moment_poly(int k, double z, double beta);

}  // namespace gateways
