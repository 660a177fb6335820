#include <doctest.h>

#include <cmath>

#include "gateways/scalar_math.hpp"
#include "support/oracles.hpp"

using namespace gateways;

TEST_CASE("log_gamma matches known values and the factorial oracle") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
  CHECK(log_gamma(11.0) == doctest::Approx(oracles::log_factorial(10)).epsilon(1e-13));
  CHECK(std::exp(log_gamma(4.0)) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("poisson_logpmf") {
  CHECK(poisson_logpmf(0, 2.7) == doctest::Approx(-2.7).epsilon(1e-14));
  CHECK(poisson_logpmf(1, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  // ln(2^3 e^{-2} / 3!) computed directly
  CHECK(poisson_logpmf(3, 2.0) ==
        doctest::Approx(std::log(8.0 * std::exp(-2.0) / 6.0)).epsilon(1e-13));
  CHECK(poisson_logpmf(0, 0.0) == 0.0);
  CHECK(poisson_logpmf(2, 0.0) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(poisson_logpmf(-1, 1.0), std::domain_error);

  double total = 0.0;
  for (long long k = 0; k <= 80; ++k) total += poisson_pmf(k, 5.5);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("negative binomial weight") {
  CHECK(neg_binomial_pmf(0, 2.0, 0.7) == doctest::Approx(std::pow(1.7, -2.0)).epsilon(1e-13));
  CHECK(neg_binomial_pmf(1, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-13));
  double total = 0.0;
  for (long long n = 0; n <= 200; ++n) total += neg_binomial_pmf(n, 2.0, 0.5);
  CHECK(std::fabs(total - 1.0) < 1e-12);
  CHECK(neg_binomial_pmf(-3, 1.0, 1.0) == 0.0);
}

TEST_CASE("stirling2 against enumeration and the alternating-sum oracle") {
  for (int n : {1, 2, 5, 9, 30}) CHECK(static_cast<double>(stirling2(n, n)) == 1.0);
  CHECK(static_cast<long long>(stirling2(3, 2)) == oracles::count_set_partitions(3, 2));
  for (int n = 1; n <= 7; ++n)
    for (int k = 0; k <= n; ++k)
      CHECK(static_cast<long long>(stirling2(n, k)) == oracles::count_set_partitions(n, k));
  for (int n : {1, 4, 12}) CHECK(static_cast<double>(stirling2(n, 0)) == 0.0);
  CHECK(static_cast<double>(stirling2(5, 7)) == 0.0);
  CHECK_THROWS_AS(stirling2(31, 4), std::domain_error);

  // alternating-sum formula in exact wide integers, n <= 20
  for (int n : {10, 16, 20})
    for (int k : {1, 3, n / 2, n}) {
      __int128 acc = 0;
      __int128 binom = 1;  // C(k, j) built incrementally
      for (int j = 0; j <= k; ++j) {
        __int128 p = 1;
        for (int e = 0; e < n; ++e) p *= j;
        acc += ((k - j) % 2 ? -1 : 1) * binom * p;
        binom = binom * (k - j) / (j + 1);
      }
      __int128 kfact = 1;
      for (int j = 2; j <= k; ++j) kfact *= j;
      CHECK(stirling2(n, k) == static_cast<BigCount>(acc / kfact));
    }
}

TEST_CASE("touchard polynomials are Poisson moments") {
  CHECK(touchard(0, 3.3) == 1.0);
  for (double z : {0.2, 1.0, 4.0})
    CHECK(touchard(2, z) == doctest::Approx(z + z * z).epsilon(1e-12));
  CHECK(touchard(3, 5.0) == doctest::Approx(205.0).epsilon(1e-12));
  for (int n = 0; n <= 12; ++n)
    for (double z : {0.5, 1.0, 3.0}) {
      const double mom = oracles::poisson_moment(n, z);
      CHECK(std::fabs(touchard(n, z) - mom) <= 1e-9 * std::max(1.0, std::fabs(mom)));
    }
}

TEST_CASE("gamma_moment_poly is the Gamma moment") {
  CHECK(gamma_moment_poly(0, 9.0, 1.0) == 1.0);
  CHECK(gamma_moment_poly(1, 2.0, 1.0) == doctest::Approx(3.0));
  CHECK(gamma_moment_poly(3, 0.0, 2.0) == doctest::Approx(24.0));
  // quadrature oracle for k <= 6; x = u^2 removes the x^{shape-1} endpoint
  // singularity for shape < 1
  for (int k = 0; k <= 6; ++k)
    for (double z : {0.0, 1.5})
      for (double beta : {0.5, 2.0}) {
        const double shape = z + beta;
        const double mom = oracles::simpson(
            [&](double u) {
              const double x = u * u;
              if (x <= 0.0) {
                // limit of 2 u^{2k + 2 shape - 1} / Gamma(shape) at u = 0
                const double expo = 2.0 * k + 2.0 * shape - 1.0;
                return expo > 0.0 ? 0.0 : 2.0 / std::tgamma(shape);
              }
              return 2.0 * u * std::pow(x, k) *
                     std::exp((shape - 1.0) * std::log(x) - x - std::lgamma(shape));
            },
            0.0, std::sqrt(130.0), 40000);
        CHECK(gamma_moment_poly(k, z, beta) ==
              doctest::Approx(mom).epsilon(1e-9).scale(std::max(1.0, mom)));
      }
}

TEST_CASE("gamma pdf in log domain matches direct evaluation on small inputs") {
  for (double y : {0.3, 1.0, 4.2})
    for (double shape : {0.5, 1.0, 3.7})
      for (double scale : {0.5, 1.0, 2.0}) {
        const double direct = std::pow(y, shape - 1.0) * std::exp(-y / scale) /
                              (std::tgamma(shape) * std::pow(scale, shape));
        CHECK(gamma_pdf(y, shape, scale) == doctest::Approx(direct).epsilon(1e-12));
      }
}
