#include <doctest.h>

#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "gateways/ensembles.hpp"
#include "gateways/quadrature.hpp"
#include "gateways/scalar_math.hpp"
#include "support/oracles.hpp"

using namespace gateways;

TEST_CASE("laguerre partition function and density normalization") {
  // N = 1 is the plain Gamma density
  for (double x : {0.4, 1.7})
    CHECK(laguerre_density({1, 2.3}, ChamberPointC({x})) ==
          doctest::Approx(gamma_pdf(x, 2.3, 1.0)).epsilon(1e-12));

  // Z(2, 1) = 2, certified by brute-force quadrature over the square
  const double z_quad = oracles::simpson_chamber2(
      [](double a, double b) {
        return (b - a) * (b - a) * std::exp(-a - b);
      }, 40.0, 600) * 2.0;  // ordered region doubled = full square
  CHECK(laguerre_partition(2, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(z_quad == doctest::Approx(laguerre_partition(2, 1.0)).epsilon(1e-6));

  // the ordered-chamber density integrates to 1
  const EnsembleParams p{2, 1.5};
  const QuadResult mass = integrate_chamber2(
      [&](double a, double b) {
        return (b > a && a > 0.0) ? laguerre_density(p, ChamberPointC({a, b})) : 0.0;
      },
      25.0, 1e-9);
  CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("exact Wishart sampler: 1x1 exponential law and trace mean") {
  Rng rng(101);
  // N = 1, beta = 1: exponential(1)
  std::vector<double> draws;
  for (int i = 0; i < 30000; ++i) draws.push_back(laguerre_sample({1, 1.0}, rng)[0]);
  const double ks = oracles::ks_distance(draws, [](double v) { return -std::expm1(-v); });
  CHECK(ks < oracles::ks_critical_1pct(draws.size()));

  // N = 2, beta = 2: E[x1 + x2] = N (N + beta - 1) = 6
  double acc = 0.0, acc2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const ChamberPointC x = laguerre_sample({2, 2.0}, rng);
    const double s = x[0] + x[1];
    acc += s;
    acc2 += s * s;
  }
  const double mean = acc / n;
  const double sd = std::sqrt((acc2 / n - mean * mean) / n);
  CHECK(std::fabs(mean - 6.0) < 3.0 * sd);

  CHECK_THROWS_AS(laguerre_sample({2, 1.5}, rng), std::domain_error);
}

TEST_CASE("MCMC sampler matches quadrature moments at non-integer beta") {
  const EnsembleParams p{2, 1.5};
  Rng rng(77);
  LaguerreMcmcSampler mcmc(p, rng, {20000, 10, 0.35});
  const int n = 4000;
  const int batches = 20;
  std::vector<double> batch_mean(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    for (int i = 0; i < n / batches; ++i) {
      const ChamberPointC x = mcmc.sample();
      batch_mean[static_cast<size_t>(b)] += x[0] + x[1];
    }
    batch_mean[static_cast<size_t>(b)] /= n / batches;
  }
  double m = 0.0;
  for (double v : batch_mean) m += v;
  m /= batches;
  double se = 0.0;
  for (double v : batch_mean) se += (v - m) * (v - m);
  se = std::sqrt(se / (batches - 1.0) / batches);

  const QuadResult want = integrate_chamber2(
      [&](double a, double b) {
        return (b > a && a > 0.0) ? (a + b) * laguerre_density(p, ChamberPointC({a, b})) : 0.0;
      },
      25.0, 1e-9);
  CHECK(std::fabs(m - want.value) < 3.5 * se);
  CHECK(mcmc.acceptance_rate() > 0.1);
}

TEST_CASE("meixner pmf: N = 1 reduction and certified normalization") {
  const EnsembleParams p1{1, 1.3, 0.8};
  for (long long y : {0, 3, 9})
    CHECK(meixner_pmf(p1, ChamberPointD({y})) ==
          doctest::Approx(neg_binomial_pmf(y, 1.3, 0.8)).epsilon(1e-11));

  const EnsembleParams p2{2, 1.0, 1.0};
  double acc = 0.0;
  for_each_chamber_point(2, 79, [&](const std::vector<long long>& yv) {
    acc += meixner_pmf(p2, ChamberPointD(yv));
  });
  CHECK(std::fabs(acc - 1.0) < 1e-10);
}

TEST_CASE("meixner sampler: N = 1 equals the negative binomial (classical mixture)") {
  Rng rng(55);
  const EnsembleParams p{1, 2.0, 0.7};
  const int n = 30000;
  std::map<long long, long long> counts;
  for (int i = 0; i < n; ++i) ++counts[meixner_sample(p, rng)[0]];
  std::map<long long, double> probs;
  for (long long k = 0; k < 80; ++k) probs[k] = neg_binomial_pmf(k, 2.0, 0.7);
  const auto cs = oracles::chi_square(counts, probs, n);
  CHECK(cs.statistic < boost::math::quantile(boost::math::chi_squared(cs.dof), 0.99));
}

TEST_CASE("meixner sampler matches the pmf at N = 2 (chi-square)") {
  Rng rng(56);
  const EnsembleParams p{2, 1.0, 1.0};
  const int n = 30000;
  std::map<std::pair<long long, long long>, long long> counts;
  for (int i = 0; i < n; ++i) {
    const ChamberPointD y = meixner_sample(p, rng);
    ++counts[{y[0], y[1]}];
  }
  std::map<std::pair<long long, long long>, double> probs;
  for_each_chamber_point(2, 60, [&](const std::vector<long long>& yv) {
    probs[{yv[0], yv[1]}] = meixner_pmf(p, ChamberPointD(yv));
  });
  const auto cs = oracles::chi_square(counts, probs, n);
  CHECK(cs.statistic < boost::math::quantile(boost::math::chi_squared(cs.dof), 0.99));
}

TEST_CASE("meixner sampler degenerates to the minimal configuration as sigma -> 0") {
  Rng rng(57);
  const EnsembleParams p{2, 1.0, 0.01};
  int minimal = 0;
  const int n = 300;
  for (int i = 0; i < n; ++i) {
    const ChamberPointD y = meixner_sample(p, rng);
    if (y.coords() == std::vector<long long>{0, 1}) ++minimal;
  }
  CHECK(minimal > n * 0.9);
}

TEST_CASE("wishart marginal of the largest eigenvalue matches quadrature (3 SE per bin)") {
  Rng rng(747);
  const EnsembleParams p{2, 2.0};
  const int n = 40000;
  std::vector<double> top;
  top.reserve(n);
  for (int i = 0; i < n; ++i) top.push_back(laguerre_sample(p, rng)[1]);
  // marginal density of x2 by 1D quadrature of the joint over x1 < x2
  const auto marginal = [&](double b) {
    return oracles::simpson(
        [&](double a) {
          return (a > 0.0 && a < b) ? laguerre_density(p, ChamberPointC({std::min(a, b), std::max(a, b)})) : 0.0;
        },
        0.0, b, 400);
  };
  const std::vector<double> edges{0.5, 2.0, 3.5, 5.0, 7.0, 9.5, 13.0};
  std::vector<double> expected;
  for (size_t i = 0; i + 1 < edges.size(); ++i)
    expected.push_back(oracles::simpson(marginal, edges[i], edges[i + 1], 200));
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    long long obs = 0;
    for (double v : top) obs += (v >= edges[i] && v < edges[i + 1]) ? 1 : 0;
    const double pe = expected[i];
    const double se = std::sqrt(pe * (1.0 - pe) * n);
    CHECK(std::fabs(static_cast<double>(obs) - pe * n) < 3.5 * se);
  }
}
