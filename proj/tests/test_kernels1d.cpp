#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "gateways/kernels1d.hpp"
#include "gateways/quadrature.hpp"
#include "gateways/scalar_math.hpp"
#include "gateways/verify.hpp"
#include "support/oracles.hpp"

using namespace gateways;

TEST_CASE("besq density: mixture basics") {
  // from 0 the k = 0 term is all there is
  for (double y : {0.1, 1.0, 4.0})
    CHECK(besq_density({1.0, 1.0}, 0.0, y) == doctest::Approx(std::exp(-y)).epsilon(1e-13));
  // probability kernel
  const DiffusionParams p{1.7, 0.8};
  const double mass = integrate_gamma_envelope(
      [&](double y) { return y > 0 ? besq_density(p, 2.0, y) : 0.0; }, 30.0, 1e-12).value;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(besq_density({1.0, 0.0}, 1.0, 1.0), PointMassError);
}

TEST_CASE("besq density equals the closed Bessel-series form") {
  for (double beta : {0.5, 1.0, 2.5})
    for (double t : {0.3, 1.0})
      for (double x : {0.4, 1.3})
        for (double y : {0.7, 2.9}) {
          const double mix = besq_density({beta, t}, x, y);
          const double bes = oracles::besq_density_bessel(beta, t, x, y);
          CHECK(mix == doctest::Approx(bes).epsilon(1e-11));
        }
}

TEST_CASE("besq detailed balance in the speed measure") {
  for (double beta : {0.5, 2.0})
    for (double t : {0.5, 1.5}) {
      const DiffusionParams p{beta, t};
      const double l = (beta - 1.0) * std::log(1.3) + besq_logdensity(p, 1.3, 2.6);
      const double r = (beta - 1.0) * std::log(2.6) + besq_logdensity(p, 2.6, 1.3);
      CHECK(l == doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("cir density: moments, stationarity, reversibility") {
  const DiffusionParams p{1.4, 0.9};
  // conditional mean beta + (x - beta) e^{-t}; the x^{beta-1} endpoint
  // singularity rules Simpson out, integrate with the tanh-sinh scheme
  const double x0 = 2.3;
  const double mean = integrate_gamma_envelope(
      [&](double y) { return y > 0 ? y * cir_density(p, x0, y) : 0.0; }, 30.0, 1e-12).value;
  CHECK(mean == doctest::Approx(p.beta + (x0 - p.beta) * std::exp(-p.t)).epsilon(1e-9));
  // invariance of the Gamma(beta) law
  for (double y : {0.4, 1.1, 3.0}) {
    const double lhs = integrate_gamma_envelope(
        [&](double x) { return x > 0 ? gamma_pdf(x, p.beta, 1.0) * cir_density(p, x, y) : 0.0; },
        30.0, 1e-12).value;
    CHECK(std::fabs(lhs - gamma_pdf(y, p.beta, 1.0)) < 1e-9);
  }
  // pointwise reversibility
  for (double x : {0.5, 2.0})
    for (double y : {0.9, 3.1}) {
      const double l = gamma_pdf(x, p.beta, 1.0) * cir_density(p, x, y);
      const double r = gamma_pdf(y, p.beta, 1.0) * cir_density(p, y, x);
      CHECK(std::fabs(l - r) < 1e-10);
    }
}

TEST_CASE("generator certificates: mixture and time-change satisfy the PDEs") {
  for (double beta : {0.5, 1.0, 2.5}) {
    const auto q = checks::check_generator_besq(beta, 0.5, 1.0, 1.3);
    CHECK(q.rel_residual <= 1e-5);
    const auto k = checks::check_generator_cir(beta, 0.5, 1.0, 1.3);
    CHECK(k.rel_residual <= 1e-5);
  }
}

TEST_CASE("chapman-kolmogorov for all four kernels") {
  CHECK(checks::check_chapman_kolmogorov_besq(1.0, 0.3, 0.7, 1.0, 1.5).abs_residual <= 1e-8);
  CHECK(checks::check_chapman_kolmogorov_cir(2.5, 0.3, 0.7, 1.0, 1.5).abs_residual <= 1e-8);
  CHECK(checks::check_chapman_kolmogorov_bd_free(1.0, 0.3, 0.7, 1, 3).abs_residual <= 1e-8);
  CHECK(checks::check_chapman_kolmogorov_bd_stat(1.0, 1.0, 0.3, 0.7, 2, 0).abs_residual <= 1e-8);
}

TEST_CASE("besq exact sampler") {
  Rng rng(1234);
  const DiffusionParams p0{2.0, 0.5};
  // x = 0 reduces to a Gamma(beta, t) draw
  std::vector<double> zero_draws;
  for (int i = 0; i < 20000; ++i) zero_draws.push_back(besq_sample(p0, 0.0, rng));
  const double ks0 = oracles::ks_distance(zero_draws, [&](double v) {
    return oracles::simpson([&](double u) { return gamma_pdf(u, p0.beta, p0.t); }, 0.0,
                            std::max(v, 1e-9), 600);
  });
  CHECK(ks0 < oracles::ks_critical_1pct(zero_draws.size()));

  // drift: mean after time t is x + beta t
  const DiffusionParams p1{1.0, 1.0};
  double acc = 0.0, acc2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = besq_sample(p1, 2.0, rng);
    acc += v;
    acc2 += v * v;
  }
  const double mean = acc / n;
  const double sd = std::sqrt((acc2 / n - mean * mean) / n);
  CHECK(std::fabs(mean - 3.0) < 3.0 * sd);
}

TEST_CASE("besq sampler passes a KS test against the numerical CDF") {
  Rng rng(555);
  const DiffusionParams p{2.5, 0.7};
  const double x0 = 1.3;
  std::vector<double> draws;
  const int n = 40000;
  draws.reserve(n);
  for (int i = 0; i < n; ++i) draws.push_back(besq_sample(p, x0, rng));
  // cumulative table by Simpson on a fine grid
  const double hi = 30.0;
  const int grid = 6000;
  std::vector<double> cdf(grid + 1, 0.0);
  for (int i = 1; i <= grid; ++i) {
    const double a = (i - 1) * hi / grid, b = i * hi / grid;
    cdf[static_cast<size_t>(i)] =
        cdf[static_cast<size_t>(i - 1)] +
        oracles::simpson([&](double y) { return y > 0 ? besq_density(p, x0, y) : 0.0; }, a, b, 8);
  }
  const auto cdf_at = [&](double v) {
    if (v <= 0.0) return 0.0;
    if (v >= hi) return 1.0;
    const double pos = v / hi * grid;
    const int i = static_cast<int>(pos);
    const double w = pos - i;
    return cdf[static_cast<size_t>(i)] * (1.0 - w) + cdf[static_cast<size_t>(i + 1)] * w;
  };
  CHECK(oracles::ks_distance(draws, cdf_at) < oracles::ks_critical_1pct(draws.size()));
}

TEST_CASE("cir sampler: stationarity, small-time concentration, drift") {
  Rng rng(99);
  // started at beta with large t the law is ~ Gamma(beta)
  const DiffusionParams plarge{1.5, 12.0};
  std::vector<double> draws;
  for (int i = 0; i < 20000; ++i) draws.push_back(cir_sample(plarge, 1.5, rng));
  const double ks = oracles::ks_distance(draws, [&](double v) {
    return oracles::simpson([&](double u) { return gamma_pdf(u, 1.5, 1.0); }, 0.0,
                            std::max(v, 1e-9), 800);
  });
  CHECK(ks < oracles::ks_critical_1pct(draws.size()));

  const DiffusionParams psmall{1.5, 1e-4};
  double var = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double v = cir_sample(psmall, 1.0, rng) - 1.0;
    var += v * v;
  }
  CHECK(var / 2000 < 1e-3);

  const DiffusionParams p{2.0, 0.8};
  double acc = 0.0, acc2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = cir_sample(p, 0.4, rng);
    acc += v;
    acc2 += v * v;
  }
  const double mean = acc / n;
  const double sd = std::sqrt((acc2 / n - mean * mean) / n);
  CHECK(std::fabs(mean - (2.0 + (0.4 - 2.0) * std::exp(-0.8))) < 3.0 * sd);
}

TEST_CASE("birth-death kernels by uniformization") {
  // t = 0 is the identity
  const ChainParams p0{1.0, 1.0, 0.0, 40};
  CHECK(bd_free_prob(p0, 3, 3).value == 1.0);
  CHECK(bd_free_prob(p0, 3, 4).value == 0.0);

  // mean drift beta
  const ChainParams p{1.3, 1.0, 0.6, 0};
  const BDRates rates{ChainKind::kFree, 1.3, 1.0};
  const int m = choose_truncation(rates, 2, 0.6);
  BirthDeathKernel kern(rates, m);
  const auto& row = kern.row(2, 0.6);
  double mean = 0.0, mass = 0.0;
  for (int y = 0; y < m; ++y) {
    mean += y * row.p[static_cast<size_t>(y)];
    mass += row.p[static_cast<size_t>(y)];
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean == doctest::Approx(2.0 + 1.3 * 0.6).epsilon(1e-11));

  // truncation doubling certificate at the spec point
  const ChainParams p60{1.0, 1.0, 0.1, 60};
  const ChainParams p120{1.0, 1.0, 0.1, 120};
  CHECK(std::fabs(bd_free_prob(p60, 0, 0).value - bd_free_prob(p120, 0, 0).value) < 1e-12);
  CHECK_THROWS_AS(bd_free_prob(ChainParams{1.0, 1.0, 0.5, 10}, 12, 0), std::domain_error);
}

TEST_CASE("stationary chain: drift, reversibility, substochastic rows") {
  const double beta = 2.0, sigma = 0.7, t = 0.9;
  const BDRates rates{ChainKind::kStationary, beta, sigma};
  const int m = choose_truncation(rates, 3, t);
  BirthDeathKernel kern(rates, m);
  const auto& row = kern.row(3, t);
  double mean = 0.0, mass = 0.0;
  for (int y = 0; y < m; ++y) {
    mean += y * row.p[static_cast<size_t>(y)];
    mass += row.p[static_cast<size_t>(y)];
  }
  const double want = beta * sigma + (3.0 - beta * sigma) * std::exp(-t);
  CHECK(mean == doctest::Approx(want).epsilon(1e-10));
  CHECK(mass <= 1.0 + 1e-14);
  CHECK(1.0 - mass <= 2e-13);

  for (long long x : {0, 2})
    for (long long y : {1, 5}) {
      const double lhs = neg_binomial_pmf(x, beta, sigma) * kern.row(x, t).p[static_cast<size_t>(y)];
      const double rhs = neg_binomial_pmf(y, beta, sigma) * kern.row(y, t).p[static_cast<size_t>(x)];
      CHECK(std::fabs(lhs - rhs) < 1e-11);
    }

  // column equals the matching row entries of the transposed evolution
  const auto col = kern.column(4, t);
  for (long long x : {0, 1, 5}) CHECK(col.p[static_cast<size_t>(x)] ==
                                      doctest::Approx(kern.row(x, t).p[4]).epsilon(1e-12));
}

TEST_CASE("bd_sample_path: drift and degenerate horizon") {
  Rng rng(2024);
  const ChainParams p{1.0, 1.0, 0.0, 0};
  double acc = 0.0;
  const int n = 100000;
  const double horizon = 1.0;
  for (int i = 0; i < n; ++i) {
    const JumpPath path = bd_sample_path(p, ChainKind::kFree, 0, horizon, rng);
    acc += static_cast<double>(path.states.back());
  }
  const double mean = acc / n;
  // E n_t = beta t = 1; var roughly 2t + ... use a generous 3 SE with sd ~ sqrt(3)
  CHECK(std::fabs(mean - 1.0) < 3.0 * std::sqrt(3.0 / n));

  const JumpPath still = bd_sample_path(p, ChainKind::kFree, 5, 0.0, rng);
  CHECK(still.states == std::vector<long long>{5});
}

TEST_CASE("stationary chain started from its stationary law stays there (chi-square)") {
  Rng rng(7);
  const double beta = 1.5, sigma = 1.0;
  const ChainParams p{beta, sigma, 0.0, 0};
  // inverse-cdf sampling of eta
  std::vector<double> cum;
  double acc = 0.0;
  for (long long k = 0; acc < 1.0 - 1e-12 && k < 400; ++k) {
    acc += neg_binomial_pmf(k, beta, sigma);
    cum.push_back(acc);
  }
  const int n = 20000;
  std::map<long long, long long> counts;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform() * cum.back();
    const long long start =
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
    const JumpPath path = bd_sample_path(p, ChainKind::kStationary, start, 1.0, rng);
    ++counts[path.states.back()];
  }
  std::map<long long, double> probs;
  for (long long k = 0; k < 60; ++k) probs[k] = neg_binomial_pmf(k, beta, sigma);
  const auto cs = oracles::chi_square(counts, probs, n);
  const double crit = boost::math::quantile(boost::math::chi_squared(cs.dof), 0.99);
  CHECK(cs.statistic < crit);
}
