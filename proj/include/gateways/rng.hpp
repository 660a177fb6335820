#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace gateways {

// Deterministic RNG used by every sampler. All variate transforms are
// implemented here (not via std:: distributions) so that a given seed
// produces the same stream on any standard library.
//
// Stream splitting rule: child stream k of a generator created with seed s
// is seeded with splitmix64(s + (k+1) * 0x9E3779B97F4A7C15). This is the
// documented per-path derivation used by the Monte Carlo drivers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t seed() const { return seed_; }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  Rng stream(std::uint64_t k) const {
    return Rng(splitmix64(seed_ + (k + 1) * 0x9E3779B97F4A7C15ULL));
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1), rejecting exact zero.
  double uniform_pos() {
    double u;
    do u = uniform();
    while (u <= 0.0);
    return u;
  }

  // Standard normal via Marsaglia's polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::domain_error("Rng::exponential: rate <= 0");
    return -std::log(uniform_pos()) / rate;
  }

  // Gamma(shape, scale) by Marsaglia-Tsang, with the usual shape < 1 boost.
  double gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw std::domain_error("Rng::gamma: shape and scale must be positive");
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
  }

  // Exact Poisson(mean) by uniform multiplication, chunked so the
  // comparison threshold never underflows.
  long long poisson(double mean) {
    if (!(mean >= 0.0)) throw std::domain_error("Rng::poisson: negative mean");
    long long total = 0;
    while (mean > 400.0) {
      total += poisson_chunk(400.0);
      mean -= 400.0;
    }
    return total + poisson_chunk(mean);
  }

 private:
  long long poisson_chunk(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    long long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform_pos();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t seed_;
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gateways
