#pragma once

#include <memory>

#include "gateways/rng.hpp"
#include "gateways/weyl.hpp"

namespace gateways {

struct EnsembleParams {
  int N;
  double beta;
  double sigma = 1.0;  // Meixner only
};

// Partition function Z(N, beta) = prod_{j=1}^{N} Gamma(j+1) Gamma(beta+j-1) / Gamma(beta)^N
// of Delta(x)^2 prod_i nu_beta(x_i) over the unordered orthant. The ordered-chamber
// density below therefore carries N!/Z.
double laguerre_log_partition(int N, double beta);
double laguerre_partition(int N, double beta);

// log density of the eigenvalue ensemble on the ordered chamber:
// (N!/Z) Delta(x)^2 prod_i x_i^{beta-1} e^{-x_i} / Gamma(beta). -inf on the boundary.
double laguerre_logdensity(const EnsembleParams& p, const ChamberPointC& x);
double laguerre_density(const EnsembleParams& p, const ChamberPointC& x);

// Exact draw for integer beta: ordered spectrum of G G^* with G an
// N x (N + beta - 1) matrix of independent standard complex Gaussians.
ChamberPointC laguerre_sample(const EnsembleParams& p, Rng& rng);

struct McmcOptions {
  int burn_in = 10000;
  int thinning = 10;
  double step = 0.35;  // proposal scale multiplying sqrt(x_i)
};

// Random-walk Metropolis-Hastings inside the ordered chamber for any
// beta > 0; proposals are per-coordinate normals scaled by sqrt(x_i).
class LaguerreMcmcSampler {
 public:
  LaguerreMcmcSampler(const EnsembleParams& p, Rng rng, McmcOptions opts = {});
  ChamberPointC sample();  // next thinned state
  double acceptance_rate() const;

 private:
  void step_once();
  EnsembleParams p_;
  Rng rng_;
  McmcOptions opts_;
  std::vector<double> state_;
  double log_target_;
  long long proposed_ = 0, accepted_ = 0;
};

// Meixner ensemble pmf with the normalization computed once per
// (N, beta, sigma) by truncated summation with a certified tail bound.
class MeixnerPmf {
 public:
  explicit MeixnerPmf(const EnsembleParams& p);

  double logpmf(const ChamberPointD& y) const;
  double pmf(const ChamberPointD& y) const;
  double log_normalization() const { return log_z_; }
  double tail_bound() const { return tail_bound_; }
  long long support_cap() const { return cap_; }  // certified enumeration cap

 private:
  EnsembleParams p_;
  double log_z_ = 0.0;
  double tail_bound_ = 0.0;
  long long cap_ = 0;
};

// Process-wide write-once cache of MeixnerPmf per (N, beta, sigma), plus
// convenience wrappers over it.
const MeixnerPmf& meixner_cached(const EnsembleParams& p);
double meixner_logpmf(const EnsembleParams& p, const ChamberPointD& y);
double meixner_pmf(const EnsembleParams& p, const ChamberPointD& y);

// Exact Meixner draw through the pushforward: x from the Laguerre ensemble
// (integer beta), then y from the scaled continuous -> discrete link at x.
ChamberPointD meixner_sample(const EnsembleParams& p, Rng& rng);

}  // namespace gateways
