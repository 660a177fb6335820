#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "gateways/rng.hpp"
#include "gateways/weyl.hpp"

namespace gateways {

// --- continuous -> discrete link --------------------------------------------
//
// Markov kernel from the continuous chamber to the discrete one,
//   [Delta(y)/Delta(x)] det(x_i^{y_j} e^{-x_i} / y_j!).
// Interior x uses the determinant in log space; boundary and
// near-boundary x switch to the factored form
//   Delta(y) prod_i e^{-x_i} prod_j (1/y_j!) s_y(x),
// which is what the continuous extension looks like. The two branches
// agree on the overlap (tested).
double poisson_link_logpmf(const ChamberPointC& x, const ChamberPointD& y);
double poisson_link_pmf(const ChamberPointC& x, const ChamberPointD& y);

// Determinant branch only, no switching; used by the boundary extrapolation
// checks. Requires interior x.
double poisson_link_logpmf_determinant(const ChamberPointC& x, const ChamberPointD& y);

// Evaluator bound to one x. For boundary x it keeps the tableau memo of the
// Schur factor alive across calls, which is what makes row-normalization
// sweeps over thousands of y affordable. Not thread safe.
class PoissonLinkEvaluator {
 public:
  explicit PoissonLinkEvaluator(const ChamberPointC& x);
  ~PoissonLinkEvaluator();
  PoissonLinkEvaluator(PoissonLinkEvaluator&&) noexcept;
  PoissonLinkEvaluator& operator=(PoissonLinkEvaluator&&) noexcept;

  double logpmf(const ChamberPointD& y) const;
  double pmf(const ChamberPointD& y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Scaled link: the same kernel evaluated at sigma * x. The displayed
// prefactor form with sigma^{-N(N-1)/2} is kept as a test oracle only.
double poisson_link_sigma_pmf(double sigma, const ChamberPointC& x, const ChamberPointD& y);
double poisson_link_sigma_logpmf(double sigma, const ChamberPointC& x, const ChamberPointD& y);

// --- discrete -> continuous link --------------------------------------------
//
// Density on the continuous chamber,
//   [Delta(x)/Delta(y)] det(x_i^{y_j+beta-1} e^{-x_i} / Gamma(y_j+beta)),
// supported on the interior (zero when x has coincident coordinates).
double gamma_link_logdensity(double beta, const ChamberPointD& y, const ChamberPointC& x);
double gamma_link_density(double beta, const ChamberPointD& y, const ChamberPointC& x);

// --- exact sampler for the continuous -> discrete link ----------------------
//
// Enumerates the discrete chamber in shells of growing maximum coordinate
// until the un-enumerated mass is below tail_eps, then draws by sequential
// search. N <= 4.
class PoissonLinkSampler {
 public:
  explicit PoissonLinkSampler(const ChamberPointC& x, double tail_eps = 1e-12);

  ChamberPointD sample(Rng& rng) const;
  // enumerated support with probabilities (covers mass >= 1 - tail_eps)
  const std::vector<std::pair<std::vector<long long>, double>>& support() const {
    return support_;
  }
  double covered_mass() const { return covered_; }

 private:
  std::vector<std::pair<std::vector<long long>, double>> support_;
  std::vector<double> cumulative_;
  double covered_ = 0.0;
};

ChamberPointD poisson_link_sample(const ChamberPointC& x, Rng& rng, double tail_eps = 1e-12);

}  // namespace gateways
