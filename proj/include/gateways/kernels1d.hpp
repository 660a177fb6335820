#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "gateways/rng.hpp"

namespace gateways {

// Continuous kernels degenerate to a point mass at t == 0; densities signal
// that instead of returning a limit of densities.
class PointMassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiffusionParams {
  double beta;  // > 0
  double t;     // >= 0
};

struct ChainParams {
  double beta;         // > 0
  double sigma = 1.0;  // > 0; ignored by the free chain
  double t = 0.0;      // >= 0
  int truncation = 0;  // state space {0..truncation-1}; 0 = choose adaptively
};

struct Eval1D {
  double value = 0.0;
  double error_bound = 0.0;
};

// --- free diffusion, generator x f'' + beta f' (squared-Bessel type) -------
//
// Transition density as the Poisson-Gamma mixture
//   q_t(x, y) = sum_k Poisson(k; x/t) GammaPdf(y; k+beta, t),
// summed until the Poisson tail drops below 1e-15. The mixture is certified
// against the generator by finite differences in the test suite.
double besq_logdensity(const DiffusionParams& p, double x, double y);
double besq_density(const DiffusionParams& p, double x, double y);
Eval1D besq_density_ev(const DiffusionParams& p, double x, double y);

// Exact draw: K ~ Poisson(x/t), Y ~ Gamma(K+beta, t).
double besq_sample(const DiffusionParams& p, double x, Rng& rng);

// --- stationary diffusion, generator x f'' + (beta - x) f' -----------------
//
// Space-time change of the free one: k_t(x, y) = e^t q_{e^t-1}(x, e^t y),
// equivalently a Poisson(x / (e^t-1)) - Gamma(scale 1 - e^{-t}) mixture.
double cir_logdensity(const DiffusionParams& p, double x, double y);
double cir_density(const DiffusionParams& p, double x, double y);
Eval1D cir_density_ev(const DiffusionParams& p, double x, double y);
double cir_sample(const DiffusionParams& p, double x, Rng& rng);

// --- birth and death chains -------------------------------------------------

enum class ChainKind {
  kFree,        // birth n + beta, death n
  kStationary,  // birth sigma (n + beta), death (sigma + 1) n
};

struct BDRates {
  ChainKind kind;
  double beta;
  double sigma;  // used by the stationary chain only

  double birth(long long n) const {
    const double nb = static_cast<double>(n) + beta;
    return kind == ChainKind::kFree ? nb : sigma * nb;
  }
  double death(long long n) const {
    const double nd = static_cast<double>(n);
    return kind == ChainKind::kFree ? nd : (sigma + 1.0) * nd;
  }
};

// exp(tQ) on the truncated state space {0..M-1} by uniformization. The
// birth transition out of M-1 is dropped while its rate stays in the
// diagonal, so rows are substochastic and the row-sum deficit bounds the
// escape mass through level M.
class BirthDeathKernel {
 public:
  BirthDeathKernel(BDRates rates, int truncation);

  int truncation() const { return M_; }
  const BDRates& rates() const { return rates_; }

  struct Row {
    std::vector<double> p;
    double series_tail = 0.0;  // discarded Poisson-series mass
    double deficit = 0.0;      // 1 - sum(p): escape-mass bound
  };

  // Row x of exp(tQ); cached per (x, t). Not thread safe: confine an
  // instance to one evaluator.
  const Row& row(long long x, double t);
  // Column y of exp(tQ) (transpose uniformization), uncached.
  Row column(long long y, double t) const;
  // init * exp(tQ) for an arbitrary sub-probability row vector.
  Row propagate(const std::vector<double>& init, double t) const;

 private:
  Row run(std::vector<double> v, double t) const;

  BDRates rates_;
  int M_;
  double uniform_rate_;
  std::map<std::pair<long long, double>, Row> cache_;
};

// Smallest power-of-two-grown truncation whose escape deficit from start x
// up to horizon t is below `deficit_tol`, at least min_states states.
int choose_truncation(const BDRates& rates, long long x, double t, double deficit_tol = 1e-13,
                      int min_states = 32);

// Transition probabilities with an attached certificate: error bound =
// Poisson-series tail + |value at M - value at 2M|.
Eval1D bd_free_prob(const ChainParams& p, long long x, long long y);
Eval1D bd_stat_prob(const ChainParams& p, long long x, long long y);

// Event-driven exact path of either chain on [0, horizon].
struct JumpPath {
  std::vector<double> times;      // jump times, starting with 0
  std::vector<long long> states;  // states after each time; states[0] = x0
};
JumpPath bd_sample_path(const ChainParams& p, ChainKind kind, long long x0, double horizon,
                        Rng& rng);

}  // namespace gateways
