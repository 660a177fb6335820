#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gateways/kernels1d.hpp"
#include "gateways/rng.hpp"
#include "gateways/weyl.hpp"

namespace gateways::mc {

struct SimConfig {
  int N = 1;
  double beta = 1.0;
  double sigma = 1.0;  // stationary chain only
  double t_end = 1.0;
  double dt = 1e-3;       // SDE step
  int n_paths = 1000;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
};

// Euler-Maruyama ensemble for the interacting SDE systems. Steps whose
// proposal breaks the strict ordering are redrawn; if the redraw rate
// exceeds 0.1% the step size is halved and the whole ensemble rerun
// (at most 3 halvings). Paths get independent RNG streams derived from the
// seed, so results do not depend on the thread count.
struct EnsembleResult {
  std::vector<std::vector<double>> final_states;  // n_paths x N, ordered coordinates
  double dt_used = 0.0;
  int halvings = 0;
  long long total_steps = 0;
  long long rejected_steps = 0;
  long long zero_clamps = 0;
  double violation_rate = 0.0;
};

EnsembleResult sde_simulate_free(const SimConfig& cfg, const ChamberPointC& x0);
EnsembleResult sde_simulate_stationary(const SimConfig& cfg, const ChamberPointC& x0);

struct MomentSummary {
  std::vector<double> mean;     // per ordered coordinate
  std::vector<double> var;
  std::vector<double> se_mean;  // standard errors
  std::vector<double> se_var;
};

MomentSummary summarize(const EnsembleResult& ensemble);

// Exact skeleton of the non-intersecting free chains: each step draws from
// the N-dimensional kernel by enumeration (N <= 3).
struct SkeletonPath {
  std::vector<ChamberPointD> states;  // length n_steps + 1
  double step = 0.0;
};

SkeletonPath chain_simulate_conditioned(const SimConfig& cfg, const ChamberPointD& x0,
                                        double step, int n_steps, Rng& rng);

// Exact sampler for the N-dimensional free-chain kernel at time `step`
// started from x: the support is enumerated once, draws are then binary
// searches over the cumulative table.
class BdNdFreeSampler {
 public:
  BdNdFreeSampler(double beta, double step, const ChamberPointD& x);
  ChamberPointD sample(Rng& rng) const;
  const std::vector<std::pair<std::vector<long long>, double>>& support() const {
    return support_;
  }
  double covered_mass() const { return covered_; }

 private:
  std::vector<std::pair<std::vector<long long>, double>> support_;
  std::vector<double> cumulative_;
  double covered_ = 0.0;
};

ChamberPointD bd_nd_free_draw(double beta, double step, const ChamberPointD& x, Rng& rng);

}  // namespace gateways::mc
