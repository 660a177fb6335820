#include "gateways/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "gateways/km_nd.hpp"
#include "gateways/quadrature.hpp"

namespace gateways::mc {

namespace {

struct StepDiagnostics {
  std::atomic<long long> total{0};
  std::atomic<long long> rejected{0};
  std::atomic<long long> clamps{0};
  std::atomic<bool> hard_failure{false};
};

// One Euler-Maruyama path on [0, t_end]; returns final state.
// Rejected proposals redraw the Gaussians for that step (up to 64 tries).
bool run_path(std::vector<double>& x, double beta, bool stationary, double t_end, double dt,
              Rng& rng, StepDiagnostics& diag) {
  const int n = static_cast<int>(x.size());
  std::vector<double> prop(x.size());
  double t = 0.0;
  long long total_local = 0, rejected_local = 0, clamps_local = 0;
  while (t < t_end) {
    const double h = std::min(dt, t_end - t);
    const double sqh = std::sqrt(h);
    bool accepted = false;
    for (int attempt = 0; attempt < 64 && !accepted; ++attempt) {
      ++total_local;
      for (int i = 0; i < n; ++i) {
        const double xi = x[static_cast<size_t>(i)];
        double drift = stationary ? (beta - xi) : beta;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          const double gap = xi - x[static_cast<size_t>(j)];
          drift += 2.0 * xi / gap;
        }
        double nxt = xi + drift * h + std::sqrt(2.0 * std::max(xi, 0.0)) * sqh * rng.normal();
        if (nxt < 0.0) {
          nxt = 0.0;
          ++clamps_local;
        }
        prop[static_cast<size_t>(i)] = nxt;
      }
      accepted = true;
      for (int i = 1; i < n; ++i)
        if (prop[static_cast<size_t>(i)] <= prop[static_cast<size_t>(i - 1)]) {
          accepted = false;
          ++rejected_local;
          break;
        }
    }
    if (!accepted) {
      diag.total += total_local;
      diag.rejected += rejected_local;
      diag.clamps += clamps_local;
      diag.hard_failure = true;
      return false;
    }
    x.swap(prop);
    t += h;
  }
  diag.total += total_local;
  diag.rejected += rejected_local;
  diag.clamps += clamps_local;
  return true;
}

EnsembleResult simulate(const SimConfig& cfg, const ChamberPointC& x0, bool stationary) {
  if (x0.size() != cfg.N) throw std::invalid_argument("sde_simulate: x0 dimension mismatch");
  if (!x0.is_interior() && cfg.N > 1)
    throw std::domain_error("sde_simulate: start must be interior (no coincident coordinates)");
  if (!(cfg.dt > 0.0) || cfg.n_paths < 1)
    throw std::domain_error("sde_simulate: dt > 0 and n_paths >= 1 required");

  const Rng master(cfg.seed);
  double dt = cfg.dt;
  for (int halving = 0; halving <= 3; ++halving) {
    EnsembleResult res;
    res.dt_used = dt;
    res.halvings = halving;
    res.final_states.assign(static_cast<size_t>(cfg.n_paths),
                            std::vector<double>(static_cast<size_t>(cfg.N), 0.0));
    StepDiagnostics diag;

    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, cfg.n_paths));
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int p = next.fetch_add(1);
        if (p >= cfg.n_paths) return;
        Rng rng = master.stream(static_cast<std::uint64_t>(p));
        std::vector<double> x = x0.coords();
        if (!run_path(x, cfg.beta, stationary, cfg.t_end, dt, rng, diag)) return;
        res.final_states[static_cast<size_t>(p)] = std::move(x);
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    res.total_steps = diag.total.load();
    res.rejected_steps = diag.rejected.load();
    res.zero_clamps = diag.clamps.load();
    res.violation_rate =
        res.total_steps > 0
            ? static_cast<double>(res.rejected_steps) / static_cast<double>(res.total_steps)
            : 0.0;
    if (!diag.hard_failure.load() && res.violation_rate <= 1e-3) return res;
    dt *= 0.5;
  }
  throw NumericalBudgetError(
      "sde_simulate: ordering violations persist after 3 step-size halvings");
}

}  // namespace

EnsembleResult sde_simulate_free(const SimConfig& cfg, const ChamberPointC& x0) {
  return simulate(cfg, x0, /*stationary=*/false);
}

EnsembleResult sde_simulate_stationary(const SimConfig& cfg, const ChamberPointC& x0) {
  return simulate(cfg, x0, /*stationary=*/true);
}

MomentSummary summarize(const EnsembleResult& ensemble) {
  MomentSummary s;
  if (ensemble.final_states.empty()) return s;
  const size_t n = ensemble.final_states.front().size();
  const double m = static_cast<double>(ensemble.final_states.size());
  s.mean.assign(n, 0.0);
  s.var.assign(n, 0.0);
  s.se_mean.assign(n, 0.0);
  s.se_var.assign(n, 0.0);
  for (const auto& row : ensemble.final_states)
    for (size_t i = 0; i < n; ++i) s.mean[i] += row[i];
  for (size_t i = 0; i < n; ++i) s.mean[i] /= m;
  std::vector<double> m4(n, 0.0);
  for (const auto& row : ensemble.final_states)
    for (size_t i = 0; i < n; ++i) {
      const double d = row[i] - s.mean[i];
      s.var[i] += d * d;
      m4[i] += d * d * d * d;
    }
  for (size_t i = 0; i < n; ++i) {
    s.var[i] /= (m - 1.0);
    m4[i] /= m;
    s.se_mean[i] = std::sqrt(s.var[i] / m);
    // SE of the sample variance via the fourth central moment
    const double v2 = s.var[i] * s.var[i];
    s.se_var[i] = std::sqrt(std::max(m4[i] - v2 * (m - 3.0) / (m - 1.0), 0.0) / m);
  }
  return s;
}

BdNdFreeSampler::BdNdFreeSampler(double beta, double step, const ChamberPointD& x) {
  const int n = x.size();
  if (n > 3) throw std::domain_error("BdNdFreeSampler: N <= 3 only");
  if (!(step > 0.0)) throw std::domain_error("BdNdFreeSampler: step must be > 0");
  const int m = choose_truncation({ChainKind::kFree, beta, 1.0}, x.max(), step, 1e-14,
                                  static_cast<int>(x.max()) + 24);
  BirthDeathKernel kern({ChainKind::kFree, beta, 1.0}, m);
  std::vector<const BirthDeathKernel::Row*> rows;
  for (int i = 0; i < n; ++i) rows.push_back(&kern.row(x[i], step));
  for_each_chamber_point(n, m - 1, [&](const std::vector<long long>& y) {
    const ChamberPointD yd(y);
    const KernelEval e = bd_nd_from_rows(rows, x, yd, 0.0);
    if (e.value > 0.0) {
      covered_ += e.value;
      support_.emplace_back(y, e.value);
      cumulative_.push_back(covered_);
    }
  });
  if (support_.empty())
    throw NumericalBudgetError("BdNdFreeSampler: empty enumerated support");
}

ChamberPointD BdNdFreeSampler::sample(Rng& rng) const {
  const double u = rng.uniform() * covered_;
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  const size_t idx =
      std::min(static_cast<size_t>(it - cumulative_.begin()), support_.size() - 1);
  return ChamberPointD(support_[idx].first);
}

ChamberPointD bd_nd_free_draw(double beta, double step, const ChamberPointD& x, Rng& rng) {
  return BdNdFreeSampler(beta, step, x).sample(rng);
}

SkeletonPath chain_simulate_conditioned(const SimConfig& cfg, const ChamberPointD& x0,
                                        double step, int n_steps, Rng& rng) {
  if (x0.size() != cfg.N) throw std::invalid_argument("chain_simulate: x0 dimension mismatch");
  if (cfg.N > 3) throw std::domain_error("chain_simulate: N <= 3 only");
  SkeletonPath path;
  path.step = step;
  path.states.push_back(x0);
  if (step < 0.0) throw std::domain_error("chain_simulate: step must be >= 0");
  ChamberPointD cur = x0;
  for (int s = 0; s < n_steps; ++s) {
    if (step == 0.0) {
      path.states.push_back(cur);
      continue;
    }
    cur = bd_nd_free_draw(cfg.beta, step, cur, rng);
    path.states.push_back(cur);
  }
  return path;
}

}  // namespace gateways::mc
