// Command line front end: identity verification suites, kernel evaluation,
// ensemble sampling and stochastic simulation with reproducible seeds.
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 usage error,
// 3 numerical budget exceeded.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gateways/ensembles.hpp"
#include "gateways/km_nd.hpp"
#include "gateways/kernels1d.hpp"
#include "gateways/links.hpp"
#include "gateways/montecarlo.hpp"
#include "gateways/quadrature.hpp"
#include "gateways/scalar_math.hpp"
#include "gateways/verify.hpp"
#include "gateways/version.hpp"

namespace {

using json = nlohmann::json;
using namespace gateways;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumericalBudget = 3;

std::string provenance_line(const json& config) {
  std::ostringstream os;
  os << "# " << kName << " " << kVersion << "\n# config: " << config.dump() << "\n";
  return os.str();
}

void write_sample_csv(const std::string& path, const json& config, const std::string& col_prefix,
                      int n, const std::vector<std::vector<double>>& rows, bool integer_values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << provenance_line(config);
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << col_prefix << (i + 1);
  out << "\n";
  out << std::setprecision(17);
  for (const auto& row : rows) {
    for (int i = 0; i < n; ++i) {
      if (i) out << ",";
      if (integer_values)
        out << static_cast<long long>(row[static_cast<size_t>(i)]);
      else
        out << row[static_cast<size_t>(i)];
    }
    out << "\n";
  }
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::vector<std::string> identities;
  int n_max = 3;
  int threads = 0;
  std::vector<double> betas{0.5, 1.0, 2.5};
  std::vector<double> sigmas{0.5, 1.0, 2.0};
  std::vector<double> times{0.1, 0.5, 1.0, 2.0};
  std::string json_path;
  std::string text_path;
};

int run_verify(const VerifyArgs& a) {
  checks::SuiteOptions opts;
  opts.n_max = a.n_max;
  opts.threads = a.threads;
  opts.betas = a.betas;
  opts.sigmas = a.sigmas;
  opts.times = a.times;
  if (!a.identities.empty())
    opts.identities = a.identities;
  else if (a.suite != "all")
    opts.identities = {a.suite};

  json config = {{"command", "verify"},   {"suite", a.suite},   {"identities", a.identities},
                 {"n_max", a.n_max},      {"threads", a.threads}, {"beta", a.betas},
                 {"sigma", a.sigmas},     {"t", a.times}};

  const checks::SuiteResult result = checks::run_suite(opts);
  const std::string table = checks::to_table(result);
  std::cout << table;
  if (!a.json_path.empty()) {
    std::ofstream out(a.json_path);
    out << checks::to_json(result, config.dump());
  }
  if (!a.text_path.empty()) {
    std::ofstream out(a.text_path);
    out << provenance_line(config) << table;
  }
  return result.all_pass ? kExitOk : kExitCheckFailure;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  std::string target;
  int n = 1;
  double beta = 1.0;
  double sigma = 1.0;
  double t = 1.0;
  std::string x_csv;
  long long count = 1000;
  std::uint64_t seed = 0;
  std::string out = "samples.csv";
  bool force_mcmc = false;
  int burn_in = 10000;
  int thinning = 10;
  double mcmc_step = 0.35;
  double tail_eps = 1e-12;
};

int run_sample(const SampleArgs& a) {
  json config = {{"command", "sample"}, {"target", a.target}, {"n", a.n},
                 {"beta", a.beta},      {"sigma", a.sigma},   {"t", a.t},
                 {"x", a.x_csv},        {"count", a.count},   {"seed", a.seed},
                 {"mcmc", a.force_mcmc}};
  Rng rng(a.seed);
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(a.count));
  std::string prefix = "x";
  bool integers = false;
  int n = a.n;

  if (a.target == "laguerre") {
    const EnsembleParams p{a.n, a.beta};
    const bool integer_beta = std::fabs(a.beta - std::round(a.beta)) < 1e-12 && a.beta >= 1.0;
    if (integer_beta && !a.force_mcmc) {
      for (long long i = 0; i < a.count; ++i) rows.push_back(laguerre_sample(p, rng).coords());
    } else {
      LaguerreMcmcSampler mcmc(p, rng, {a.burn_in, a.thinning, a.mcmc_step});
      for (long long i = 0; i < a.count; ++i) rows.push_back(mcmc.sample().coords());
    }
  } else if (a.target == "meixner") {
    const EnsembleParams p{a.n, a.beta, a.sigma};
    prefix = "y";
    integers = true;
    for (long long i = 0; i < a.count; ++i) {
      const ChamberPointD y = meixner_sample(p, rng);
      rows.emplace_back(y.coords().begin(), y.coords().end());
    }
  } else if (a.target == "link") {
    const ChamberPointC x = ChamberPointC::parse(a.x_csv);
    n = x.size();
    prefix = "y";
    integers = true;
    const PoissonLinkSampler sampler(x, a.tail_eps);
    for (long long i = 0; i < a.count; ++i) {
      const ChamberPointD y = sampler.sample(rng);
      rows.emplace_back(y.coords().begin(), y.coords().end());
    }
  } else if (a.target == "besq" || a.target == "cir") {
    const double x0 = a.x_csv.empty() ? 1.0 : std::stod(a.x_csv);
    const DiffusionParams p{a.beta, a.t};
    n = 1;
    for (long long i = 0; i < a.count; ++i)
      rows.push_back({a.target == "besq" ? besq_sample(p, x0, rng) : cir_sample(p, x0, rng)});
  } else {
    std::cerr << "unknown sample target: " << a.target << "\n";
    return kExitUsage;
  }
  write_sample_csv(a.out, config, prefix, n, rows, integers);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string kernel;
  int n = 0;
  double beta = 1.0;
  double sigma = 1.0;
  double t = 1.0;
  std::string x_csv;
  std::string y_csv;
  int truncation = 0;
};

int run_eval(const EvalArgs& a) {
  std::cout << std::setprecision(10);
  const auto need = [](const std::string& s, const char* what) {
    if (s.empty()) throw CLI::ValidationError(std::string("--") + what + " is required");
    return s;
  };
  const auto check_n = [&](int have) {
    if (a.n > 0 && a.n != have)
      throw CLI::ValidationError("--n disagrees with the coordinate count");
  };

  if (a.kernel == "q" || a.kernel == "k") {
    const double x = std::stod(need(a.x_csv, "x"));
    const double y = std::stod(need(a.y_csv, "y"));
    const DiffusionParams p{a.beta, a.t};
    std::cout << (a.kernel == "q" ? besq_density(p, x, y) : cir_density(p, x, y)) << "\n";
  } else if (a.kernel == "bdfree" || a.kernel == "bdstat") {
    const long long x = std::stoll(need(a.x_csv, "x"));
    const long long y = std::stoll(need(a.y_csv, "y"));
    const ChainParams p{a.beta, a.sigma, a.t, a.truncation};
    const Eval1D e = a.kernel == "bdfree" ? bd_free_prob(p, x, y) : bd_stat_prob(p, x, y);
    std::cout << e.value << " (error bound " << e.error_bound << ")\n";
  } else if (a.kernel == "qnd" || a.kernel == "knd") {
    const ChamberPointC x = ChamberPointC::parse(need(a.x_csv, "x"));
    const ChamberPointC y = ChamberPointC::parse(need(a.y_csv, "y"));
    check_n(x.size());
    const KernelEval e = a.kernel == "qnd" ? besq_nd_density(a.beta, a.t, x, y)
                                           : cir_nd_density(a.beta, a.t, x, y);
    std::cout << e.value << " (error bound " << e.error_bound << ")\n";
  } else if (a.kernel == "bdndfree" || a.kernel == "bdndstat") {
    const ChamberPointD x = ChamberPointD::parse(need(a.x_csv, "x"));
    const ChamberPointD y = ChamberPointD::parse(need(a.y_csv, "y"));
    check_n(x.size());
    const KernelEval e = a.kernel == "bdndfree"
                             ? bd_nd_free_prob(a.beta, a.t, x, y, a.truncation)
                             : bd_nd_stat_prob(a.beta, a.sigma, a.t, x, y, a.truncation);
    std::cout << e.value << " (error bound " << e.error_bound << ")\n";
  } else if (a.kernel == "lambda") {
    const ChamberPointC x = ChamberPointC::parse(need(a.x_csv, "x"));
    const ChamberPointD y = ChamberPointD::parse(need(a.y_csv, "y"));
    check_n(x.size());
    std::cout << poisson_link_pmf(x, y) << "\n";
  } else if (a.kernel == "lambdasigma") {
    const ChamberPointC x = ChamberPointC::parse(need(a.x_csv, "x"));
    const ChamberPointD y = ChamberPointD::parse(need(a.y_csv, "y"));
    check_n(x.size());
    std::cout << poisson_link_sigma_pmf(a.sigma, x, y) << "\n";
  } else if (a.kernel == "lambdastar") {
    const ChamberPointD y = ChamberPointD::parse(need(a.y_csv, "y"));
    const ChamberPointC x = ChamberPointC::parse(need(a.x_csv, "x"));
    check_n(y.size());
    std::cout << gamma_link_density(a.beta, y, x) << "\n";
  } else if (a.kernel == "vandermonde") {
    const ChamberPointC x = ChamberPointC::parse(need(a.x_csv, "x"));
    std::cout << log_vandermonde(x.coords()).value() << "\n";
  } else if (a.kernel == "schur") {
    const ChamberPointC x = ChamberPointC::parse(need(a.x_csv, "x"));
    const ChamberPointD y = ChamberPointD::parse(need(a.y_csv, "y"));
    std::cout << schur_eval(y, x) << "\n";
  } else if (a.kernel == "laguerre") {
    const ChamberPointC x = ChamberPointC::parse(need(a.x_csv, "x"));
    std::cout << laguerre_density({x.size(), a.beta}, x) << "\n";
  } else if (a.kernel == "meixner") {
    const ChamberPointD y = ChamberPointD::parse(need(a.y_csv, "y"));
    std::cout << meixner_pmf({y.size(), a.beta, a.sigma}, y) << "\n";
  } else {
    std::cerr << "unknown kernel id: " << a.kernel << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string mode;
  int n = 2;
  double beta = 1.0;
  double sigma = 1.0;
  std::string x0_csv;
  double t_end = 0.5;
  double dt = 1e-3;
  int paths = 1000;
  std::uint64_t seed = 0;
  double step = 0.5;
  int steps = 1;
  int threads = 0;
  std::string out = "simulation.csv";
  std::string summary;
};

int run_simulate(const SimulateArgs& a) {
  json config = {{"command", "simulate"}, {"mode", a.mode},   {"n", a.n},
                 {"beta", a.beta},        {"sigma", a.sigma}, {"x0", a.x0_csv},
                 {"t_end", a.t_end},      {"dt", a.dt},       {"paths", a.paths},
                 {"seed", a.seed},        {"step", a.step},   {"steps", a.steps}};
  mc::SimConfig cfg;
  cfg.N = a.n;
  cfg.beta = a.beta;
  cfg.sigma = a.sigma;
  cfg.t_end = a.t_end;
  cfg.dt = a.dt;
  cfg.n_paths = a.paths;
  cfg.seed = a.seed;
  cfg.threads = a.threads;

  if (a.mode == "sde-free" || a.mode == "sde-stat") {
    const ChamberPointC x0 =
        a.x0_csv.empty() ? ChamberPointC({1.0, 2.0}) : ChamberPointC::parse(a.x0_csv);
    cfg.N = x0.size();
    const mc::EnsembleResult res = a.mode == "sde-free" ? mc::sde_simulate_free(cfg, x0)
                                                        : mc::sde_simulate_stationary(cfg, x0);
    write_sample_csv(a.out, config, "x", cfg.N, res.final_states, false);
    const mc::MomentSummary s = mc::summarize(res);
    json summary = {{"artifact", {{"name", kName}, {"version", kVersion}}},
                    {"config", config},
                    {"dt_used", res.dt_used},
                    {"halvings", res.halvings},
                    {"violation_rate", res.violation_rate},
                    {"zero_clamps", res.zero_clamps},
                    {"mean", s.mean},
                    {"var", s.var},
                    {"se_mean", s.se_mean},
                    {"se_var", s.se_var}};
    if (!a.summary.empty()) {
      std::ofstream out(a.summary);
      out << summary.dump(2) << "\n";
    } else {
      std::cout << summary.dump(2) << "\n";
    }
  } else if (a.mode == "chain") {
    const ChamberPointD x0 =
        a.x0_csv.empty() ? ChamberPointD({0, 1}) : ChamberPointD::parse(a.x0_csv);
    cfg.N = x0.size();
    Rng rng(cfg.seed);
    std::vector<std::vector<double>> finals;
    finals.reserve(static_cast<size_t>(a.paths));
    for (int p = 0; p < a.paths; ++p) {
      Rng stream = Rng(cfg.seed).stream(static_cast<std::uint64_t>(p));
      const mc::SkeletonPath path = mc::chain_simulate_conditioned(cfg, x0, a.step, a.steps, stream);
      const auto& last = path.states.back();
      std::vector<double> row;
      for (int i = 0; i < last.size(); ++i) row.push_back(static_cast<double>(last[i]));
      finals.push_back(std::move(row));
    }
    write_sample_csv(a.out, config, "y", cfg.N, finals, true);
  } else {
    std::cerr << "unknown simulate mode: " << a.mode << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-colliding diffusion/birth-death kernels, link kernels and their exact-identity certification"};
  app.set_config("--config", "", "Read defaults from an INI/TOML file (flags win)");
  app.require_subcommand(1);

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "Run identity verification suites");
  verify->add_option("--suite", va.suite, "all or a single identity name");
  verify->add_option("--identity", va.identities, "Identity names (repeatable)");
  verify->add_option("--n-max", va.n_max, "Largest N in the grids (1..3)");
  verify->add_option("--threads", va.threads, "Worker threads (0 = all cores)");
  verify->add_option("--beta", va.betas, "beta grid");
  verify->add_option("--sigma", va.sigmas, "sigma grid");
  verify->add_option("--t", va.times, "time grid");
  verify->add_option("--json", va.json_path, "Write the JSON report here");
  verify->add_option("--text", va.text_path, "Write the text table here");

  SampleArgs sa;
  CLI::App* sample = app.add_subcommand("sample", "Draw from the ensembles and kernels");
  sample->add_option("target", sa.target, "laguerre | meixner | link | besq | cir")->required();
  sample->add_option("--n", sa.n, "Dimension");
  sample->add_option("--beta", sa.beta, "beta parameter");
  sample->add_option("--sigma", sa.sigma, "sigma parameter");
  sample->add_option("--t", sa.t, "time (besq/cir)");
  sample->add_option("--x", sa.x_csv, "Start point (comma separated)");
  sample->add_option("--count", sa.count, "Number of draws");
  sample->add_option("--seed", sa.seed, "RNG seed");
  sample->add_option("--out", sa.out, "Output CSV path");
  sample->add_flag("--mcmc", sa.force_mcmc, "Force the MCMC path for the Laguerre ensemble");
  sample->add_option("--burn-in", sa.burn_in, "MCMC burn-in sweeps");
  sample->add_option("--thinning", sa.thinning, "MCMC thinning");
  sample->add_option("--mcmc-step", sa.mcmc_step, "MCMC proposal scale");
  sample->add_option("--tail-eps", sa.tail_eps, "Link sampler enumeration tail");

  EvalArgs ea;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a kernel/density at a point");
  eval->add_option("kernel", ea.kernel,
                   "q | k | bdfree | bdstat | qnd | knd | bdndfree | bdndstat | lambda | "
                   "lambdasigma | lambdastar | vandermonde | schur | laguerre | meixner")
      ->required();
  eval->add_option("--n", ea.n, "Dimension (validated against --x/--y)");
  eval->add_option("--beta", ea.beta, "beta parameter");
  eval->add_option("--sigma", ea.sigma, "sigma parameter");
  eval->add_option("--t", ea.t, "time");
  eval->add_option("--x", ea.x_csv, "Continuous point (comma separated)");
  eval->add_option("--y", ea.y_csv, "Discrete point (comma separated)");
  eval->add_option("--m", ea.truncation, "Birth-death truncation (0 = adaptive)");

  SimulateArgs ma;
  CLI::App* simulate = app.add_subcommand("simulate", "Run the Monte Carlo drivers");
  simulate->add_option("mode", ma.mode, "sde-free | sde-stat | chain")->required();
  simulate->add_option("--n", ma.n, "Dimension");
  simulate->add_option("--beta", ma.beta, "beta parameter");
  simulate->add_option("--sigma", ma.sigma, "sigma parameter");
  simulate->add_option("--x0", ma.x0_csv, "Start point (comma separated)");
  simulate->add_option("--t-end", ma.t_end, "Horizon (SDE)");
  simulate->add_option("--dt", ma.dt, "Euler step (SDE)");
  simulate->add_option("--paths", ma.paths, "Number of paths");
  simulate->add_option("--seed", ma.seed, "RNG seed");
  simulate->add_option("--step", ma.step, "Skeleton step (chain)");
  simulate->add_option("--steps", ma.steps, "Skeleton step count (chain)");
  simulate->add_option("--threads", ma.threads, "Worker threads (0 = all cores)");
  simulate->add_option("--out", ma.out, "Output CSV path");
  simulate->add_option("--summary", ma.summary, "Summary JSON path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) return run_verify(va);
    if (*sample) return run_sample(sa);
    if (*eval) return run_eval(ea);
    if (*simulate) return run_simulate(ma);
  } catch (const NumericalBudgetError& e) {
    std::cerr << "numerical budget exceeded: " << e.what() << "\n";
    return kExitNumericalBudget;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitUsage;
}
