// pybind11 surface over the core: kernels, links, ensembles, samplers and
// the verification suite. Vector arguments are plain lists; chamber
// validation happens in the C++ ctors.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gateways/ensembles.hpp"
#include "gateways/km_nd.hpp"
#include "gateways/kernels1d.hpp"
#include "gateways/links.hpp"
#include "gateways/montecarlo.hpp"
#include "gateways/quadrature.hpp"
#include "gateways/scalar_math.hpp"
#include "gateways/verify.hpp"
#include "gateways/version.hpp"

namespace py = pybind11;
using namespace gateways;

namespace {

ChamberPointC cpc(const std::vector<double>& v) { return ChamberPointC(v); }
ChamberPointD cpd(const std::vector<long long>& v) { return ChamberPointD(v); }

std::string stirling2_str(int n, int k) {
  BigCount v = stirling2(n, k);
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_gateways, m) {
  m.doc() = "Non-colliding diffusion and birth-death kernels, Markov links, ensembles "
            "and their exact-identity verification";
  m.attr("__version__") = kVersion;

  py::register_exception<PointMassError>(m, "PointMassError");
  py::register_exception<NumericalBudgetError>(m, "NumericalBudgetError");

  // scalar special functions
  m.def("log_gamma", &log_gamma, py::arg("z"));
  m.def("poisson_logpmf", &poisson_logpmf, py::arg("k"), py::arg("mean"));
  m.def("neg_binomial_pmf", &neg_binomial_pmf, py::arg("n"), py::arg("beta"), py::arg("sigma"));
  m.def("touchard", &touchard, py::arg("n"), py::arg("z"));
  m.def("gamma_moment_poly", &gamma_moment_poly, py::arg("k"), py::arg("z"), py::arg("beta"));
  m.def("stirling2", [](int n, int k) {
    return py::module_::import("builtins").attr("int")(stirling2_str(n, k));
  }, py::arg("n"), py::arg("k"));

  // chamber helpers
  m.def("partition_to_chamber", [](const std::vector<long long>& parts) {
    return partition_to_chamber(PartitionN(parts)).coords();
  }, py::arg("parts"));
  m.def("chamber_to_partition", [](const std::vector<long long>& y) {
    return chamber_to_partition(cpd(y)).parts();
  }, py::arg("y"));
  m.def("log_vandermonde", [](const std::vector<double>& x) {
    return log_vandermonde(x).value();
  }, py::arg("x"));
  m.def("schur_eval", [](const std::vector<long long>& y, const std::vector<double>& x) {
    return schur_eval(cpd(y), cpc(x));
  }, py::arg("y"), py::arg("x"));

  // one-dimensional kernels and samplers
  m.def("besq_density", [](double beta, double t, double x, double y) {
    return besq_density({beta, t}, x, y);
  }, py::arg("beta"), py::arg("t"), py::arg("x"), py::arg("y"));
  m.def("cir_density", [](double beta, double t, double x, double y) {
    return cir_density({beta, t}, x, y);
  }, py::arg("beta"), py::arg("t"), py::arg("x"), py::arg("y"));
  m.def("bd_free_prob", [](double beta, double t, long long x, long long y, int truncation) {
    const Eval1D e = bd_free_prob({beta, 1.0, t, truncation}, x, y);
    return py::make_tuple(e.value, e.error_bound);
  }, py::arg("beta"), py::arg("t"), py::arg("x"), py::arg("y"), py::arg("truncation") = 0);
  m.def("bd_stat_prob", [](double beta, double sigma, double t, long long x, long long y,
                           int truncation) {
    const Eval1D e = bd_stat_prob({beta, sigma, t, truncation}, x, y);
    return py::make_tuple(e.value, e.error_bound);
  }, py::arg("beta"), py::arg("sigma"), py::arg("t"), py::arg("x"), py::arg("y"),
     py::arg("truncation") = 0);
  m.def("besq_sample", [](double beta, double t, double x, std::uint64_t seed, long long count) {
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i) out.push_back(besq_sample({beta, t}, x, rng));
    return out;
  }, py::arg("beta"), py::arg("t"), py::arg("x"), py::arg("seed") = 0, py::arg("count") = 1);
  m.def("cir_sample", [](double beta, double t, double x, std::uint64_t seed, long long count) {
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i) out.push_back(cir_sample({beta, t}, x, rng));
    return out;
  }, py::arg("beta"), py::arg("t"), py::arg("x"), py::arg("seed") = 0, py::arg("count") = 1);

  // N-dimensional kernels
  m.def("besq_nd_density", [](double beta, double t, const std::vector<double>& x,
                              const std::vector<double>& y) {
    const KernelEval e = besq_nd_density(beta, t, cpc(x), cpc(y));
    return py::make_tuple(e.value, e.error_bound);
  }, py::arg("beta"), py::arg("t"), py::arg("x"), py::arg("y"));
  m.def("cir_nd_density", [](double beta, double t, const std::vector<double>& x,
                             const std::vector<double>& y) {
    const KernelEval e = cir_nd_density(beta, t, cpc(x), cpc(y));
    return py::make_tuple(e.value, e.error_bound);
  }, py::arg("beta"), py::arg("t"), py::arg("x"), py::arg("y"));
  m.def("bd_nd_free_prob", [](double beta, double t, const std::vector<long long>& x,
                              const std::vector<long long>& y, int truncation) {
    const KernelEval e = bd_nd_free_prob(beta, t, cpd(x), cpd(y), truncation);
    return py::make_tuple(e.value, e.error_bound);
  }, py::arg("beta"), py::arg("t"), py::arg("x"), py::arg("y"), py::arg("truncation") = 0);
  m.def("bd_nd_stat_prob", [](double beta, double sigma, double t, const std::vector<long long>& x,
                              const std::vector<long long>& y, int truncation) {
    const KernelEval e = bd_nd_stat_prob(beta, sigma, t, cpd(x), cpd(y), truncation);
    return py::make_tuple(e.value, e.error_bound);
  }, py::arg("beta"), py::arg("sigma"), py::arg("t"), py::arg("x"), py::arg("y"),
     py::arg("truncation") = 0);

  // links
  m.def("poisson_link_pmf", [](const std::vector<double>& x, const std::vector<long long>& y) {
    return poisson_link_pmf(cpc(x), cpd(y));
  }, py::arg("x"), py::arg("y"));
  m.def("poisson_link_sigma_pmf", [](double sigma, const std::vector<double>& x,
                                     const std::vector<long long>& y) {
    return poisson_link_sigma_pmf(sigma, cpc(x), cpd(y));
  }, py::arg("sigma"), py::arg("x"), py::arg("y"));
  m.def("gamma_link_density", [](double beta, const std::vector<long long>& y,
                                 const std::vector<double>& x) {
    return gamma_link_density(beta, cpd(y), cpc(x));
  }, py::arg("beta"), py::arg("y"), py::arg("x"));
  m.def("poisson_link_sample", [](const std::vector<double>& x, std::uint64_t seed,
                                  long long count, double tail_eps) {
    Rng rng(seed);
    const PoissonLinkSampler sampler(cpc(x), tail_eps);
    std::vector<std::vector<long long>> out;
    out.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i) out.push_back(sampler.sample(rng).coords());
    return out;
  }, py::arg("x"), py::arg("seed") = 0, py::arg("count") = 1, py::arg("tail_eps") = 1e-12);

  // ensembles
  m.def("laguerre_logdensity", [](int n, double beta, const std::vector<double>& x) {
    return laguerre_logdensity({n, beta}, cpc(x));
  }, py::arg("n"), py::arg("beta"), py::arg("x"));
  m.def("laguerre_sample", [](int n, double beta, std::uint64_t seed, long long count) {
    Rng rng(seed);
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i)
      out.push_back(laguerre_sample({n, beta}, rng).coords());
    return out;
  }, py::arg("n"), py::arg("beta"), py::arg("seed") = 0, py::arg("count") = 1);
  m.def("meixner_logpmf", [](int n, double beta, double sigma, const std::vector<long long>& y) {
    return meixner_logpmf({n, beta, sigma}, cpd(y));
  }, py::arg("n"), py::arg("beta"), py::arg("sigma"), py::arg("y"));
  m.def("meixner_sample", [](int n, double beta, double sigma, std::uint64_t seed,
                             long long count) {
    Rng rng(seed);
    std::vector<std::vector<long long>> out;
    out.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i)
      out.push_back(meixner_sample({n, beta, sigma}, rng).coords());
    return out;
  }, py::arg("n"), py::arg("beta"), py::arg("sigma"), py::arg("seed") = 0, py::arg("count") = 1);

  // verification suite: returns the JSON report as a string
  m.def("run_verify", [](int n_max, const std::vector<std::string>& identities, int threads) {
    checks::SuiteOptions opts;
    opts.n_max = n_max;
    opts.identities = identities;
    opts.threads = threads;
    const checks::SuiteResult res = checks::run_suite(opts);
    return py::make_tuple(res.all_pass, checks::to_json(res));
  }, py::arg("n_max") = 2, py::arg("identities") = std::vector<std::string>{},
     py::arg("threads") = 0);
  m.def("identity_names", [] { return checks::identity_names(); });

  // Monte Carlo
  m.def("sde_simulate", [](const std::string& mode, double beta, const std::vector<double>& x0,
                           double t_end, double dt, int n_paths, std::uint64_t seed) {
    mc::SimConfig cfg;
    cfg.N = static_cast<int>(x0.size());
    cfg.beta = beta;
    cfg.t_end = t_end;
    cfg.dt = dt;
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    const auto res = mode == "stationary" ? mc::sde_simulate_stationary(cfg, cpc(x0))
                                          : mc::sde_simulate_free(cfg, cpc(x0));
    const auto s = mc::summarize(res);
    py::dict out;
    out["mean"] = s.mean;
    out["var"] = s.var;
    out["se_mean"] = s.se_mean;
    out["dt_used"] = res.dt_used;
    out["violation_rate"] = res.violation_rate;
    return out;
  }, py::arg("mode"), py::arg("beta"), py::arg("x0"), py::arg("t_end"), py::arg("dt") = 1e-3,
     py::arg("n_paths") = 1000, py::arg("seed") = 0);
}
