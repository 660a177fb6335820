#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gateways/km_nd.hpp"
#include "gateways/links.hpp"
#include "gateways/weyl.hpp"

namespace gateways::checks {

// One evaluation of an identity at one grid point. Both sides are computed
// through disjoint code paths (quadrature vs summation, determinant vs
// factored form); `bound` is the propagated numerical error bound.
struct ResidualPoint {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool use_relative = false;  // which residual the tolerance applies to
  bool pass = false;

  double residual() const { return use_relative ? rel_residual : abs_residual; }
};

ResidualPoint make_point(std::string label, double lhs, double rhs, double bound, double tol,
                         bool use_relative = false);

struct CheckReport {
  std::string identity_name;
  std::vector<ResidualPoint> grid;
  double tolerance = 0.0;  // loosest per-point tolerance, for display
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  double propagated_bound = 0.0;
  bool pass = false;
  double wall_time_s = 0.0;

  void finalize();
};

// --- Andreif / Cauchy-Binet reduction ---------------------------------------
//
// Matrix of pairwise 1D inner products: entries int f_i(z) g_j(z) dz over
// [0, inf), or sum_w f_i(w) g_j(w) over {0..cap}. Summing/integrating a
// product of two N x N determinants over the ordered chamber equals the
// determinant of this matrix; every N >= 2 identity below reduces to it.
struct PairwiseMatrix {
  Eigen::MatrixXd m;
  Eigen::MatrixXd bound;
};

PairwiseMatrix andreif_compose(const std::vector<std::function<double(double)>>& f,
                               const std::vector<std::function<double(double)>>& g,
                               double upper_hint, double abs_tol);
PairwiseMatrix andreif_compose(const std::vector<std::function<double(long long)>>& f,
                               const std::vector<std::function<double(long long)>>& g,
                               long long cap);

// --- intertwinings -----------------------------------------------------------

// Free gateway: both sides of (Q_t Lambda)(x, y) = (Lambda Qd_t)(x, y).
ResidualPoint check_intertwining_free(double beta, double t, const ChamberPointC& x,
                                      const ChamberPointD& y);

// Opposite direction: densities of (Qd_t Lambda*)(y, dx) and (Lambda* Q_t)(y, dx)
// compared at the interior point x.
ResidualPoint check_intertwining_star(double beta, double t, const ChamberPointD& y,
                                      const ChamberPointC& x);

// Stationary gateway: (K_t Lambda_sigma)(x, y) = (Lambda_sigma Kd_t)(x, y).
ResidualPoint check_intertwining_stationary(double beta, double sigma, double t,
                                            const ChamberPointC& x, const ChamberPointD& y);

// --- factorizations at t = 1 -------------------------------------------------

// Lambda Lambda* composed (Andreif route; direct chamber sum at N <= 2)
// against the non-colliding free density at t = 1.
ResidualPoint check_factorization_continuous(double beta, const ChamberPointC& x,
                                             const ChamberPointC& y);
// Lambda* Lambda composed (quadrature route) against the non-intersecting
// free chain kernel at t = 1.
ResidualPoint check_factorization_discrete(double beta, const ChamberPointD& x,
                                           const ChamberPointD& y);

// --- invariance ---------------------------------------------------------------

ResidualPoint check_invariance_laguerre(double beta, double t, const ChamberPointC& y);
ResidualPoint check_invariance_meixner(double beta, double sigma, double t,
                                       const ChamberPointD& y);

// --- pushforward ---------------------------------------------------------------

// [nu^N Lambda_sigma](y) against the Meixner pmf, via the Andreif route;
// with_direct_route adds the 2D ordered-chamber quadrature (N == 2 only)
// and includes the route disagreement in the residual.
ResidualPoint check_pushforward(double beta, double sigma, const ChamberPointD& y,
                                bool with_direct_route = false);

// --- normalizations ------------------------------------------------------------

ResidualPoint check_lambda_normalization(const ChamberPointC& x);
ResidualPoint check_lambda_star_normalization(double beta, const ChamberPointD& y);

// --- 1D analytic certificates ---------------------------------------------------

ResidualPoint check_generator_besq(double beta, double t, double x, double y);
ResidualPoint check_generator_cir(double beta, double t, double x, double y);

ResidualPoint check_chapman_kolmogorov_besq(double beta, double s, double t, double x, double y);
ResidualPoint check_chapman_kolmogorov_cir(double beta, double s, double t, double x, double y);
ResidualPoint check_chapman_kolmogorov_bd_free(double beta, double s, double t, long long x,
                                               long long y);
ResidualPoint check_chapman_kolmogorov_bd_stat(double beta, double sigma, double s, double t,
                                               long long x, long long y);

ResidualPoint check_detailed_balance_besq(double beta, double t, double x, double y);
ResidualPoint check_detailed_balance_cir(double beta, double t, double x, double y);
ResidualPoint check_detailed_balance_bd_stat(double beta, double sigma, double t, long long x,
                                             long long y);

// --- boundary continuity ----------------------------------------------------

struct BoundaryReport {
  std::vector<double> gaps;
  std::vector<double> values;
  double extrapolated = 0.0;
  double cauchy_gap = 0.0;  // change of the last extrapolation refinement
  bool converged = false;
};

// Polynomial extrapolation of f(gap) to gap -> 0 over a decreasing sequence.
BoundaryReport extrapolate_to_zero(const std::vector<double>& gaps,
                                   const std::vector<double>& values, double tol);

// Perturb the tied coordinates of x upward by the gap, evaluate the
// determinant branch of the link, extrapolate, compare against the factored
// (Schur) value at the tie.
ResidualPoint check_boundary_lambda(const ChamberPointC& x_boundary, const ChamberPointD& y);

// Same perturbation for the continuous N-dimensional kernels; the check is
// that the extrapolants form a Cauchy sequence within tol.
ResidualPoint check_boundary_continuous(bool stationary, double beta, double t,
                                        const ChamberPointC& x_boundary, const ChamberPointC& y);

// --- suite driver -------------------------------------------------------------

struct SuiteOptions {
  int n_max = 3;
  std::vector<std::string> identities;  // empty = every identity
  int threads = 0;                      // 0 = hardware concurrency
  std::vector<double> betas{0.5, 1.0, 2.5};
  std::vector<double> sigmas{0.5, 1.0, 2.0};
  std::vector<double> times{0.1, 0.5, 1.0, 2.0};
};

struct SuiteResult {
  std::vector<CheckReport> reports;
  bool all_pass = false;
};

const std::vector<std::string>& identity_names();
SuiteResult run_suite(const SuiteOptions& opts);

std::string to_json(const SuiteResult& result, const std::string& config_json = "{}");
std::string to_table(const SuiteResult& result);

}  // namespace gateways::checks
