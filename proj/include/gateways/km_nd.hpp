#pragma once

#include "gateways/kernels1d.hpp"
#include "gateways/weyl.hpp"

namespace gateways {

struct KernelEval {
  double value = 0.0;
  double error_bound = 0.0;  // propagated 1D truncation/quadrature bounds
};

// Non-colliding free diffusion: [Delta(y)/Delta(x)] det(q_t(x_i, y_j)).
// x must be interior; boundary values are served by the extrapolation in
// the checks module, not here.
KernelEval besq_nd_density(double beta, double t, const ChamberPointC& x, const ChamberPointC& y);

// Non-colliding stationary diffusion:
// e^{N(N-1)t/2} [Delta(y)/Delta(x)] det(k_t(x_i, y_j)).
KernelEval cir_nd_density(double beta, double t, const ChamberPointC& x, const ChamberPointC& y);

// Non-intersecting free chains, truncation passed through to the 1D rows.
// truncation <= 0 selects it adaptively.
KernelEval bd_nd_free_prob(double beta, double t, const ChamberPointD& x, const ChamberPointD& y,
                           int truncation = 0);

// Non-intersecting stationary chains, with the e^{N(N-1)t/2} prefactor.
KernelEval bd_nd_stat_prob(double beta, double sigma, double t, const ChamberPointD& x,
                           const ChamberPointD& y, int truncation = 0);

// Shared assembly used by the discrete kernels when a caller already holds
// uniformization rows: [Delta(y)/Delta(x)] (prefactor) det(rows[i][y_j]).
KernelEval bd_nd_from_rows(const std::vector<const BirthDeathKernel::Row*>& rows,
                           const ChamberPointD& x, const ChamberPointD& y, double log_prefactor);

}  // namespace gateways
