#pragma once

#include <functional>
#include <stdexcept>

namespace gateways {

// Raised when an adaptive routine exhausts its budget (quadrature refusing
// to converge, enumeration boxes growing past their cap, ...). The CLI maps
// this to exit code 3.
class NumericalBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // quadrature estimate plus discarded-tail bound
};

// Integral over [a, b] by adaptive Gauss-Kronrod.
QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              double abs_tol);

// Integral over [0, inf) of an integrand with a gamma-type envelope.
// upper_hint locates the bulk of the mass; the cutoff is pushed to the
// right until a measured geometric decay ratio certifies that the
// discarded tail is below abs_tol / 4.
QuadResult integrate_gamma_envelope(const std::function<double(double)>& f, double upper_hint,
                                    double abs_tol);

// Iterated integral of f(x1, x2) over the ordered region 0 <= x1 <= x2,
// with the same envelope-based cutoff in x2.
QuadResult integrate_chamber2(const std::function<double(double, double)>& f, double upper_hint,
                              double abs_tol);

}  // namespace gateways
