#pragma once

#include <cmath>
#include <functional>

namespace polywind {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double truncation_cutoff = 1e-14;  // drop the tail once the integrand envelope is below this
  int max_intervals = 4000;
};

void validate(const QuadratureSpec& spec);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod error estimate
  int intervals = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod on a finite [a, b]: bisects the
/// panel with the largest error estimate until the total estimate is below
/// max(abs_tol, rel_tol * |value|). Nodes are interior, so integrable endpoint
/// singularities are never evaluated.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec);

/// Smallest x >= start past which a non-increasing envelope stays below
/// cutoff (doubling search followed by bisection). The envelope must
/// eventually decay.
double truncation_point(const Integrand& envelope, double cutoff, double start = 1.0);

/// Integral over [a, inf) of f, truncated where the envelope drops below
/// spec.truncation_cutoff.
QuadratureResult integrate_to_infinity(const Integrand& f, const Integrand& envelope, double a,
                                       const QuadratureSpec& spec);

}  // namespace polywind
