#pragma once

#include <complex>
#include <span>

#include "quadrature.hpp"

namespace polywind::analytic {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// F(c) = int_0^inf ln(sinh(c z)) / cosh(pi z / 2) dz.
double F(double c, const QuadratureSpec& spec = {});
/// dF/dc at a, by differentiating under the integral sign.
double F_prime(double a, const QuadratureSpec& spec = {});
/// G(c) = int_0^inf y coth(pi y / 2) / cosh(y c) dy = E[1/T] for the winding
/// time T to angle c of planar Brownian motion started at 1.
double G(double c, const QuadratureSpec& spec = {});
/// y coth(pi y / 2) sech(c y); continuous at y = 0 with value 2/pi.
double G_integrand(double c, double y);
/// E[1/A_t] = int_0^inf y exp(-y^2 t / 2) coth(pi y / 2) dy. Refuses t < 1e-4,
/// where the integral grows like 1/t.
double neg_moment_A(double t, const QuadratureSpec& spec = {});

inline constexpr double kMinNegMomentTime = 1e-4;

struct MrtConstants {
  double F2pi = 0.0;
  double G2pi = 0.0;
  double Q = 0.0;        // 2 F(2pi) + 2 ln 2 + c_E
  double Q_tilde = 0.0;  // Q + G(2pi) / 2
  double c_E = kEulerGamma;
};

MrtConstants constants(const QuadratureSpec& spec = {});
/// constants() at the default spec, evaluated once.
const MrtConstants& default_constants();

/// Values quoted in the literature for the same constants; kept for the
/// discrepancy report only, never used in computations.
namespace literature {
inline constexpr double F2pi = 3.84;
inline constexpr double G2pi = 0.167;
inline constexpr double Q_intro = 9.56;
inline constexpr double Q_final = 9.54;
inline constexpr double Q_tilde = 9.62;
inline constexpr double v2_numeric = 0.033;
}  // namespace literature

/// Asymptotic MRT in physical time for a mean initial configuration c_n:
/// sqrt(n)/(8D) [2 ln(|c_n|/sqrt(n)) + (G(2pi)/2) n/|c_n|^2 + Q]. Needs n >= 3,
/// D > 0 and c_n != 0 (use mrt_uniform for a vanishing mean configuration).
double mrt_general(int n, double D, std::complex<double> c_n, const MrtConstants& k = default_constants());
double mrt_stretched(int n, double D, const MrtConstants& k = default_constants());
/// sqrt(n)/(8D) Q_tilde.
double mrt_uniform(int n, double D, const MrtConstants& k = default_constants());

/// alpha(t) = (exp(2t) - 1)/2, the clock turning the OU process into a Brownian motion.
double ou_time_change(double t);
/// alpha^{-1}(t) = ln(1 + 2t)/2.
double ou_time_change_inverse(double t);
/// ln 2 / 4 + mean(ln(T_i + 1/2)) / 4 over Brownian winding-time samples.
double ou_hitting_expectation(std::span<const double> winding_times);

struct PropositionVariances {
  double v1 = 0.0;  // int_0^inf (sqrt(sinh s) - e^{s/2}/sqrt 2)^2 ds
  double v2 = 0.0;  // int_0^inf (sqrt(cosh s) - e^{s/2}/sqrt 2)^2 ds
  double v1_closed = 0.0;  // (pi - 3)/2
  double v2_closed = 0.0;  // sqrt 2 - 1/2 - asinh 1
  /// -1 + 2 sqrt 2 - 2 asinh 1: the closed form quoted in the literature,
  /// which is twice v2.
  double v2_literature_closed = 0.0;
};

PropositionVariances proposition_variances(const QuadratureSpec& spec = {});

/// |a F'(a) - c G(c)| with a = pi^2/(4c).
double fg_identity_residual(double c, const QuadratureSpec& spec = {});

/// Second integration route for every integral above: double-exponential
/// (tanh-sinh / exp-sinh) rules applied to the untransformed integrands, with
/// none of the splitting or truncation used by the primary route.
namespace crosscheck {
double F(double c);
double G(double c);
double neg_moment_A(double t);
double v1();
double v2();
}  // namespace crosscheck

}  // namespace polywind::analytic
