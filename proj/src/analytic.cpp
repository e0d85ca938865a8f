#include "analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "error.hpp"

namespace polywind::analytic {

namespace {

using std::numbers::pi;

double sech(double x) { return 1.0 / std::cosh(x); }

// ln(sinh(x)/x), accurate from x -> 0 to overflow range.
double log_sinhc(double x) {
  if (x < 1e-3) {
    const double x2 = x * x;
    return x2 / 6.0 - x2 * x2 / 180.0;
  }
  if (x < 20.0) return std::log(std::sinh(x) / x);
  return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
}

double log_sinh(double x) {
  if (x < 20.0) return std::log(std::sinh(x));
  return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
}

// y coth(pi y / 2), which tends to 2/pi at 0.
double y_coth(double y) {
  if (y < 1e-8) return 2.0 / pi;
  return y / std::tanh(0.5 * pi * y);
}

// int_0^inf ln(z) / cosh(pi z / 2) dz = 2 ln(sqrt(2 pi) Gamma(3/4) / Gamma(1/4)) + ln(2/pi).
double log_moment_of_sech() {
  return 2.0 * std::log(std::sqrt(2.0 * pi) * std::tgamma(0.75) / std::tgamma(0.25)) +
         std::log(2.0 / pi);
}

void require_positive(double x, const char* what) {
  require(std::isfinite(x) && x > 0.0, std::string(what) + " must be positive");
}

}  // namespace

double F(double c, const QuadratureSpec& spec) {
  require_positive(c, "F(c): angle c");
  // ln sinh(cz) = ln c + ln z + ln(sinh(cz)/(cz)). The sech density has unit
  // mass, the log moment is closed-form, and the remaining integrand is smooth.
  auto smooth = [c](double z) { return sech(0.5 * pi * z) * log_sinhc(c * z); };
  auto envelope = [c](double z) { return 2.0 * std::exp(-0.5 * pi * z) * c * z; };
  return std::log(c) + log_moment_of_sech() +
         integrate_to_infinity(smooth, envelope, 0.0, spec).value;
}

double F_prime(double a, const QuadratureSpec& spec) {
  require_positive(a, "F'(a): argument");
  auto f = [a](double z) {
    const double z_coth = z < 1e-8 ? 1.0 / a : z / std::tanh(a * z);
    return z_coth * sech(0.5 * pi * z);
  };
  auto envelope = [a](double z) { return 2.0 * (z + 1.0 / a) * std::exp(-0.5 * pi * z); };
  return integrate_to_infinity(f, envelope, 0.0, spec).value;
}

double G_integrand(double c, double y) { return y_coth(y) * sech(c * y); }

double G(double c, const QuadratureSpec& spec) {
  require_positive(c, "G(c): angle c");
  auto f = [c](double y) { return G_integrand(c, y); };
  auto envelope = [c](double y) { return 2.0 * (y + 2.0 / pi) * std::exp(-c * y); };
  return integrate_to_infinity(f, envelope, 0.0, spec).value;
}

double neg_moment_A(double t, const QuadratureSpec& spec) {
  require_positive(t, "neg_moment_A(t): time");
  require(t >= kMinNegMomentTime, "neg_moment_A(t) diverges like 1/t; refusing t < 1e-4");
  auto f = [t](double y) { return y_coth(y) * std::exp(-0.5 * y * y * t); };
  auto envelope = [t](double y) { return (y + 2.0 / pi) * std::exp(-0.5 * y * y * t); };
  return integrate_to_infinity(f, envelope, 0.0, spec).value;
}

MrtConstants constants(const QuadratureSpec& spec) {
  MrtConstants k;
  k.F2pi = F(2.0 * pi, spec);
  k.G2pi = G(2.0 * pi, spec);
  k.Q = 2.0 * k.F2pi + 2.0 * std::numbers::ln2 + k.c_E;
  k.Q_tilde = k.Q + 0.5 * k.G2pi;
  return k;
}

const MrtConstants& default_constants() {
  static const MrtConstants k = constants();
  return k;
}

double mrt_general(int n, double D, std::complex<double> c_n, const MrtConstants& k) {
  require(n >= 3, "asymptotic MRT formula needs n >= 3");
  require_positive(D, "diffusion constant D");
  const double modulus = std::abs(c_n);
  require(modulus > 0.0, "mrt_general needs c_n != 0; use mrt_uniform for a zero mean configuration");
  const double rn = std::sqrt(static_cast<double>(n));
  return rn / (8.0 * D) *
         (2.0 * std::log(modulus / rn) + 0.5 * k.G2pi * n / (modulus * modulus) + k.Q);
}

double mrt_stretched(int n, double D, const MrtConstants& k) {
  return mrt_general(n, D, {static_cast<double>(n), 0.0}, k);
}

double mrt_uniform(int n, double D, const MrtConstants& k) {
  require(n >= 3, "asymptotic MRT formula needs n >= 3");
  require_positive(D, "diffusion constant D");
  return std::sqrt(static_cast<double>(n)) / (8.0 * D) * k.Q_tilde;
}

double ou_time_change(double t) {
  require(t >= 0.0, "time change needs t >= 0");
  return 0.5 * std::expm1(2.0 * t);
}

double ou_time_change_inverse(double t) {
  require(t >= 0.0, "inverse time change needs t >= 0");
  return 0.5 * std::log1p(2.0 * t);
}

double ou_hitting_expectation(std::span<const double> winding_times) {
  require(!winding_times.empty(), "need at least one winding-time sample");
  double sum = 0.0;
  for (double T : winding_times) {
    require(std::isfinite(T) && T >= 0.0, "winding-time samples must be non-negative");
    sum += std::log(T + 0.5);
  }
  return 0.25 * std::numbers::ln2 + 0.25 * sum / static_cast<double>(winding_times.size());
}

PropositionVariances proposition_variances(const QuadratureSpec& spec) {
  // (sqrt(1 -+ u) - 1)^2 = u^2 / (1 + sqrt(1 -+ u))^2 with u = e^{-2s} avoids
  // the cancellation of the raw integrands at large s.
  auto v1 = [](double s) {
    const double root = std::sqrt(-std::expm1(-2.0 * s));
    return 0.5 * std::exp(-3.0 * s) / ((1.0 + root) * (1.0 + root));
  };
  auto v2 = [](double s) {
    const double root = std::sqrt(1.0 + std::exp(-2.0 * s));
    return 0.5 * std::exp(-3.0 * s) / ((1.0 + root) * (1.0 + root));
  };
  auto envelope = [](double s) { return 0.5 * std::exp(-3.0 * s); };

  PropositionVariances out;
  out.v1 = integrate_to_infinity(v1, envelope, 0.0, spec).value;
  out.v2 = integrate_to_infinity(v2, envelope, 0.0, spec).value;
  out.v1_closed = 0.5 * (pi - 3.0);
  out.v2_closed = std::numbers::sqrt2 - 0.5 - std::asinh(1.0);
  out.v2_literature_closed = -1.0 + 2.0 * std::numbers::sqrt2 - 2.0 * std::asinh(1.0);
  return out;
}

double fg_identity_residual(double c, const QuadratureSpec& spec) {
  require_positive(c, "angle c");
  const double a = pi * pi / (4.0 * c);
  return std::abs(a * F_prime(a, spec) - c * G(c, spec));
}

namespace crosscheck {

namespace {

constexpr double kTol = 1e-13;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Fn>
double finite(Fn f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b, kTol);
}

template <class Fn>
double half_line(Fn f, double a) {
  boost::math::quadrature::exp_sinh<double> rule;
  return rule.integrate(f, a, kInf, kTol);
}

}  // namespace

double F(double c) {
  require_positive(c, "F(c): angle c");
  auto f = [c](double z) { return sech(0.5 * pi * z) * log_sinh(c * z); };
  return finite(f, 0.0, 1.0) + half_line(f, 1.0);
}

double G(double c) {
  require_positive(c, "G(c): angle c");
  auto f = [c](double y) { return y_coth(y) * sech(c * y); };
  return finite(f, 0.0, 1.0) + half_line(f, 1.0);
}

double neg_moment_A(double t) {
  require_positive(t, "neg_moment_A(t): time");
  auto f = [t](double y) { return y_coth(y) * std::exp(-0.5 * y * y * t); };
  return finite(f, 0.0, 1.0) + half_line(f, 1.0);
}

// Variances in the variable u = e^{-2s}: (1/4) int_0^1 u^{-3/2} (sqrt(1 -+ u) - 1)^2 du.
double v1() {
  return finite([](double u) {
    const double r = 1.0 + std::sqrt(1.0 - u);
    return 0.25 * std::sqrt(u) / (r * r);
  }, 0.0, 1.0);
}

double v2() {
  return finite([](double u) {
    const double r = 1.0 + std::sqrt(1.0 + u);
    return 0.25 * std::sqrt(u) / (r * r);
  }, 0.0, 1.0);
}

}  // namespace crosscheck

}  // namespace polywind::analytic
