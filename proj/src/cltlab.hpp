#pragma once

#include <array>
#include <complex>
#include <vector>

#include "montecarlo.hpp"
#include "rng.hpp"

namespace polywind::cltlab {

/// Brackets of the martingale parts S^(n), C^(n) of a sum of n unit circle
/// Brownian motions started at angle 0, sampled on a uniform grid.
struct QvPath {
  std::vector<double> times;
  std::vector<double> qv_s;   // (1/n) int sum sin^2 B_k
  std::vector<double> qv_c;   // (1/n) int sum cos^2 B_k
  std::vector<double> qv_sc;  // -(1/2n) int sum sin 2B_k
};

/// Left Riemann sums of the bracket integrands along one simulated family of
/// n Brownian angles.
QvPath empirical_qv(int n, double t_end, double dt, Rng& rng);

/// Large-n limits (t/2 - (1 - e^{-2t})/4, t/2 + (1 - e^{-2t})/4, 0).
std::array<double, 3> theory_qv(double t);

struct QvDeviation {
  double s = 0.0;
  double c = 0.0;
  double sc = 0.0;
  double sum_identity = 0.0;  // sup |qv_s + qv_c - t|
};

/// Sup-norm distances of an empirical path from theory_qv on its grid.
QvDeviation sup_deviation(const QvPath& path);

/// One Euler path of the limit process on [0, t_end]:
/// e^{-t/2} (int sqrt(sinh s) d delta_s + i int sqrt(cosh s) d delta~_s),
/// volatilities frozen at the left end of each step. Element k is time k*dt.
std::vector<std::complex<double>> sample_limit_Z(double t_end, double dt, Rng& rng);

/// Var Re Z_t = e^{-t}(cosh t - 1) and Var Im Z_t = e^{-t} sinh t.
std::array<double, 2> limit_variances(double t);

/// Sample moments of a complex variable, each with its standard error.
struct MomentReport {
  std::size_t samples = 0;
  double mean_re = 0.0, mean_re_se = 0.0;
  double mean_im = 0.0, mean_im_se = 0.0;
  double var_re = 0.0, var_re_se = 0.0;
  double var_im = 0.0, var_im_se = 0.0;
  double cov = 0.0, cov_se = 0.0;
  // Limit-process values the sample is compared with.
  double theory_var_re = 0.0;
  double theory_var_im = 0.0;
};

MomentReport moments(const std::vector<std::complex<double>>& values, double t);

/// Moments of Z_t^(infinity) over mc.replicates Euler paths of step mc.dt.
MomentReport limit_Z_moments(double t, const McConfig& mc);

/// Moments of Z_t^(n) = n^{-1/2} sum_k (exp(i B_k(t)) - e^{-t/2}) for a
/// stretched start, one draw of n angles per replicate.
MomentReport compare_Zn_to_limit(int n, double t, const McConfig& mc);

}  // namespace polywind::cltlab
