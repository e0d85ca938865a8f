#include "cltlab.hpp"

#include <cmath>

#include "error.hpp"
#include "parallel.hpp"

namespace polywind::cltlab {

QvPath empirical_qv(int n, double t_end, double dt, Rng& rng) {
  require(n >= 1, "empirical_qv needs n >= 1");
  require(t_end >= 0.0 && dt > 0.0, "empirical_qv needs t_end >= 0 and dt > 0");
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  const double sigma = std::sqrt(dt);
  const double inv_n = 1.0 / n;

  QvPath path;
  path.times.resize(steps + 1);
  path.qv_s.assign(steps + 1, 0.0);
  path.qv_c.assign(steps + 1, 0.0);
  path.qv_sc.assign(steps + 1, 0.0);

  std::vector<double> angles(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    double s2 = 0.0, c2 = 0.0, s2b = 0.0;
    for (double b : angles) {
      const double s = std::sin(b);
      const double c = std::cos(b);
      s2 += s * s;
      c2 += c * c;
      s2b += 2.0 * s * c;
    }
    path.times[i + 1] = static_cast<double>(i + 1) * dt;
    path.qv_s[i + 1] = path.qv_s[i] + dt * s2 * inv_n;
    path.qv_c[i + 1] = path.qv_c[i] + dt * c2 * inv_n;
    path.qv_sc[i + 1] = path.qv_sc[i] - 0.5 * dt * s2b * inv_n;
    for (auto& b : angles) b += sigma * rng.gaussian();
  }
  return path;
}

std::array<double, 3> theory_qv(double t) {
  require(t >= 0.0, "theory_qv needs t >= 0");
  const double transient = -0.25 * std::expm1(-2.0 * t);
  return {0.5 * t - transient, 0.5 * t + transient, 0.0};
}

QvDeviation sup_deviation(const QvPath& path) {
  QvDeviation d;
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const auto th = theory_qv(path.times[i]);
    d.s = std::max(d.s, std::abs(path.qv_s[i] - th[0]));
    d.c = std::max(d.c, std::abs(path.qv_c[i] - th[1]));
    d.sc = std::max(d.sc, std::abs(path.qv_sc[i] - th[2]));
    d.sum_identity = std::max(d.sum_identity, std::abs(path.qv_s[i] + path.qv_c[i] - path.times[i]));
  }
  return d;
}

namespace {

struct Volatilities {
  std::vector<double> re, im;  // sqrt(sinh s) sqrt(dt), sqrt(cosh s) sqrt(dt) at left endpoints
};

Volatilities volatilities(std::size_t steps, double dt) {
  Volatilities v;
  v.re.resize(steps);
  v.im.resize(steps);
  const double root_dt = std::sqrt(dt);
  for (std::size_t i = 0; i < steps; ++i) {
    const double s = static_cast<double>(i) * dt;
    v.re[i] = std::sqrt(std::sinh(s)) * root_dt;
    v.im[i] = std::sqrt(std::cosh(s)) * root_dt;
  }
  return v;
}

std::size_t grid_steps(double t_end, double dt) {
  require(t_end > 0.0 && dt > 0.0, "limit process needs t_end > 0 and dt > 0");
  return static_cast<std::size_t>(std::max(1.0, std::round(t_end / dt)));
}

}  // namespace

std::vector<std::complex<double>> sample_limit_Z(double t_end, double dt, Rng& rng) {
  const std::size_t steps = grid_steps(t_end, dt);
  const double h = t_end / static_cast<double>(steps);
  const auto vol = volatilities(steps, h);
  std::vector<std::complex<double>> path(steps + 1);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    re += vol.re[i] * rng.gaussian();
    im += vol.im[i] * rng.gaussian();
    const double damp = std::exp(-0.5 * static_cast<double>(i + 1) * h);
    path[i + 1] = {damp * re, damp * im};
  }
  return path;
}

std::array<double, 2> limit_variances(double t) {
  require(t >= 0.0, "limit_variances needs t >= 0");
  const double e = std::exp(-t);
  return {e * (std::cosh(t) - 1.0), e * std::sinh(t)};
}

MomentReport moments(const std::vector<std::complex<double>>& values, double t) {
  require(values.size() >= 2, "moments need at least two samples");
  const double n = static_cast<double>(values.size());
  MomentReport r;
  r.samples = values.size();
  for (const auto& z : values) {
    r.mean_re += z.real();
    r.mean_im += z.imag();
  }
  r.mean_re /= n;
  r.mean_im /= n;

  double m2x = 0, m2y = 0, mxy = 0, m4x = 0, m4y = 0, mx2y2 = 0;
  for (const auto& z : values) {
    const double x = z.real() - r.mean_re;
    const double y = z.imag() - r.mean_im;
    m2x += x * x;
    m2y += y * y;
    mxy += x * y;
    m4x += x * x * x * x;
    m4y += y * y * y * y;
    mx2y2 += x * x * y * y;
  }
  m2x /= n; m2y /= n; mxy /= n; m4x /= n; m4y /= n; mx2y2 /= n;

  r.var_re = m2x * n / (n - 1.0);
  r.var_im = m2y * n / (n - 1.0);
  r.cov = mxy * n / (n - 1.0);
  r.mean_re_se = std::sqrt(r.var_re / n);
  r.mean_im_se = std::sqrt(r.var_im / n);
  // Delta-method standard errors of the second moments.
  r.var_re_se = std::sqrt(std::max(0.0, m4x - m2x * m2x) / n);
  r.var_im_se = std::sqrt(std::max(0.0, m4y - m2y * m2y) / n);
  r.cov_se = std::sqrt(std::max(0.0, mx2y2 - mxy * mxy) / n);

  const auto th = limit_variances(t);
  r.theory_var_re = th[0];
  r.theory_var_im = th[1];
  return r;
}

MomentReport limit_Z_moments(double t, const McConfig& mc) {
  validate(mc);
  const std::size_t steps = grid_steps(t, mc.dt);
  const double h = t / static_cast<double>(steps);
  const auto vol = volatilities(steps, h);
  const double damp = std::exp(-0.5 * t);

  std::vector<std::complex<double>> endpoints(mc.replicates);
  parallel_for(mc.replicates, mc.max_workers_hint, [&](std::size_t i) {
    Rng rng(mc.seed, 0, i);
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
      re += vol.re[k] * rng.gaussian();
      im += vol.im[k] * rng.gaussian();
    }
    endpoints[i] = {damp * re, damp * im};
  });
  return moments(endpoints, t);
}

MomentReport compare_Zn_to_limit(int n, double t, const McConfig& mc) {
  validate(mc);
  require(n >= 1, "compare_Zn_to_limit needs n >= 1");
  require(t > 0.0, "compare_Zn_to_limit needs t > 0");
  const double sigma = std::sqrt(t);
  const double mean = std::exp(-0.5 * t);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));

  std::vector<std::complex<double>> values(mc.replicates);
  parallel_for(mc.replicates, mc.max_workers_hint, [&](std::size_t i) {
    Rng rng(mc.seed, 0, i);
    std::complex<double> sum{0.0, 0.0};
    for (int k = 0; k < n; ++k) sum += std::polar(1.0, sigma * rng.gaussian()) - mean;
    values[i] = scale * sum;
  });
  return moments(values, t);
}

}  // namespace polywind::cltlab
