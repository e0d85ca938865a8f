#include "montecarlo.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "parallel.hpp"
#include "sde.hpp"

namespace polywind {

void validate(const McConfig& mc) {
  require(mc.replicates >= 1, "replicates must be at least 1");
  require(std::isfinite(mc.dt) && mc.dt > 0.0, "dt must be positive");
  require(std::isfinite(mc.t_max) && mc.t_max > mc.dt, "t_max must exceed dt");
}

McEstimate summarize(std::span<const double> values, std::size_t n_timeout,
                     std::size_t n_origin_fail) {
  McEstimate est;
  est.n_used = values.size();
  est.n_timeout = n_timeout;
  est.n_origin_fail = n_origin_fail;
  if (values.empty()) return est;

  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return est;
}

McEstimate estimate_rotation_time(const PolymerParams& params, const InitialConfig& config,
                                  const McConfig& mc, Estimator estimator, std::uint64_t stream) {
  validate(params);
  validate(mc);
  validate_config(config, params);

  std::vector<StopOutcome> outcomes(mc.replicates);
  parallel_for(mc.replicates, mc.max_workers_hint, [&](std::size_t i) {
    Rng rng(mc.seed, stream, i);
    const auto angles = realize(config, params, rng);
    outcomes[i] = estimator == Estimator::FirstRotation
                      ? first_rotation_time(params, angles, mc.dt, mc.t_max, rng)
                      : min_rotation_time(params, angles, mc.dt, mc.t_max, rng);
  });

  std::vector<double> hits;
  hits.reserve(outcomes.size());
  std::size_t timeouts = 0, origin = 0;
  for (const auto& o : outcomes) {
    switch (o.kind) {
      case StopKind::Hit: hits.push_back(o.tau); break;
      case StopKind::Timeout: ++timeouts; break;
      case StopKind::OriginFailure: ++origin; break;
    }
  }
  if (hits.empty()) {
    fail(ErrorKind::Runtime, "no replicate completed a rotation (" + std::to_string(timeouts) +
                                 " timeouts, " + std::to_string(origin) + " origin failures)");
  }
  return summarize(hits, timeouts, origin);
}

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::N: return "n";
    case SweepAxis::D: return "D";
    case SweepAxis::L: return "L";
    case SweepAxis::Phi0: return "phi0";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(const std::string& name) {
  if (name == "n") return SweepAxis::N;
  if (name == "D") return SweepAxis::D;
  if (name == "L") return SweepAxis::L;
  if (name == "phi0") return SweepAxis::Phi0;
  return std::nullopt;
}

std::vector<SweepRow> sweep(const PolymerParams& base, SweepAxis axis, std::span<const double> values,
                            const InitialConfig& config, const McConfig& mc, Estimator estimator) {
  validate(mc);
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    SweepRow row;
    row.value = values[r];
    row.params = base;
    row.config = config;
    switch (axis) {
      case SweepAxis::N:
        if (values[r] < 1 || values[r] != std::floor(values[r])) {
          row.feasible = false;
          row.note = "n must be a positive integer";
        }
        row.params.n = static_cast<int>(values[r]);
        break;
      case SweepAxis::D: row.params.D = values[r]; break;
      case SweepAxis::L: row.params.L = values[r]; break;
      case SweepAxis::Phi0: row.config = BoundaryLayer{values[r]}; break;
    }
    if (row.feasible) {
      try {
        row.estimate = estimate_rotation_time(row.params, row.config, mc, estimator, r + 1);
      } catch (const Error& e) {
        row.feasible = false;
        row.note = e.what();
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> bm_exit_time(double c, double dt, double t_max, Rng& rng) {
  require(c > 0.0, "exit interval half-width must be positive");
  require(dt > 0.0, "dt must be positive");
  const double sigma = std::sqrt(dt);
  const double bridge_cut = 18.0 * dt;  // exp(-36) is below double resolution near 1
  double x = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t >= t_max) return std::nullopt;
    const double next = x + sigma * rng.gaussian();
    if (std::abs(next) >= c) {
      const double barrier = next > 0.0 ? c : -c;
      return t + dt * (barrier - x) / (next - x);
    }
    const double up = (c - x) * (c - next);
    const double down = (c + x) * (c + next);
    if (up < bridge_cut || down < bridge_cut) {
      const double p_up = std::exp(-2.0 * up / dt);
      const double p_down = std::exp(-2.0 * down / dt);
      if (rng.uniform() < p_up + p_down - p_up * p_down) return t + 0.5 * dt;
    }
    x = next;
  }
}

std::vector<LaplacePoint> laplace_check(double c, std::span<const double> ys, const McConfig& mc) {
  validate(mc);
  require(c > 0.0, "laplace check needs c > 0");
  for (double y : ys) require(y >= 0.0, "laplace check needs y >= 0");

  std::vector<std::optional<double>> exits(mc.replicates);
  parallel_for(mc.replicates, mc.max_workers_hint, [&](std::size_t i) {
    Rng rng(mc.seed, 0, i);
    exits[i] = bm_exit_time(c, mc.dt, mc.t_max, rng);
  });

  std::vector<LaplacePoint> out;
  for (double y : ys) {
    std::vector<double> values;
    std::size_t timeouts = 0;
    for (const auto& e : exits) {
      if (e) {
        values.push_back(std::exp(-0.5 * y * y * *e));
      } else {
        ++timeouts;
      }
    }
    out.push_back({y, summarize(values, timeouts), 1.0 / std::cosh(y * c)});
  }
  return out;
}

namespace {

struct ExpFunctionalSample {
  double coarse;
  double fine;
};

// Integrates exp(2 beta) over [0, t] with `steps` trapezoid panels; with
// `paired`, the path is simulated on twice as many panels and both sums are
// returned.
ExpFunctionalSample simulate_exp_functional(double t, std::uint64_t steps, bool paired, Rng& rng) {
  const std::uint64_t panels = paired ? 2 * steps : steps;
  const double h = t / static_cast<double>(panels);
  const double sigma = std::sqrt(h);
  double beta = 0.0;
  double e_prev = 1.0;
  double fine = 0.0;
  double coarse = 0.0;
  double e_even = 1.0;
  for (std::uint64_t k = 1; k <= panels; ++k) {
    beta += sigma * rng.gaussian();
    const double e = std::exp(2.0 * beta);
    fine += 0.5 * h * (e_prev + e);
    if (paired && k % 2 == 0) {
      coarse += h * (e_even + e);
      e_even = e;
    }
    e_prev = e;
  }
  return {paired ? coarse : fine, fine};
}

std::uint64_t grid_steps(double t, double dt) {
  return static_cast<std::uint64_t>(std::max(1.0, std::round(t / dt)));
}

}  // namespace

McEstimate exp_functional_inverse_moment(double t, const McConfig& mc) {
  validate(mc);
  require(t > 0.0, "exponential functional needs t > 0");
  const auto steps = grid_steps(t, mc.dt);
  std::vector<double> values(mc.replicates);
  parallel_for(mc.replicates, mc.max_workers_hint, [&](std::size_t i) {
    Rng rng(mc.seed, 0, i);
    values[i] = 1.0 / simulate_exp_functional(t, steps, false, rng).fine;
  });
  return summarize(values);
}

double RefinementCheck::bias_allowance() const { return 2.0 * std::abs(difference.mean); }

RefinementCheck exp_functional_refinement(double t, const McConfig& mc) {
  validate(mc);
  require(t > 0.0, "exponential functional needs t > 0");
  const auto steps = grid_steps(t, mc.dt);
  std::vector<ExpFunctionalSample> samples(mc.replicates);
  parallel_for(mc.replicates, mc.max_workers_hint, [&](std::size_t i) {
    Rng rng(mc.seed, 0, i);
    samples[i] = simulate_exp_functional(t, steps, true, rng);
  });
  std::vector<double> coarse(samples.size()), fine(samples.size()), diff(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    coarse[i] = 1.0 / samples[i].coarse;
    fine[i] = 1.0 / samples[i].fine;
    diff[i] = fine[i] - coarse[i];
  }
  return {summarize(coarse), summarize(fine), summarize(diff)};
}

std::optional<double> planar_winding_time(double c, double r0, double h, double t_max, Rng& rng) {
  require(r0 > 0.0, "planar Brownian motion must start away from the origin");
  const auto clock = bm_exit_time(c, h, t_max, rng);
  if (!clock) return std::nullopt;

  // A_u = int_0^u exp(2 beta_s) ds with beta_0 = ln r0, up to u = T_gamma.
  const double full = std::floor(*clock / h);
  const auto steps = static_cast<std::uint64_t>(full);
  const double rest = *clock - full * h;
  const double sigma = std::sqrt(h);
  double beta = std::log(r0);
  double e_prev = r0 * r0;
  double area = 0.0;
  for (std::uint64_t k = 0; k < steps; ++k) {
    beta += sigma * rng.gaussian();
    const double e = std::exp(2.0 * beta);
    area += 0.5 * h * (e_prev + e);
    e_prev = e;
  }
  if (rest > 0.0) {
    beta += std::sqrt(rest) * rng.gaussian();
    area += 0.5 * rest * (e_prev + std::exp(2.0 * beta));
  }
  return area;
}

std::vector<double> sample_planar_winding_times(double c, double r0, const McConfig& mc) {
  validate(mc);
  std::vector<std::optional<double>> samples(mc.replicates);
  parallel_for(mc.replicates, mc.max_workers_hint, [&](std::size_t i) {
    Rng rng(mc.seed, 0, i);
    samples[i] = planar_winding_time(c, r0, mc.dt, mc.t_max, rng);
  });
  std::vector<double> out;
  for (const auto& s : samples)
    if (s) out.push_back(*s);
  return out;
}

}  // namespace polywind
