#include "sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "error.hpp"

namespace polywind {

std::optional<double> winding_increment(Complex prev, Complex next, double eps_origin) {
  if (std::abs(prev) <= eps_origin || std::abs(next) <= eps_origin) return std::nullopt;
  // arg(next * conj(prev)) lies in [-pi, pi]; -pi only arises from a signed
  // zero imaginary part and is folded onto +pi.
  double d = std::arg(next * std::conj(prev));
  if (d <= -std::numbers::pi) d = std::numbers::pi;
  return d;
}

std::optional<std::vector<double>> chain_winding(std::span<const double> angles,
                                                 const PolymerParams& p) {
  const auto beads = bead_positions(angles, p);
  const double eps = kOriginTolerance * p.l0;
  std::vector<double> phi(beads.size());
  double acc = 0.0;
  Complex prev{p.L, 0.0};
  for (std::size_t k = 0; k < beads.size(); ++k) {
    if (k == 0 && std::abs(prev) <= eps) {
      // Anchor on the origin: the first bead's angle is measured from the x axis.
      if (std::abs(beads[0]) <= eps) return std::nullopt;
      acc = std::arg(beads[0]);
    } else {
      const auto d = winding_increment(prev, beads[k], eps);
      if (!d) return std::nullopt;
      acc += *d;
    }
    phi[k] = acc;
    prev = beads[k];
  }
  return phi;
}

double initial_winding(std::span<const double> angles, const PolymerParams& p) {
  const auto phi = chain_winding(angles, p);
  require(phi.has_value(), "configuration places a bead on the origin");
  return phi->back();
}

Explicit boundary_layer_config(double phi0, const PolymerParams& p) {
  require(std::isfinite(phi0) && std::abs(phi0) < kTwoPi,
          "boundary-layer start needs |phi0| < 2pi, got " + std::to_string(phi0));
  const double step = phi0 / p.n;
  require(std::abs(step) < std::numbers::pi,
          "boundary-layer start needs |phi0|/n < pi to be laid out with n rods");

  const double c = std::cos(step);
  const double s = std::sin(step);
  Explicit out;
  out.angles.resize(static_cast<std::size_t>(p.n));
  Complex prev{p.L, 0.0};
  double r = p.L;
  for (int k = 1; k <= p.n; ++k) {
    const double disc = p.l0 * p.l0 - r * r * s * s;
    require(disc >= 0.0, "boundary-layer layout infeasible: rods too short for the requested angle");
    r = r * c + std::sqrt(disc);
    require(r > kOriginTolerance * p.l0, "boundary-layer layout passes through the origin");
    const Complex next = std::polar(r, k * step);
    out.angles[static_cast<std::size_t>(k - 1)] = std::arg(next - prev);
    prev = next;
  }

  const double achieved = initial_winding(out.angles, p);
  if (std::abs(achieved - phi0) > 1e-6) {
    fail(ErrorKind::Runtime, "boundary-layer layout missed its target winding: " +
                                 std::to_string(achieved) + " vs " + std::to_string(phi0));
  }
  return out;
}

std::vector<int> eligible_beads(const PolymerParams& p) {
  std::vector<int> out;
  for (int k = 1; k <= p.n; ++k)
    if (k * p.l0 > p.L) out.push_back(k);
  return out;
}

void validate_config(const InitialConfig& config, const PolymerParams& p) {
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Explicit>) {
          require(c.angles.size() == static_cast<std::size_t>(p.n),
                  "explicit configuration lists " + std::to_string(c.angles.size()) +
                      " angles, expected n = " + std::to_string(p.n));
          for (double a : c.angles) require(std::isfinite(a), "explicit angles must be finite");
          const double phi = initial_winding(c.angles, p);
          require(std::abs(phi) < kTwoPi, "explicit configuration is already winding (|phi_n(0)| >= 2pi)");
        } else if constexpr (std::is_same_v<T, UniformRandom>) {
          require(c.epsilon > 0.0 && c.epsilon < kTwoPi, "uniform rejection margin must lie in (0, 2pi)");
        } else if constexpr (std::is_same_v<T, BoundaryLayer>) {
          boundary_layer_config(c.phi0, p);
        }
      },
      config);
}

std::vector<double> realize(const InitialConfig& config, const PolymerParams& p, Rng& rng) {
  const auto n = static_cast<std::size_t>(p.n);
  return std::visit(
      [&](const auto& c) -> std::vector<double> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Stretched>) {
          return std::vector<double>(n, 0.0);
        } else if constexpr (std::is_same_v<T, Explicit>) {
          return c.angles;
        } else if constexpr (std::is_same_v<T, BoundaryLayer>) {
          return boundary_layer_config(c.phi0, p).angles;
        } else {
          constexpr int kMaxAttempts = 100000;
          std::vector<double> angles(n);
          for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
            for (auto& a : angles) a = kTwoPi * rng.uniform();
            const auto phi = chain_winding(angles, p);
            if (phi && std::abs(phi->back()) < kTwoPi - c.epsilon) return angles;
          }
          fail(ErrorKind::Runtime, "uniform initial configuration: rejection sampling did not accept");
        }
      },
      config);
}

WindingState make_state(std::span<const double> angles, const PolymerParams& p,
                        std::span<const int> tracked) {
  const auto phi = chain_winding(angles, p);
  require(phi.has_value(), "initial configuration places a bead on the origin");
  const auto beads = bead_positions(angles, p);

  WindingState st;
  st.angles.assign(angles.begin(), angles.end());
  st.free_end = beads.back();
  st.phi = phi->back();
  st.tracked.assign(tracked.begin(), tracked.end());
  for (int k : st.tracked) {
    require(k >= 1 && k <= p.n, "tracked bead index out of range");
    st.bead_phi.push_back((*phi)[static_cast<std::size_t>(k - 1)]);
    st.bead_position.push_back(beads[static_cast<std::size_t>(k - 1)]);
  }
  return st;
}

StepStatus evolve_step(WindingState& st, const PolymerParams& p, double dt, Rng& rng) {
  const double sigma = std::sqrt(2.0 * p.D * dt);
  const double eps = kOriginTolerance * p.l0;
  for (auto& a : st.angles) a += sigma * rng.gaussian();
  st.t += dt;

  StepStatus status = StepStatus::Ok;
  Complex partial{0.0, 0.0};
  std::size_t next_tracked = 0;
  for (std::size_t k = 0; k < st.angles.size(); ++k) {
    partial += std::polar(1.0, st.angles[k]);
    if (next_tracked < st.tracked.size() &&
        st.tracked[next_tracked] == static_cast<int>(k + 1)) {
      const Complex pos = p.L + p.l0 * partial;
      const auto d = winding_increment(st.bead_position[next_tracked], pos, eps);
      if (d) {
        st.bead_phi[next_tracked] += *d;
      } else {
        status = StepStatus::OriginFailure;
      }
      st.bead_position[next_tracked] = pos;
      ++next_tracked;
    }
  }

  const Complex end = p.L + p.l0 * partial;
  const auto d = winding_increment(st.free_end, end, eps);
  if (d) {
    st.phi += *d;
  } else {
    status = StepStatus::OriginFailure;
  }
  st.free_end = end;
  return status;
}

namespace {

std::uint64_t step_budget(double dt, double t_max) {
  require(std::isfinite(dt) && dt > 0.0, "time step dt must be positive");
  require(std::isfinite(t_max) && t_max >= dt, "t_max must be at least dt");
  return static_cast<std::uint64_t>(std::ceil(t_max / dt - 1e-9));
}

// Fraction of the last step at which a winding path went from `before` to
// `after` and crossed +-2pi.
double crossing_fraction(double before, double after) {
  const double target = after > 0.0 ? kTwoPi : -kTwoPi;
  const double f = (target - before) / (after - before);
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace

StopOutcome first_rotation_time(const PolymerParams& p, std::span<const double> initial_angles,
                                double dt, double t_max, Rng& rng) {
  require(p.D >= 0.0, "diffusion constant must be non-negative");
  const std::uint64_t max_steps = step_budget(dt, t_max);
  WindingState st = make_state(initial_angles, p);
  require(std::abs(st.phi) < kTwoPi, "initial configuration is already winding");

  for (std::uint64_t k = 1; k <= max_steps; ++k) {
    const double before = st.phi;
    if (evolve_step(st, p, dt, rng) == StepStatus::OriginFailure)
      return {StopKind::OriginFailure, k * dt, k};
    if (std::abs(st.phi) >= kTwoPi)
      return {StopKind::Hit, (static_cast<double>(k - 1) + crossing_fraction(before, st.phi)) * dt, k};
  }
  return {StopKind::Timeout, max_steps * dt, max_steps};
}

StopOutcome min_rotation_time(const PolymerParams& p, std::span<const double> initial_angles,
                              double dt, double t_max, Rng& rng) {
  require(p.D >= 0.0, "diffusion constant must be non-negative");
  const std::uint64_t max_steps = step_budget(dt, t_max);
  const auto eligible = eligible_beads(p);
  require(!eligible.empty(), "no bead can reach around the origin (k*l0 > L for no k)");
  WindingState st = make_state(initial_angles, p, eligible);
  for (double phi : st.bead_phi)
    require(std::abs(phi) < kTwoPi, "initial configuration already has a bead wound around the origin");

  std::vector<double> before(st.bead_phi.size());
  for (std::uint64_t k = 1; k <= max_steps; ++k) {
    before = st.bead_phi;
    if (evolve_step(st, p, dt, rng) == StepStatus::OriginFailure)
      return {StopKind::OriginFailure, k * dt, k};
    double first = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < st.bead_phi.size(); ++j)
      if (std::abs(st.bead_phi[j]) >= kTwoPi)
        first = std::min(first, crossing_fraction(before[j], st.bead_phi[j]));
    if (std::isfinite(first)) return {StopKind::Hit, (static_cast<double>(k - 1) + first) * dt, k};
  }
  return {StopKind::Timeout, max_steps * dt, max_steps};
}

double winding_step_heuristic(const PolymerParams& p, double dt) {
  return std::sqrt(2.0 * p.D * dt) * p.n;
}

}  // namespace polywind
