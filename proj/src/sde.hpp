#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace polywind {

/// Points closer than this (in units of l0) to the origin carry no usable
/// argument; tracking stops with an origin failure.
inline constexpr double kOriginTolerance = 1e-9;

/// Principal argument of next/prev in (-pi, pi], or nullopt when either point
/// lies within eps_origin of the origin.
std::optional<double> winding_increment(Complex prev, Complex next, double eps_origin);

/// Continuous winding angle of every bead, accumulated along the chain from
/// the anchor (L, 0). Element k-1 belongs to bead k. nullopt on origin failure.
std::optional<std::vector<double>> chain_winding(std::span<const double> angles,
                                                 const PolymerParams& params);

/// phi_n(0) of a configuration; throws InvalidArgument when a bead sits on the origin.
double initial_winding(std::span<const double> angles, const PolymerParams& params);

/// Explicit layout whose free end has total winding phi0: bead k sits at
/// polar angle k*phi0/n, radii fixed by the rod length (a spiral that settles
/// onto the inscribed polygon around the origin). phi0 = 0 is the stretched chain.
Explicit boundary_layer_config(double phi0, const PolymerParams& params);

/// Beads k (1-based) with k*l0 > L; only these can encircle the origin.
std::vector<int> eligible_beads(const PolymerParams& params);

/// Throws InvalidArgument unless the configuration is usable for params and
/// starts non-winding.
void validate_config(const InitialConfig& config, const PolymerParams& params);

/// Draws one replicate's initial angles. Deterministic configurations ignore rng.
std::vector<double> realize(const InitialConfig& config, const PolymerParams& params, Rng& rng);

struct WindingState {
  double t = 0.0;
  std::vector<double> angles;
  Complex free_end;
  double phi = 0.0;
  std::vector<int> tracked;           // bead indices (1-based) with per-bead winding
  std::vector<double> bead_phi;       // aligned with tracked
  std::vector<Complex> bead_position; // aligned with tracked
};

WindingState make_state(std::span<const double> angles, const PolymerParams& params,
                        std::span<const int> tracked = {});

enum class StepStatus { Ok, OriginFailure };

/// Advances every angle by an independent N(0, 2D dt) increment, recomputes
/// the positions from the angles and accumulates winding. D = 0 is allowed.
StepStatus evolve_step(WindingState& state, const PolymerParams& params, double dt, Rng& rng);

enum class StopKind { Hit, Timeout, OriginFailure };

struct StopOutcome {
  StopKind kind = StopKind::Timeout;
  double tau = 0.0;  // crossing time for Hit, time reached otherwise
  std::uint64_t steps = 0;
};

/// tau_n: first time |phi_n| reaches 2 pi, linearly interpolated inside the
/// final step.
StopOutcome first_rotation_time(const PolymerParams& params, std::span<const double> initial_angles,
                                double dt, double t_max, Rng& rng);

/// First time any eligible bead's winding reaches 2 pi in modulus.
StopOutcome min_rotation_time(const PolymerParams& params, std::span<const double> initial_angles,
                              double dt, double t_max, Rng& rng);

/// sqrt(2 D dt) * n. Large values mean the free end moves far per step.
double winding_step_heuristic(const PolymerParams& params, double dt);

}  // namespace polywind
