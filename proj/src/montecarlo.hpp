#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace polywind {

struct McConfig {
  std::size_t replicates = 300;
  double dt = 0.01;
  double t_max = 1000.0;
  std::uint64_t seed = 1;
  unsigned max_workers_hint = 0;  // 0: hardware concurrency
};

void validate(const McConfig& mc);

/// Mean of a stopping-time (or any per-replicate) estimator. Replicates that
/// time out or fail at the origin are counted but excluded from the mean.
struct McEstimate {
  double mean = 0.0;
  std::optional<double> std_error;  // absent when fewer than two samples were used
  std::size_t n_used = 0;
  std::size_t n_timeout = 0;
  std::size_t n_origin_fail = 0;

  std::size_t replicates() const { return n_used + n_timeout + n_origin_fail; }
  /// More than 1% of the replicates timed out.
  bool timeout_warning() const { return n_timeout * 100 > replicates(); }
};

/// Mean and standard error (sample sd / sqrt(n)) in index order.
McEstimate summarize(std::span<const double> values, std::size_t n_timeout = 0,
                     std::size_t n_origin_fail = 0);

enum class Estimator { FirstRotation, MinRotation };

/// MRT (or MMRT) by Monte Carlo. Replicate i draws from Rng(seed, stream, i),
/// so the result depends only on the inputs, never on scheduling.
McEstimate estimate_rotation_time(const PolymerParams& params, const InitialConfig& config,
                                  const McConfig& mc, Estimator estimator,
                                  std::uint64_t stream = 0);

inline McEstimate estimate_mrt(const PolymerParams& params, const InitialConfig& config,
                               const McConfig& mc, std::uint64_t stream = 0) {
  return estimate_rotation_time(params, config, mc, Estimator::FirstRotation, stream);
}

enum class SweepAxis { N, D, L, Phi0 };

const char* axis_name(SweepAxis axis);
std::optional<SweepAxis> parse_axis(const std::string& name);

struct SweepRow {
  double value = 0.0;
  PolymerParams params;
  InitialConfig config;
  bool feasible = true;
  std::string note;  // why the row was not run
  std::optional<McEstimate> estimate;
};

/// One estimate per value, rows in input order. Infeasible points (n*l0 <= L,
/// unusable phi0, every replicate timed out, ...) are flagged, never dropped.
/// Row r uses stream r + 1.
std::vector<SweepRow> sweep(const PolymerParams& base, SweepAxis axis, std::span<const double> values,
                            const InitialConfig& config, const McConfig& mc,
                            Estimator estimator = Estimator::FirstRotation);

/// Exit time of a standard 1-D Brownian motion from (-c, c) started at 0.
/// Euler steps of size dt with a Brownian-bridge test for excursions between
/// grid points. Returns nullopt if t_max is reached first.
std::optional<double> bm_exit_time(double c, double dt, double t_max, Rng& rng);

struct LaplacePoint {
  double y = 0.0;
  McEstimate empirical;  // of exp(-y^2 T / 2)
  double analytic = 0.0; // 1 / cosh(y c)
};

/// Checks E[exp(-y^2 T/2)] = 1/cosh(yc) for the exit time T of (-c, c). All y
/// share the same exit-time samples.
std::vector<LaplacePoint> laplace_check(double c, std::span<const double> ys, const McConfig& mc);

/// E[1/A_t], A_t = int_0^t exp(2 beta_s) ds, trapezoid rule on a grid of step dt.
McEstimate exp_functional_inverse_moment(double t, const McConfig& mc);

struct RefinementCheck {
  McEstimate coarse;      // grid dt
  McEstimate fine;        // grid dt/2, same paths
  McEstimate difference;  // paired fine - coarse
  /// First-order Richardson bound on the bias of `coarse`: 2 |fine - coarse|.
  double bias_allowance() const;
};

/// Simulates on dt/2 and evaluates both trapezoid rules on each path.
RefinementCheck exp_functional_refinement(double t, const McConfig& mc);

/// Winding time to angle c of a planar Brownian motion started at distance r0
/// from the origin, through the skew product: T = A_{T_gamma} with T_gamma the
/// exit time of the angular motion from (-c, c) and A the clock of the radial
/// part. Clock steps of size h.
std::optional<double> planar_winding_time(double c, double r0, double h, double t_max, Rng& rng);

/// n samples of planar_winding_time (nullopt samples dropped).
std::vector<double> sample_planar_winding_times(double c, double r0, const McConfig& mc);

}  // namespace polywind
