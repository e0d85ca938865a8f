#pragma once

#include <complex>
#include <span>
#include <variant>
#include <vector>

namespace polywind {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Rod chain anchored at (L, 0): n rods of length l0 whose angles diffuse with
/// rotational constant D.
struct PolymerParams {
  int n = 1;
  double D = 1.0;   // 1 / time
  double L = 0.0;   // distance of the fixed end from the origin
  double l0 = 1.0;  // rod length
};

/// Checks n >= 1, D > 0, L >= 0, l0 > 0 (InvalidArgument) and the winding
/// condition n * l0 > L (Infeasible).
void validate(const PolymerParams& params);
PolymerParams make_params(int n, double D, double L, double l0);

inline bool can_wind(const PolymerParams& p) { return p.n * p.l0 > p.L; }

/// Dimensionless geometry and the physical/scaled clock. Angles evolved in
/// scaled time are standard Brownian motions, hence scaled = 2D * physical.
struct ScaledParams {
  double l_tilde = 0.0;
  double time_scale = 1.0;

  double to_scaled(double t) const { return time_scale * t; }
  double to_physical(double t_scaled) const { return t_scaled / time_scale; }
};

ScaledParams rescale(const PolymerParams& params);

// Initial configurations. Angles are physical radians.
struct Stretched {};
struct Explicit {
  std::vector<double> angles;
};
struct UniformRandom {
  double epsilon = 0.1;  // accepted only if |phi_n(0)| < 2pi - epsilon
};
struct BoundaryLayer {
  double phi0 = 0.0;  // target total winding of the free end
};

using InitialConfig = std::variant<Stretched, Explicit, UniformRandom, BoundaryLayer>;

const char* config_name(const InitialConfig& config);

struct InitialConstant {
  Complex c_n;
  Complex c_tilde;  // c_n / sqrt(n)
};

/// Positions X_1..X_n with X_k = L + l0 * sum_{j<=k} exp(i theta_j).
std::vector<Complex> bead_positions(std::span<const double> angles, const PolymerParams& params);

/// Mean initial configuration. Stretched gives n; a uniform ensemble gives 0;
/// an explicit (or boundary-layer) layout gives sum_k exp(i theta_k / sqrt(2D)).
InitialConstant initial_constant(const InitialConfig& config, const PolymerParams& params);

/// E[X_n(t)] in scaled units: l_tilde + c_n exp(-t/2).
Complex mean_free_end(double t_scaled, Complex c_n, double l_tilde);

}  // namespace polywind
