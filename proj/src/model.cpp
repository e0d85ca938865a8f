#include "model.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "sde.hpp"

namespace polywind {

void validate(const PolymerParams& p) {
  require(p.n >= 1, "polymer needs at least one rod (n >= 1)");
  require(std::isfinite(p.D) && p.D > 0.0, "diffusion constant D must be positive");
  require(std::isfinite(p.L) && p.L >= 0.0, "anchor distance L must be non-negative");
  require(std::isfinite(p.l0) && p.l0 > 0.0, "rod length l0 must be positive");
  if (!can_wind(p)) {
    fail(ErrorKind::Infeasible, "polymer cannot wind around the origin: n*l0 = " +
                                    std::to_string(p.n * p.l0) + " <= L = " + std::to_string(p.L));
  }
}

PolymerParams make_params(int n, double D, double L, double l0) {
  PolymerParams p{n, D, L, l0};
  validate(p);
  return p;
}

ScaledParams rescale(const PolymerParams& p) { return {p.L / p.l0, 2.0 * p.D}; }

const char* config_name(const InitialConfig& config) {
  struct Visitor {
    const char* operator()(const Stretched&) const { return "stretched"; }
    const char* operator()(const Explicit&) const { return "explicit"; }
    const char* operator()(const UniformRandom&) const { return "uniform"; }
    const char* operator()(const BoundaryLayer&) const { return "boundary-layer"; }
  };
  return std::visit(Visitor{}, config);
}

std::vector<Complex> bead_positions(std::span<const double> angles, const PolymerParams& p) {
  require(angles.size() == static_cast<std::size_t>(p.n),
          "angle list has length " + std::to_string(angles.size()) + ", expected n = " +
              std::to_string(p.n));
  std::vector<Complex> out(angles.size());
  Complex partial{0.0, 0.0};
  for (std::size_t k = 0; k < angles.size(); ++k) {
    partial += std::polar(1.0, angles[k]);
    out[k] = p.L + p.l0 * partial;
  }
  return out;
}

namespace {

Complex explicit_constant(std::span<const double> angles, double D) {
  const double scale = 1.0 / std::sqrt(2.0 * D);
  Complex sum{0.0, 0.0};
  for (double theta : angles) sum += std::polar(1.0, theta * scale);
  return sum;
}

}  // namespace

InitialConstant initial_constant(const InitialConfig& config, const PolymerParams& p) {
  Complex c_n = std::visit(
      [&](const auto& c) -> Complex {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Stretched>) {
          return {static_cast<double>(p.n), 0.0};
        } else if constexpr (std::is_same_v<T, UniformRandom>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<T, Explicit>) {
          require(c.angles.size() == static_cast<std::size_t>(p.n),
                  "explicit configuration must list n angles");
          return explicit_constant(c.angles, p.D);
        } else {
          return explicit_constant(boundary_layer_config(c.phi0, p).angles, p.D);
        }
      },
      config);
  return {c_n, c_n / std::sqrt(static_cast<double>(p.n))};
}

Complex mean_free_end(double t_scaled, Complex c_n, double l_tilde) {
  require(t_scaled >= 0.0, "mean_free_end needs t >= 0");
  return l_tilde + c_n * std::exp(-0.5 * t_scaled);
}

}  // namespace polywind
