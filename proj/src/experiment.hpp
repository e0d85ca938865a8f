#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "model.hpp"
#include "montecarlo.hpp"
#include "quadrature.hpp"

namespace polywind {

enum class Experiment { Mrt, Mmrt, BoundaryLayer, AnalyticConstants, CltCheck, LaplaceCheck, AMoment };

const char* experiment_name(Experiment e);
std::optional<Experiment> parse_experiment(const std::string& name);
/// CLI subcommand that runs an experiment: simulate, analytic, clt-check or validate.
const char* subcommand_of(Experiment e);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::size_t> replicates;
  std::optional<double> dt;
  std::optional<unsigned> workers;
  bool timestamp = true;
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::N;
  std::vector<double> values;
};

enum class CltMode { Qv, Limit, Zn };

struct CltSpec {
  CltMode mode = CltMode::Qv;
  int n = 2000;
  double t_end = 2.0;
  std::size_t stride = 10;
  std::vector<double> times{2.0};
};

struct LaplaceSpec {
  double c = 0.0;
  std::vector<double> ys{0.5, 1.0};
};

/// A fully resolved, validated experiment description.
struct RunConfig {
  Experiment experiment = Experiment::Mrt;
  PolymerParams params;
  InitialConfig init = Stretched{};
  McConfig mc;
  std::optional<SweepSpec> sweep;
  QuadratureSpec quadrature;
  CltSpec clt;
  LaplaceSpec laplace;
  std::vector<double> a_moment_times{1.0};
  std::string output;
  bool timestamp = true;
};

/// Parses and validates a JSON configuration, applying overrides. Every
/// problem is reported as ErrorKind::Config (or Infeasible for a model with
/// n*l0 <= L) before any simulation starts.
RunConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {});
RunConfig parse_config_text(const std::string& text, const Overrides& overrides = {});

/// Canonical JSON of the resolved configuration (worker count excluded: it
/// never changes results).
nlohmann::json to_json(const RunConfig& config);

/// Runs the experiment and returns the full CSV document.
std::string render_csv(const RunConfig& config);

/// render_csv() written to config.output through a temporary file and rename.
void run(const RunConfig& config);

}  // namespace polywind
