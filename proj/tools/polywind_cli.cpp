#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polywind/polywind.h"

namespace {

enum Exit { kOk = 0, kUsage = 2, kInfeasible = 3, kRuntime = 4 };

struct Flags {
  std::string config;
  std::string out;
  uint64_t seed = 0;
  uint64_t replicates = 0;
  double dt = 0.0;
  unsigned workers = 0;
  bool no_timestamp = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment configuration")->required();
  cmd->add_option("--seed", f.seed, "Override mc.seed");
  cmd->add_option("--out", f.out, "Override the output CSV path");
  cmd->add_option("--replicates", f.replicates, "Override mc.replicates")->check(CLI::PositiveNumber);
  cmd->add_option("--dt", f.dt, "Override mc.dt")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", f.workers, "Worker threads (0: all cores); never changes the output");
  cmd->add_flag("--no-timestamp", f.no_timestamp, "Omit the generation-time comment line");
}

int run(const std::string& subcommand, const CLI::App& cmd, const Flags& f) {
  std::ifstream in(f.config, std::ios::binary);
  if (!in) {
    std::cerr << "polywind: cannot read config " << f.config << "\n";
    return kUsage;
  }
  std::ostringstream text;
  text << in.rdbuf();

  pw_run_overrides ov{};
  if (cmd.count("--out")) ov.output = f.out.c_str();
  ov.has_seed = cmd.count("--seed") > 0;
  ov.seed = f.seed;
  ov.has_replicates = cmd.count("--replicates") > 0;
  ov.replicates = f.replicates;
  ov.has_dt = cmd.count("--dt") > 0;
  ov.dt = f.dt;
  ov.workers = f.workers;
  ov.no_timestamp = f.no_timestamp ? 1 : 0;

  const pw_status status = pw_run_experiment(subcommand.c_str(), text.str().c_str(), &ov);
  if (status == PW_OK) return kOk;
  std::cerr << "polywind: " << pw_last_error_message() << "\n";
  switch (status) {
    case PW_ERR_CONFIG:
    case PW_ERR_INVALID_ARGUMENT: return kUsage;
    case PW_ERR_INFEASIBLE: return kInfeasible;
    default: return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Winding times of a rod polymer around the origin: simulation, quadrature and checks"};
  app.set_version_flag("--version", std::string(pw_version()));
  app.require_subcommand(1);

  Flags flags;
  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry entries[] = {
      {"simulate", "Monte Carlo rotation times (experiments mrt, mmrt, boundary-layer)"},
      {"analytic", "Quadrature constants and closed-form checks (experiment analytic-constants)"},
      {"clt-check", "Fluctuation limit checks (experiment clt-check)"},
      {"validate", "Brownian building-block checks (experiments laplace-check, a-moment)"},
  };
  for (const auto& e : entries) add_flags(app.add_subcommand(e.name, e.help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  for (const auto* sub : app.get_subcommands()) return run(sub->get_name(), *sub, flags);
  return kUsage;
}
