#include "polywind/polywind.h"

#include <cmath>
#include <limits>
#include <new>
#include <string>

#include "analytic.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "model.hpp"
#include "montecarlo.hpp"
#include "sde.hpp"

struct pw_model {
  polywind::PolymerParams params;
  polywind::InitialConfig init = polywind::Stretched{};
};

namespace {

thread_local std::string last_error;

pw_status code_of(polywind::ErrorKind kind) {
  switch (kind) {
    case polywind::ErrorKind::InvalidArgument: return PW_ERR_INVALID_ARGUMENT;
    case polywind::ErrorKind::Infeasible: return PW_ERR_INFEASIBLE;
    case polywind::ErrorKind::Config: return PW_ERR_CONFIG;
    case polywind::ErrorKind::Runtime: return PW_ERR_RUNTIME;
    case polywind::ErrorKind::Io: return PW_ERR_IO;
  }
  return PW_ERR_RUNTIME;
}

template <class Fn>
pw_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return PW_OK;
  } catch (const polywind::Error& e) {
    last_error = e.what();
    return code_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PW_ERR_RUNTIME;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PW_ERR_RUNTIME;
  } catch (...) {
    last_error = "unknown error";
    return PW_ERR_RUNTIME;
  }
}

void need(const void* p, const char* name) {
  if (!p) polywind::fail(polywind::ErrorKind::InvalidArgument, std::string(name) + " is NULL");
}

polywind::McConfig to_mc(const pw_mc_config* c) {
  need(c, "mc");
  polywind::McConfig mc;
  mc.replicates = static_cast<std::size_t>(c->replicates);
  mc.dt = c->dt;
  mc.t_max = c->t_max;
  mc.seed = c->seed;
  mc.max_workers_hint = c->workers;
  polywind::validate(mc);
  return mc;
}

void fill(const polywind::McEstimate& e, pw_estimate* out) {
  out->mean = e.mean;
  out->std_error = e.std_error.value_or(std::numeric_limits<double>::quiet_NaN());
  out->n_used = e.n_used;
  out->n_timeout = e.n_timeout;
  out->n_origin_fail = e.n_origin_fail;
}

pw_status estimate(const pw_model* model, const pw_mc_config* mc, pw_estimate* out,
                   polywind::Estimator which) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    fill(polywind::estimate_rotation_time(model->params, model->init, to_mc(mc), which), out);
  });
}

pw_status set_init(pw_model* model, polywind::InitialConfig init) {
  return guarded([&] {
    need(model, "model");
    polywind::validate_config(init, model->params);
    model->init = std::move(init);
  });
}

}  // namespace

extern "C" {

const char* pw_last_error_message(void) { return last_error.c_str(); }
const char* pw_version(void) { return "0.1.0"; }

pw_status pw_model_create(int n, double D, double L, double l0, pw_model** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto params = polywind::make_params(n, D, L, l0);
    *out = new pw_model{params, polywind::Stretched{}};
  });
}

void pw_model_destroy(pw_model* model) { delete model; }

pw_status pw_model_set_stretched(pw_model* model) { return set_init(model, polywind::Stretched{}); }

pw_status pw_model_set_explicit(pw_model* model, const double* angles, size_t count) {
  if (count > 0 && !angles) {
    last_error = "angles is NULL";
    return PW_ERR_INVALID_ARGUMENT;
  }
  return set_init(model, polywind::Explicit{std::vector<double>(angles, angles + count)});
}

pw_status pw_model_set_uniform(pw_model* model, double epsilon) {
  return set_init(model, polywind::UniformRandom{epsilon});
}

pw_status pw_model_set_boundary_layer(pw_model* model, double phi0) {
  return set_init(model, polywind::BoundaryLayer{phi0});
}

pw_status pw_model_initial_constant(const pw_model* model, double* re, double* im) {
  return guarded([&] {
    need(model, "model");
    need(re, "re");
    need(im, "im");
    const auto c = polywind::initial_constant(model->init, model->params);
    *re = c.c_n.real();
    *im = c.c_n.imag();
  });
}

pw_mc_config pw_mc_config_default(void) {
  const polywind::McConfig d;
  return pw_mc_config{d.replicates, d.dt, d.t_max, d.seed, d.max_workers_hint};
}

pw_status pw_mrt_estimate(const pw_model* model, const pw_mc_config* mc, pw_estimate* out) {
  return estimate(model, mc, out, polywind::Estimator::FirstRotation);
}

pw_status pw_mmrt_estimate(const pw_model* model, const pw_mc_config* mc, pw_estimate* out) {
  return estimate(model, mc, out, polywind::Estimator::MinRotation);
}

pw_status pw_analytic_constants_get(pw_analytic_constants* out) {
  return guarded([&] {
    need(out, "out");
    const auto& k = polywind::analytic::default_constants();
    *out = pw_analytic_constants{k.F2pi, k.G2pi, k.Q, k.Q_tilde, k.c_E};
  });
}

pw_status pw_F(double c, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = polywind::analytic::F(c);
  });
}

pw_status pw_G(double c, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = polywind::analytic::G(c);
  });
}

pw_status pw_neg_moment_A(double t, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = polywind::analytic::neg_moment_A(t);
  });
}

pw_status pw_mrt_general(int n, double D, double c_re, double c_im, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = polywind::analytic::mrt_general(n, D, {c_re, c_im});
  });
}

pw_status pw_mrt_stretched(int n, double D, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = polywind::analytic::mrt_stretched(n, D);
  });
}

pw_status pw_mrt_uniform(int n, double D, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = polywind::analytic::mrt_uniform(n, D);
  });
}

pw_status pw_run_experiment(const char* subcommand, const char* config_json, const pw_run_overrides* overrides) {
  return guarded([&] {
    if (!config_json) polywind::fail(polywind::ErrorKind::Config, "config_json is NULL");
    polywind::Overrides ov;
    if (overrides) {
      if (overrides->output) ov.output = overrides->output;
      if (overrides->has_seed) ov.seed = overrides->seed;
      if (overrides->has_replicates) ov.replicates = static_cast<std::size_t>(overrides->replicates);
      if (overrides->has_dt) ov.dt = overrides->dt;
      if (overrides->workers) ov.workers = overrides->workers;
      ov.timestamp = !overrides->no_timestamp;
    }
    const auto cfg = polywind::parse_config_text(config_json, ov);
    if (subcommand && std::string(subcommand) != polywind::subcommand_of(cfg.experiment))
      polywind::fail(polywind::ErrorKind::Config,
                     std::string("experiment ") + polywind::experiment_name(cfg.experiment) + " runs under '" +
                         polywind::subcommand_of(cfg.experiment) + "', not '" + subcommand + "'");
    polywind::run(cfg);
  });
}

}  // extern "C"
