#ifndef POLYWIND_POLYWIND_H
#define POLYWIND_POLYWIND_H

#include <stddef.h>
#include <stdint.h>

#if defined(POLYWIND_BUILDING)
#define PW_API __attribute__((visibility("default")))
#else
#define PW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pw_status {
  PW_OK = 0,
  PW_ERR_INVALID_ARGUMENT = 1,
  PW_ERR_INFEASIBLE = 2, /* n * l0 <= L: the free end cannot wind around the origin */
  PW_ERR_CONFIG = 3,
  PW_ERR_RUNTIME = 4,
  PW_ERR_IO = 5
} pw_status;

/* Message for the last failed call on this thread; "" after a success. */
PW_API const char* pw_last_error_message(void);
PW_API const char* pw_version(void);

/* Polymer model: n rods of length l0 anchored at (L, 0), rotational diffusion D.
   A fresh model starts stretched along the x axis. */
typedef struct pw_model pw_model;

PW_API pw_status pw_model_create(int n, double D, double L, double l0, pw_model** out);
PW_API void pw_model_destroy(pw_model* model);

PW_API pw_status pw_model_set_stretched(pw_model* model);
/* Copies n angles (radians). */
PW_API pw_status pw_model_set_explicit(pw_model* model, const double* angles, size_t count);
/* Angles i.i.d. uniform, redrawn until |winding| < 2pi - epsilon. */
PW_API pw_status pw_model_set_uniform(pw_model* model, double epsilon);
/* Free end placed at total winding phi0 with all beads in a thin layer. */
PW_API pw_status pw_model_set_boundary_layer(pw_model* model, double phi0);

/* c_n = sum_k exp(i theta_k / sqrt(2D)) of the current initial configuration. */
PW_API pw_status pw_model_initial_constant(const pw_model* model, double* re, double* im);

typedef struct pw_mc_config {
  uint64_t replicates;
  double dt;
  double t_max;
  uint64_t seed;
  unsigned workers; /* 0: one per hardware thread */
} pw_mc_config;

/* replicates=300, dt=0.01, t_max=1000, seed=1, workers=0. */
PW_API pw_mc_config pw_mc_config_default(void);

typedef struct pw_estimate {
  double mean;
  double std_error; /* NaN when fewer than two replicates finished */
  uint64_t n_used;
  uint64_t n_timeout;
  uint64_t n_origin_fail;
} pw_estimate;

/* First time the free end winds by 2pi. */
PW_API pw_status pw_mrt_estimate(const pw_model* model, const pw_mc_config* mc, pw_estimate* out);
/* First time any bead that can reach the origin winds by 2pi. */
PW_API pw_status pw_mmrt_estimate(const pw_model* model, const pw_mc_config* mc, pw_estimate* out);

typedef struct pw_analytic_constants {
  double F2pi;
  double G2pi;
  double Q;
  double Q_tilde;
  double c_E;
} pw_analytic_constants;

PW_API pw_status pw_analytic_constants_get(pw_analytic_constants* out);
PW_API pw_status pw_F(double c, double* out);
PW_API pw_status pw_G(double c, double* out);
PW_API pw_status pw_neg_moment_A(double t, double* out);
PW_API pw_status pw_mrt_general(int n, double D, double c_re, double c_im, double* out);
PW_API pw_status pw_mrt_stretched(int n, double D, double* out);
PW_API pw_status pw_mrt_uniform(int n, double D, double* out);

typedef struct pw_run_overrides {
  const char* output; /* NULL: keep the config's */
  int has_seed;
  uint64_t seed;
  int has_replicates;
  uint64_t replicates;
  int has_dt;
  double dt;
  unsigned workers; /* 0: config or hardware default */
  int no_timestamp;
} pw_run_overrides;

/* Validates config_json and writes its CSV. subcommand (simulate, analytic,
   clt-check, validate) must match the experiment; NULL skips that check.
   overrides may be NULL. */
PW_API pw_status pw_run_experiment(const char* subcommand, const char* config_json,
                                   const pw_run_overrides* overrides);

#ifdef __cplusplus
}
#endif

#endif
