#ifndef COMBTANGLE_H
#define COMBTANGLE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(COMBTANGLE_BUILDING_LIBRARY)
#define CT_API __declspec(dllexport)
#else
#define CT_API __declspec(dllimport)
#endif
#else
#define CT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ct_status {
  CT_OK = 0,
  CT_ERR_NULL_ARGUMENT = 1,
  CT_ERR_DOMAIN = 2,
  CT_ERR_SPEC = 3,
  CT_ERR_UNSUPPORTED_REGIME = 4,
  CT_ERR_NO_STEADY_STATE = 5,
  CT_ERR_DIVERGENCE = 6,
  CT_ERR_LOOKUP = 7,
  CT_ERR_IO = 8,
  CT_ERR_ADIABATICITY = 9,
  CT_ERR_INTERNAL = 10
} ct_status;

typedef struct ct_scenario ct_scenario;
typedef struct ct_sweep ct_sweep;
typedef struct ct_wigner ct_wigner;

CT_API const char* ct_version(void);
CT_API const char* ct_status_name(ct_status status);
/* Message of the last failed call on this thread; "" when none. */
CT_API const char* ct_last_error(void);
/* Frees strings returned through char** out-parameters. */
CT_API void ct_string_free(char* s);

/* Scenarios. Keys are "section.key" in file units, e.g. "dissipation.kappa_r_MHz". */
CT_API ct_status ct_scenario_defaults(ct_scenario** out);
CT_API ct_status ct_scenario_parse(const char* text, ct_scenario** out);
CT_API ct_status ct_scenario_load(const char* path, ct_scenario** out);
CT_API ct_status ct_scenario_clone(const ct_scenario* s, ct_scenario** out);
CT_API ct_status ct_scenario_set(ct_scenario* s, const char* key, double value);
CT_API ct_status ct_scenario_get(const ct_scenario* s, const char* key, double* value);
/* Drops direct G_p, G_q so couplings follow from the drive again. */
CT_API ct_status ct_scenario_clear_direct_couplings(ct_scenario* s);
CT_API ct_status ct_scenario_render(const ct_scenario* s, char** text);
CT_API ct_status ct_scenario_hash(const ct_scenario* s, char** hex);
CT_API void ct_scenario_free(ct_scenario* s);

/* Single-point analyses; results are JSON documents. */
CT_API ct_status ct_steady_json(const ct_scenario* s, double phi_r, char** json);
/* numerical_failure (optional) is set to 1 when the point failed numerically. */
CT_API ct_status ct_point_json(const ct_scenario* s, char** json, int* numerical_failure);
/* Probe readout of the p and q teeth; rates in MHz (nu = omega / 2pi). */
CT_API ct_status ct_readout_json(const ct_scenario* s, double g_MHz, double kappa_c_MHz,
                                 double n_c, char** json);
/* n_trajectories, dt_s and t_end_s may be 0 for defaults. threads 0 uses all cores. */
CT_API ct_status ct_oracle_json(const ct_scenario* s, size_t n_trajectories, double dt_s,
                                double t_end_s, uint64_t seed, unsigned threads, char** json);

/* Closed-form measures on a row-major 4x4 two-mode covariance matrix. */
CT_API ct_status ct_log_negativity(const double v[16], double* e_n);
CT_API ct_status ct_steering(const double v[16], double* s12, double* s21);
CT_API ct_status ct_thermal_occupation(double nu_GHz, double temperature_K, double* n);

/* Sweeps. A sweep is built from a preset or axis by axis, then run. */
CT_API ct_status ct_preset_names(char** json_array);
/* range may be NULL; base may be NULL for the baseline defaults. */
CT_API ct_status ct_sweep_from_preset(const char* name, const double* range,
                                      const ct_scenario* base, ct_sweep** out);
CT_API ct_status ct_sweep_new(const ct_scenario* base, const char* name, ct_sweep** out);
CT_API ct_status ct_sweep_add_axis(ct_sweep* sw, const char* variable, double start, double stop,
                                   size_t points);
CT_API ct_status ct_sweep_add_output(ct_sweep* sw, const char* output);
/* anchor is "ratio_GqGp" or "ratio_kqkp". */
CT_API ct_status ct_sweep_set_anchor(ct_sweep* sw, const char* anchor, double value);
CT_API ct_status ct_sweep_run(ct_sweep* sw, unsigned threads);
CT_API ct_status ct_sweep_rows(const ct_sweep* sw, size_t* rows);
CT_API ct_status ct_sweep_failed_points(const ct_sweep* sw, size_t* failed);
/* NaN for a gated (null) entry. */
CT_API ct_status ct_sweep_value(const ct_sweep* sw, size_t row, const char* output, double* value);
CT_API ct_status ct_sweep_csv(const ct_sweep* sw, char** csv);
CT_API ct_status ct_sweep_json(const ct_sweep* sw, char** json);
CT_API ct_status ct_sweep_caption(const ct_sweep* sw, char** caption);
CT_API void ct_sweep_free(ct_sweep* sw);

/* Wigner marginals of the (p, q) pair. */
CT_API ct_status ct_wigner_from_preset(const char* name, const ct_scenario* base, ct_wigner** out);
/* pairs like "X_p:Y_p,X_q:Y_q"; NULL for all four figure pairs. */
CT_API ct_status ct_wigner_new(const ct_scenario* s, const char* pairs, ct_wigner** out);
CT_API ct_status ct_wigner_set_grid(ct_wigner* w, size_t resolution, double extent_sigmas);
CT_API ct_status ct_wigner_run(ct_wigner* w);
CT_API ct_status ct_wigner_count(const ct_wigner* w, size_t* n);
/* "X_p-Y_p" style label of marginal i. */
CT_API ct_status ct_wigner_label(const ct_wigner* w, size_t i, char** label);
CT_API ct_status ct_wigner_grid_csv(const ct_wigner* w, size_t i, char** csv);
CT_API ct_status ct_wigner_json(const ct_wigner* w, char** json);
CT_API void ct_wigner_free(ct_wigner* w);

#ifdef __cplusplus
}
#endif

#endif
