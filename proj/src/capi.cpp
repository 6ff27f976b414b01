#include "combtangle/combtangle.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <string>

#include "combtangle/errors.hpp"
#include "combtangle/gaussian_measures.hpp"
#include "combtangle/readout.hpp"
#include "combtangle/report_json.hpp"
#include "combtangle/scenario.hpp"
#include "combtangle/stochastic_oracle.hpp"
#include "combtangle/sweep.hpp"

#ifndef COMBTANGLE_VERSION
#define COMBTANGLE_VERSION "0.0.0"
#endif

struct ct_scenario {
  combtangle::Scenario value;
};

struct ct_sweep {
  combtangle::SweepSpec spec;
  std::optional<combtangle::SweepResult> result;
};

struct ct_wigner {
  combtangle::WignerJob job;
  std::optional<combtangle::WignerResult> result;
};

namespace {

using namespace combtangle;

thread_local std::string last_error;

ct_status fail(ct_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <class F>
ct_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return CT_OK;
  } catch (const SpecError& e) {
    return fail(CT_ERR_SPEC, e.what());
  } catch (const UnsupportedRegimeError& e) {
    return fail(CT_ERR_UNSUPPORTED_REGIME, e.what());
  } catch (const NoSteadyStateError& e) {
    return fail(CT_ERR_NO_STEADY_STATE, e.what());
  } catch (const DivergenceError& e) {
    return fail(CT_ERR_DIVERGENCE, e.what());
  } catch (const LookupError& e) {
    return fail(CT_ERR_LOOKUP, e.what());
  } catch (const IoError& e) {
    return fail(CT_ERR_IO, e.what());
  } catch (const AdiabaticityError& e) {
    return fail(CT_ERR_ADIABATICITY, e.what());
  } catch (const DomainError& e) {
    return fail(CT_ERR_DOMAIN, e.what());
  } catch (const std::exception& e) {
    return fail(CT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CT_ERR_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define CT_REQUIRE(...)                                                         \
  do {                                                                          \
    const void* ptrs[] = {__VA_ARGS__};                                         \
    for (const void* p : ptrs)                                                  \
      if (!p) return fail(CT_ERR_NULL_ARGUMENT, "required argument is NULL");   \
  } while (0)

Eigen::Matrix4d matrix4(const double v[16]) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = v[4 * i + j];
  return m;
}

std::vector<std::pair<Quadrature, Quadrature>> parse_pairs(std::string_view text) {
  std::vector<std::pair<Quadrature, Quadrature>> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto colon = item.find(':');
    const auto a = parse_quadrature(item.substr(0, colon));
    const auto b = colon == std::string_view::npos ? std::nullopt
                                                   : parse_quadrature(item.substr(colon + 1));
    if (!a || !b) throw SpecError("quadrature pairs look like X_p:Y_p,X_p:X_q");
    out.emplace_back(*a, *b);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  if (out.empty()) throw SpecError("no quadrature pairs given");
  return out;
}

}  // namespace

extern "C" {

const char* ct_version(void) { return COMBTANGLE_VERSION; }

const char* ct_status_name(ct_status status) {
  switch (status) {
    case CT_OK: return "ok";
    case CT_ERR_NULL_ARGUMENT: return "null argument";
    case CT_ERR_DOMAIN: return "domain error";
    case CT_ERR_SPEC: return "spec error";
    case CT_ERR_UNSUPPORTED_REGIME: return "unsupported regime";
    case CT_ERR_NO_STEADY_STATE: return "no steady state";
    case CT_ERR_DIVERGENCE: return "divergence";
    case CT_ERR_LOOKUP: return "lookup error";
    case CT_ERR_IO: return "i/o error";
    case CT_ERR_ADIABATICITY: return "adiabaticity error";
    case CT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ct_last_error(void) { return last_error.c_str(); }

void ct_string_free(char* s) { std::free(s); }

ct_status ct_scenario_defaults(ct_scenario** out) {
  CT_REQUIRE(out);
  return guarded([&] { *out = new ct_scenario{Scenario::baseline()}; });
}

ct_status ct_scenario_parse(const char* text, ct_scenario** out) {
  CT_REQUIRE(text, out);
  return guarded([&] { *out = new ct_scenario{parse_scenario(text)}; });
}

ct_status ct_scenario_load(const char* path, ct_scenario** out) {
  CT_REQUIRE(path, out);
  return guarded([&] { *out = new ct_scenario{load_scenario(path)}; });
}

ct_status ct_scenario_clone(const ct_scenario* s, ct_scenario** out) {
  CT_REQUIRE(s, out);
  return guarded([&] { *out = new ct_scenario{s->value}; });
}

ct_status ct_scenario_set(ct_scenario* s, const char* key, double value) {
  CT_REQUIRE(s, key);
  return guarded([&] { set_scenario_value(s->value, key, value); });
}

ct_status ct_scenario_get(const ct_scenario* s, const char* key, double* value) {
  CT_REQUIRE(s, key, value);
  return guarded([&] { *value = get_scenario_value(s->value, key); });
}

ct_status ct_scenario_clear_direct_couplings(ct_scenario* s) {
  CT_REQUIRE(s);
  s->value.G_p.reset();
  s->value.G_q.reset();
  return CT_OK;
}

ct_status ct_scenario_render(const ct_scenario* s, char** text) {
  CT_REQUIRE(s, text);
  return guarded([&] { *text = copy_string(render_scenario(s->value)); });
}

ct_status ct_scenario_hash(const ct_scenario* s, char** hex) {
  CT_REQUIRE(s, hex);
  return guarded([&] { *hex = copy_string(scenario_hash(s->value)); });
}

void ct_scenario_free(ct_scenario* s) { delete s; }

ct_status ct_steady_json(const ct_scenario* s, double phi_r, char** json) {
  CT_REQUIRE(s, json);
  return guarded([&] {
    s->value.params.validate();
    *json = copy_string(to_json(steady_state(s->value.params, phi_r)).dump(2) + "\n");
  });
}

ct_status ct_point_json(const ct_scenario* s, char** json, int* numerical_failure) {
  CT_REQUIRE(s, json);
  return guarded([&] {
    const PointResult p = evaluate_point(s->value);
    if (numerical_failure) *numerical_failure = p.numerical_failure ? 1 : 0;
    Json j = point_json(p);
    j["scenario_hash"] = scenario_hash(s->value);
    j["version"] = COMBTANGLE_VERSION;
    *json = copy_string(j.dump(2) + "\n");
  });
}

ct_status ct_readout_json(const ct_scenario* s, double g_MHz, double kappa_c_MHz, double n_c,
                          char** json) {
  CT_REQUIRE(s, json);
  return guarded([&] {
    ReadoutChannel ch;
    ch.g = from_MHz(g_MHz);
    ch.kappa_c = from_MHz(kappa_c_MHz);
    ch.input_occupation = n_c;
    ch.validate();
    const PointResult p = evaluate_point(s->value);
    *json = copy_string(readout_json(p, ch, ch).dump(2) + "\n");
  });
}

ct_status ct_oracle_json(const ct_scenario* s, size_t n_trajectories, double dt_s, double t_end_s,
                         uint64_t seed, unsigned threads, char** json) {
  CT_REQUIRE(s, json);
  return guarded([&] {
    const PointResult p = evaluate_point(s->value);
    if (!p.lyapunov) {
      if (p.status == "above_threshold")
        throw UnsupportedRegimeError("oracle: the scenario is above threshold");
      if (p.numerical_failure) throw DomainError(p.status);
      throw NoSteadyStateError("oracle: the scenario has no stable steady state");
    }
    EnsembleSpec spec;
    if (n_trajectories) spec.n_trajectories = n_trajectories;
    spec.dt = dt_s;
    spec.t_end = t_end_s;
    spec.seed = seed;
    spec.threads = threads;
    const EnsembleEstimate est = simulate_ensemble(*p.dynamics, spec);
    Json j = oracle_json(est, *p.lyapunov);
    j["seed"] = seed;
    j["scenario_hash"] = scenario_hash(s->value);
    j["version"] = COMBTANGLE_VERSION;
    *json = copy_string(j.dump(2) + "\n");
  });
}

ct_status ct_log_negativity(const double v[16], double* e_n) {
  CT_REQUIRE(v, e_n);
  return guarded([&] { *e_n = log_negativity(ReducedCM::from_matrix(matrix4(v))).log_negativity; });
}

ct_status ct_steering(const double v[16], double* s12, double* s21) {
  CT_REQUIRE(v, s12, s21);
  return guarded([&] {
    const Steering st = gaussian_steering(ReducedCM::from_matrix(matrix4(v)));
    *s12 = st.s12;
    *s21 = st.s21;
  });
}

ct_status ct_thermal_occupation(double nu_GHz, double temperature_K, double* n) {
  CT_REQUIRE(n);
  return guarded([&] { *n = thermal_occupation(from_GHz(nu_GHz), temperature_K); });
}

ct_status ct_preset_names(char** json_array) {
  CT_REQUIRE(json_array);
  return guarded([&] { *json_array = copy_string(Json(preset_names()).dump()); });
}

ct_status ct_sweep_from_preset(const char* name, const double* range, const ct_scenario* base,
                               ct_sweep** out) {
  CT_REQUIRE(name, out);
  return guarded([&] {
    std::optional<std::pair<double, double>> r;
    if (range) r = std::make_pair(range[0], range[1]);
    std::optional<Scenario> b;
    if (base) b = base->value;
    Preset p = figure_preset(name, r, b);
    if (!std::holds_alternative<SweepSpec>(p))
      throw LookupError(std::string("preset '") + name + "' is a Wigner job, not a sweep");
    *out = new ct_sweep{std::get<SweepSpec>(std::move(p)), std::nullopt};
  });
}

ct_status ct_sweep_new(const ct_scenario* base, const char* name, ct_sweep** out) {
  CT_REQUIRE(base, out);
  return guarded([&] {
    SweepSpec spec;
    spec.base = base->value;
    spec.name = name ? name : "sweep";
    *out = new ct_sweep{std::move(spec), std::nullopt};
  });
}

ct_status ct_sweep_add_axis(ct_sweep* sw, const char* variable, double start, double stop,
                            size_t points) {
  CT_REQUIRE(sw, variable);
  return guarded([&] {
    const auto v = parse_variable(variable);
    if (!v) throw SpecError(std::string("unknown sweep variable '") + variable + "'");
    sw->spec.axes.push_back({*v, start, stop, points});
    sw->result.reset();
  });
}

ct_status ct_sweep_add_output(ct_sweep* sw, const char* output) {
  CT_REQUIRE(sw, output);
  return guarded([&] {
    const auto o = parse_output(output);
    if (!o) throw SpecError(std::string("unknown output '") + output + "'");
    sw->spec.outputs.push_back(*o);
    sw->result.reset();
  });
}

ct_status ct_sweep_set_anchor(ct_sweep* sw, const char* anchor, double value) {
  CT_REQUIRE(sw, anchor);
  return guarded([&] {
    const std::string_view a = anchor;
    if (a == "ratio_GqGp") {
      sw->spec.ratio_GqGp = value;
    } else if (a == "ratio_kqkp") {
      sw->spec.ratio_kqkp = value;
    } else {
      throw SpecError(std::string("unknown anchor '") + anchor + "'");
    }
    sw->result.reset();
  });
}

ct_status ct_sweep_run(ct_sweep* sw, unsigned threads) {
  CT_REQUIRE(sw);
  return guarded([&] { sw->result = run_sweep(sw->spec, threads); });
}

#define CT_REQUIRE_RESULT(sw) \
  if (!(sw)->result) return fail(CT_ERR_SPEC, "sweep has not been run")

ct_status ct_sweep_rows(const ct_sweep* sw, size_t* rows) {
  CT_REQUIRE(sw, rows);
  CT_REQUIRE_RESULT(sw);
  *rows = sw->result->rows.size();
  return CT_OK;
}

ct_status ct_sweep_failed_points(const ct_sweep* sw, size_t* failed) {
  CT_REQUIRE(sw, failed);
  CT_REQUIRE_RESULT(sw);
  *failed = sw->result->failed_points();
  return CT_OK;
}

ct_status ct_sweep_value(const ct_sweep* sw, size_t row, const char* output, double* value) {
  CT_REQUIRE(sw, output, value);
  CT_REQUIRE_RESULT(sw);
  return guarded([&] {
    const auto o = parse_output(output);
    if (!o) throw LookupError(std::string("unknown output '") + output + "'");
    if (row >= sw->result->rows.size()) throw LookupError("row index out of range");
    *value = sw->result->value(row, *o).value_or(std::numeric_limits<double>::quiet_NaN());
  });
}

ct_status ct_sweep_csv(const ct_sweep* sw, char** csv) {
  CT_REQUIRE(sw, csv);
  CT_REQUIRE_RESULT(sw);
  return guarded([&] { *csv = copy_string(sweep_to_csv(*sw->result)); });
}

ct_status ct_sweep_json(const ct_sweep* sw, char** json) {
  CT_REQUIRE(sw, json);
  CT_REQUIRE_RESULT(sw);
  return guarded([&] { *json = copy_string(sweep_to_json(*sw->result)); });
}

ct_status ct_sweep_caption(const ct_sweep* sw, char** caption) {
  CT_REQUIRE(sw, caption);
  return guarded([&] { *caption = copy_string(render_caption(Preset(sw->spec))); });
}

void ct_sweep_free(ct_sweep* sw) { delete sw; }

ct_status ct_wigner_from_preset(const char* name, const ct_scenario* base, ct_wigner** out) {
  CT_REQUIRE(name, out);
  return guarded([&] {
    std::optional<Scenario> b;
    if (base) b = base->value;
    Preset p = figure_preset(name, std::nullopt, b);
    if (!std::holds_alternative<WignerJob>(p))
      throw LookupError(std::string("preset '") + name + "' is a sweep, not a Wigner job");
    *out = new ct_wigner{std::get<WignerJob>(std::move(p)), std::nullopt};
  });
}

ct_status ct_wigner_new(const ct_scenario* s, const char* pairs, ct_wigner** out) {
  CT_REQUIRE(s, out);
  return guarded([&] {
    WignerJob job;
    job.name = "wigner";
    job.scenario = s->value;
    job.pairs = parse_pairs(pairs ? pairs : "X_p:Y_p,X_q:Y_q,X_p:X_q,Y_p:Y_q");
    *out = new ct_wigner{std::move(job), std::nullopt};
  });
}

ct_status ct_wigner_set_grid(ct_wigner* w, size_t resolution, double extent_sigmas) {
  CT_REQUIRE(w);
  if (resolution < 2 || !(extent_sigmas > 0.0))
    return fail(CT_ERR_SPEC, "grid needs at least 2 points per axis and a positive extent");
  w->job.grid = {resolution, extent_sigmas};
  w->result.reset();
  return CT_OK;
}

ct_status ct_wigner_run(ct_wigner* w) {
  CT_REQUIRE(w);
  return guarded([&] { w->result = run_wigner(w->job); });
}

#define CT_REQUIRE_WIGNER(w) \
  if (!(w)->result) return fail(CT_ERR_SPEC, "wigner job has not been run")

ct_status ct_wigner_count(const ct_wigner* w, size_t* n) {
  CT_REQUIRE(w, n);
  CT_REQUIRE_WIGNER(w);
  *n = w->result->grids.size();
  return CT_OK;
}

ct_status ct_wigner_label(const ct_wigner* w, size_t i, char** label) {
  CT_REQUIRE(w, label);
  CT_REQUIRE_WIGNER(w);
  if (i >= w->result->grids.size()) return fail(CT_ERR_LOOKUP, "marginal index out of range");
  const WignerGrid& g = w->result->grids[i];
  return guarded([&] {
    *label = copy_string(std::string(quadrature_name(g.axis1)) + "-" +
                         std::string(quadrature_name(g.axis2)));
  });
}

ct_status ct_wigner_grid_csv(const ct_wigner* w, size_t i, char** csv) {
  CT_REQUIRE(w, csv);
  CT_REQUIRE_WIGNER(w);
  if (i >= w->result->grids.size()) return fail(CT_ERR_LOOKUP, "marginal index out of range");
  return guarded([&] { *csv = copy_string(wigner_grid_csv(w->result->grids[i])); });
}

ct_status ct_wigner_json(const ct_wigner* w, char** json) {
  CT_REQUIRE(w, json);
  CT_REQUIRE_WIGNER(w);
  return guarded([&] { *json = copy_string(wigner_sidecar_json(w->job, *w->result)); });
}

void ct_wigner_free(ct_wigner* w) { delete w; }

}  // extern "C"
