// Command-line front end over the C API.

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "combtangle/combtangle.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_spec = 2;
constexpr int exit_numerical = 3;

struct Failure {
  int code;
};

int exit_code_for(ct_status s) {
  switch (s) {
    case CT_OK: return exit_ok;
    case CT_ERR_NULL_ARGUMENT:
    case CT_ERR_SPEC:
    case CT_ERR_LOOKUP:
    case CT_ERR_IO:
    case CT_ERR_UNSUPPORTED_REGIME:
    case CT_ERR_ADIABATICITY: return exit_spec;
    default: return exit_numerical;
  }
}

void check(ct_status s) {
  if (s == CT_OK) return;
  std::cerr << "combtangle: " << ct_status_name(s) << ": " << ct_last_error() << "\n";
  throw Failure{exit_code_for(s)};
}

void spec_error(const std::string& msg) {
  std::cerr << "combtangle: spec error: " << msg << "\n";
  throw Failure{exit_spec};
}

// Owns a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  ct_string_free(s);
  return out;
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using ScenarioHandle = Handle<ct_scenario, ct_scenario_free>;
using SweepHandle = Handle<ct_sweep, ct_sweep_free>;
using WignerHandle = Handle<ct_wigner, ct_wigner_free>;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "combtangle: cannot write " << path << "\n";
    throw Failure{exit_spec};
  }
  f << text;
  if (!f) {
    std::cerr << "combtangle: write failed for " << path << "\n";
    throw Failure{exit_spec};
  }
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    spec_error("cannot read " + what + " from '" + s + "'");
  }
  return 0.0;
}

struct Options {
  std::string scenario;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  unsigned threads = 1;

  double phi_r = 0.0;
  bool readout = false;
  std::string probe = "1,20,0";
  std::vector<std::string> axes;
  std::string outputs = "E_rp,E_rq,E_pq,S_pq,S_qp,N_p,N_q";
  std::vector<std::string> anchors;
  std::vector<std::string> sets;
  std::string pairs;
  std::size_t resolution = 201;
  double extent = 6.0;
  std::size_t trajectories = 20000;
  double dt = 0.0;
  double t_end = 0.0;
  std::string preset;
  std::string range;
};

void load_scenario(const Options& o, ScenarioHandle& s) {
  if (o.scenario.empty()) {
    check(ct_scenario_defaults(s.out()));
  } else {
    check(ct_scenario_load(o.scenario.c_str(), s.out()));
  }
  for (const std::string& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) spec_error("--set expects section.key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    check(ct_scenario_set(s.get(), key.c_str(), to_double(kv.substr(eq + 1), key)));
  }
}

void write_sweep(const Options& o, ct_sweep* sw, std::uint64_t seed) {
  char* text = nullptr;
  if (o.format == "json") {
    check(ct_sweep_json(sw, &text));
    emit(o.out, take(text));
  } else {
    check(ct_sweep_csv(sw, &text));
    emit(o.out, take(text));
    if (!o.out.empty()) {
      // CSV stays a plain table; provenance goes to a sidecar.
      check(ct_sweep_json(sw, &text));
      const std::string json = take(text);
      const auto rows = json.find("\"rows\"");
      std::string head = json.substr(0, rows);
      while (!head.empty() && (head.back() == ' ' || head.back() == '\n' || head.back() == ','))
        head.pop_back();
      write_file(o.out + ".meta.json",
                 head + ",\n  \"seed\": " + std::to_string(seed) + "\n}\n");
    }
  }
}

int finish_sweep(const Options& o, ct_sweep* sw) {
  check(ct_sweep_run(sw, o.threads));
  write_sweep(o, sw, o.seed);
  std::size_t failed = 0;
  check(ct_sweep_failed_points(sw, &failed));
  if (failed > 0) {
    std::cerr << "combtangle: numerical failure at " << failed << " point(s); results written\n";
    return exit_numerical;
  }
  return exit_ok;
}

int run_wigner_job(const Options& o, ct_wigner* w) {
  check(ct_wigner_set_grid(w, o.resolution, o.extent));
  check(ct_wigner_run(w));
  char* text = nullptr;
  check(ct_wigner_json(w, &text));
  const std::string sidecar = take(text);
  if (o.out.empty()) {
    std::cout << sidecar;
    return exit_ok;
  }
  std::size_t n = 0;
  check(ct_wigner_count(w, &n));
  for (std::size_t i = 0; i < n; ++i) {
    check(ct_wigner_label(w, i, &text));
    const std::string label = take(text);
    check(ct_wigner_grid_csv(w, i, &text));
    write_file(o.out + "_" + label + ".csv", take(text));
  }
  write_file(o.out + ".json", sidecar);
  return exit_ok;
}

int cmd_steady(const Options& o) {
  ScenarioHandle s;
  load_scenario(o, s);
  char* json = nullptr;
  check(ct_steady_json(s.get(), o.phi_r, &json));
  emit(o.out, take(json));
  return exit_ok;
}

int cmd_point(const Options& o) {
  ScenarioHandle s;
  load_scenario(o, s);
  char* json = nullptr;
  int failure = 0;
  check(ct_point_json(s.get(), &json, &failure));
  std::string text = take(json);
  if (o.readout) {
    const auto p = split(o.probe, ',');
    if (p.size() < 2 || p.size() > 3) spec_error("--probe expects g_MHz,kappa_c_MHz[,n_c]");
    const double n_c = p.size() == 3 ? to_double(p[2], "n_c") : 0.0;
    check(ct_readout_json(s.get(), to_double(p[0], "g_MHz"), to_double(p[1], "kappa_c_MHz"), n_c,
                          &json));
    std::string readout = take(json);
    while (!readout.empty() && readout.back() == '\n') readout.pop_back();
    // Splice the readout block into the point object.
    const auto close = text.rfind('}');
    std::string indented;
    for (char c : readout) {
      indented += c;
      if (c == '\n') indented += "  ";
    }
    text = text.substr(0, close);
    while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
    text += ",\n  \"readout\": " + indented + "\n}\n";
  }
  emit(o.out, text);
  return failure ? exit_numerical : exit_ok;
}

int cmd_sweep(const Options& o) {
  if (o.axes.empty() || o.axes.size() > 2) spec_error("sweep needs one or two --axis options");
  ScenarioHandle s;
  load_scenario(o, s);
  SweepHandle sw;
  check(ct_sweep_new(s.get(), "sweep", sw.out()));
  for (const std::string& axis : o.axes) {
    const auto p = split(axis, ':');
    if (p.size() != 4) spec_error("--axis expects variable:start:stop:points, got '" + axis + "'");
    const double points = to_double(p[3], "point count");
    if (!(points >= 0.0) || std::floor(points) != points) spec_error("point count must be an integer");
    check(ct_sweep_add_axis(sw.get(), p[0].c_str(), to_double(p[1], "start"),
                            to_double(p[2], "stop"), static_cast<std::size_t>(points)));
  }
  for (const std::string& out : split(o.outputs, ','))
    check(ct_sweep_add_output(sw.get(), out.c_str()));
  for (const std::string& a : o.anchors) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) spec_error("--anchor expects ratio_GqGp=value or ratio_kqkp=value");
    check(ct_sweep_set_anchor(sw.get(), a.substr(0, eq).c_str(), to_double(a.substr(eq + 1), a)));
  }
  return finish_sweep(o, sw.get());
}

int cmd_wigner(const Options& o) {
  ScenarioHandle s;
  load_scenario(o, s);
  WignerHandle w;
  check(ct_wigner_new(s.get(), o.pairs.empty() ? nullptr : o.pairs.c_str(), w.out()));
  return run_wigner_job(o, w.get());
}

int cmd_oracle(const Options& o) {
  ScenarioHandle s;
  load_scenario(o, s);
  char* json = nullptr;
  check(ct_oracle_json(s.get(), o.trajectories, o.dt, o.t_end, o.seed, o.threads, &json));
  emit(o.out, take(json));
  return exit_ok;
}

int cmd_preset(const Options& o) {
  std::optional<ScenarioHandle> s;
  if (!o.scenario.empty() || !o.sets.empty()) load_scenario(o, s.emplace());
  const ct_scenario* base = s ? s->get() : nullptr;

  if (o.preset == "fig7") {
    WignerHandle w;
    check(ct_wigner_from_preset(o.preset.c_str(), base, w.out()));
    return run_wigner_job(o, w.get());
  }
  std::optional<std::array<double, 2>> range;
  if (!o.range.empty()) {
    const auto p = split(o.range, ':');
    if (p.size() != 2) spec_error("--range expects start:stop");
    range = std::array<double, 2>{to_double(p[0], "range start"), to_double(p[1], "range stop")};
  }
  SweepHandle sw;
  check(ct_sweep_from_preset(o.preset.c_str(), range ? range->data() : nullptr, base, sw.out()));
  return finish_sweep(o, sw.get());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum correlations of magnon frequency comb teeth"};
  app.set_version_flag("--version", std::string(ct_version()));
  app.require_subcommand(1);

  Options o;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario file (INI sections; baseline defaults when absent)");
    sub->add_option("--set", o.sets, "Override a scenario value, section.key=value");
    sub->add_option("--out", o.out, "Output file (stdout when absent)");
    sub->add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  };

  auto* steady = app.add_subcommand("steady", "Mean-field steady state as JSON");
  common(steady);
  steady->add_option("--phi-r", o.phi_r, "Free skyrmion phase used above threshold");

  auto* point = app.add_subcommand("point", "Covariance and correlation measures at one point");
  common(point);
  point->add_flag("--readout", o.readout, "Add the microwave-probe output covariance");
  point->add_option("--probe", o.probe, "Probe g_MHz,kappa_c_MHz[,n_c]")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over one or two axes");
  common(sweep);
  sweep->add_option("--axis", o.axes, "variable:start:stop:points (last axis varies fastest)")
      ->required();
  sweep->add_option("--outputs", o.outputs, "Comma-separated output columns")->capture_default_str();
  sweep->add_option("--anchor", o.anchors, "ratio_GqGp=value or ratio_kqkp=value");

  auto* wigner = app.add_subcommand("wigner", "Wigner marginals of the (p, q) pair");
  common(wigner);
  wigner->add_option("--pairs", o.pairs, "Quadrature pairs, e.g. X_p:Y_p,X_p:X_q");
  wigner->add_option("--resolution", o.resolution, "Grid points per axis")->capture_default_str();
  wigner->add_option("--extent", o.extent, "Grid half-width in standard deviations")->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Monte Carlo check of the steady-state covariance");
  common(oracle);
  oracle->add_option("--trajectories", o.trajectories, "Ensemble size")->capture_default_str();
  oracle->add_option("--dt", o.dt, "Time step in seconds (0: automatic)");
  oracle->add_option("--t-end", o.t_end, "Trajectory length in seconds (0: automatic)");

  auto* preset = app.add_subcommand("preset", "Figure presets");
  common(preset);
  preset->add_option("name", o.preset, "fig2a ... fig7")->required();
  preset->add_option("--range", o.range, "start:stop of the first axis (fig4: kappa_r in MHz)");
  preset->add_option("--resolution", o.resolution, "fig7 grid points per axis")->capture_default_str();
  preset->add_option("--extent", o.extent, "fig7 grid half-width in standard deviations")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_spec;
  }

  try {
    if (*steady) return cmd_steady(o);
    if (*point) return cmd_point(o);
    if (*sweep) return cmd_sweep(o);
    if (*wigner) return cmd_wigner(o);
    if (*oracle) return cmd_oracle(o);
    if (*preset) return cmd_preset(o);
  } catch (const Failure& f) {
    return f.code;
  }
  return exit_spec;
}
