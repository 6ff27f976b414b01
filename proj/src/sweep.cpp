#include "combtangle/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "combtangle/errors.hpp"
#include "combtangle/report_json.hpp"

#ifndef COMBTANGLE_VERSION
#define COMBTANGLE_VERSION "0.0.0"
#endif

namespace combtangle {
namespace {

using constants::G0;

constexpr SweepVariable all_variables[] = {SweepVariable::RatioGqGp, SweepVariable::RatioKqKp,
                                           SweepVariable::KappaR,    SweepVariable::Temperature,
                                           SweepVariable::Gp,        SweepVariable::Drive};

constexpr Output all_outputs[] = {
    Output::E_rp,  Output::E_rq,  Output::E_pq,    Output::S_rp,      Output::S_pr,
    Output::S_rq,  Output::S_qr,  Output::S_pq,    Output::S_qp,      Output::N_r,
    Output::N_p,   Output::N_q,   Output::nu_rp,   Output::nu_rq,     Output::nu_pq,
    Output::xi,    Output::G_tilde, Output::occ_beta1, Output::occ_beta2, Output::abscissa};

bool gated_ok(const PointResult& p) {
  return p.report.has_value() && (p.status == "ok" || p.status == "ill_conditioned");
}

std::optional<double> output_value(const PointResult& p, Output o) {
  if (o == Output::abscissa) {
    if (p.stability) return p.stability->abscissa;
    return std::nullopt;
  }
  if (!gated_ok(p)) return std::nullopt;
  const CorrelationReport& r = *p.report;
  switch (o) {
    case Output::E_rp: return r.pair(Mode::r, Mode::p).log_negativity;
    case Output::E_rq: return r.pair(Mode::r, Mode::q).log_negativity;
    case Output::E_pq: return r.pair(Mode::p, Mode::q).log_negativity;
    case Output::S_rp: return r.steering(Mode::r, Mode::p);
    case Output::S_pr: return r.steering(Mode::p, Mode::r);
    case Output::S_rq: return r.steering(Mode::r, Mode::q);
    case Output::S_qr: return r.steering(Mode::q, Mode::r);
    case Output::S_pq: return r.steering(Mode::p, Mode::q);
    case Output::S_qp: return r.steering(Mode::q, Mode::p);
    case Output::N_r: return r.occupation(Mode::r);
    case Output::N_p: return r.occupation(Mode::p);
    case Output::N_q: return r.occupation(Mode::q);
    case Output::nu_rp: return r.pair(Mode::r, Mode::p).nu;
    case Output::nu_rq: return r.pair(Mode::r, Mode::q).nu;
    case Output::nu_pq: return r.pair(Mode::p, Mode::q).nu;
    case Output::xi:
      if (r.bogoliubov) return r.bogoliubov->xi;
      return std::nullopt;
    case Output::G_tilde:
      if (r.bogoliubov) return to_MHz(r.bogoliubov->G_tilde);
      return std::nullopt;
    case Output::occ_beta1:
      if (r.bogoliubov) return r.bogoliubov->occupancy_beta1;
      return std::nullopt;
    case Output::occ_beta2:
      if (r.bogoliubov) return r.bogoliubov->occupancy_beta2;
      return std::nullopt;
    case Output::abscissa: break;
  }
  return std::nullopt;
}

std::string csv_number(double x) {
  if (!std::isfinite(x)) return {};
  return fmt::format("{:.12g}", x);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string multiplier(double x, std::string_view unit) {
  if (x == 1.0) return std::string(unit);
  return fmt::format("{:g}{}", x, unit);
}

}  // namespace

PointResult evaluate_point(const Scenario& scenario) {
  PointResult out;
  try {
    scenario.params.validate();
    out.semiclassical = steady_state(scenario.params);
    out.couplings = scenario.G_p ? EffectiveCouplings::direct(*scenario.G_p, *scenario.G_q)
                                 : effective_couplings(scenario.params, out.semiclassical.means.k);
    if (out.semiclassical.regime == Regime::AboveThreshold) {
      out.status = "above_threshold";
      return out;
    }
    out.dynamics = build_reduced_drift(out.couplings, scenario.params);
    out.stability = is_stable(*out.dynamics);
    if (out.stability->verdict != Stability::Stable) {
      out.status = std::string(stability_name(out.stability->verdict));
      return out;
    }
    out.lyapunov = solve_lyapunov(*out.dynamics);
    if (!out.lyapunov->physicality.physical)
      throw DomainError("steady-state covariance violates the uncertainty relation");
    if (!(out.lyapunov->residual < 1e-8))
      throw DomainError(fmt::format("Lyapunov residual {:.3g} too large", out.lyapunov->residual));
    out.report = correlation_report(out.lyapunov->cm, out.couplings);
    out.status = out.lyapunov->ill_conditioned ? "ill_conditioned" : "ok";
  } catch (const NoSteadyStateError&) {
    out.status = "unstable";
  } catch (const UnsupportedRegimeError& e) {
    out.status = fmt::format("unsupported: {}", e.what());
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    out.report.reset();
    out.status = fmt::format("error: {}", e.what());
    out.numerical_failure = true;
  }
  return out;
}

std::string_view variable_column(SweepVariable v) {
  switch (v) {
    case SweepVariable::RatioGqGp: return "ratio_GqGp";
    case SweepVariable::RatioKqKp: return "ratio_kqkp";
    case SweepVariable::KappaR: return "kappa_r_MHz";
    case SweepVariable::Temperature: return "T_K";
    case SweepVariable::Gp: return "G_p_G0";
    case SweepVariable::Drive: return "drive_MHz";
  }
  return "?";
}

std::optional<SweepVariable> parse_variable(std::string_view name) {
  for (SweepVariable v : all_variables)
    if (name == variable_column(v)) return v;
  return std::nullopt;
}

double SweepAxis::value(std::size_t i) const {
  if (points < 2) return start;
  if (i + 1 == points) return stop;
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
}

std::string_view output_column(Output o) {
  switch (o) {
    case Output::E_rp: return "E_rp";
    case Output::E_rq: return "E_rq";
    case Output::E_pq: return "E_pq";
    case Output::S_rp: return "S_rp";
    case Output::S_pr: return "S_pr";
    case Output::S_rq: return "S_rq";
    case Output::S_qr: return "S_qr";
    case Output::S_pq: return "S_pq";
    case Output::S_qp: return "S_qp";
    case Output::N_r: return "N_r";
    case Output::N_p: return "N_p";
    case Output::N_q: return "N_q";
    case Output::nu_rp: return "nu_rp";
    case Output::nu_rq: return "nu_rq";
    case Output::nu_pq: return "nu_pq";
    case Output::xi: return "xi";
    case Output::G_tilde: return "G_tilde_MHz";
    case Output::occ_beta1: return "occ_beta1";
    case Output::occ_beta2: return "occ_beta2";
    case Output::abscissa: return "abscissa";
  }
  return "?";
}

std::optional<Output> parse_output(std::string_view name) {
  for (Output o : all_outputs)
    if (name == output_column(o)) return o;
  return std::nullopt;
}

void SweepSpec::validate() const {
  if (axes.empty() || axes.size() > 2) throw SpecError("sweep: one or two axes are required");
  if (axes.size() == 2 && axes[0].variable == axes[1].variable)
    throw SpecError("sweep: the two axes must sweep different variables");
  if (outputs.empty()) throw SpecError("sweep: no outputs requested");
  base.params.validate();

  bool direct = base.G_p.has_value();
  for (const SweepAxis& a : axes) {
    const auto col = variable_column(a.variable);
    if (!std::isfinite(a.start) || !std::isfinite(a.stop))
      throw SpecError(fmt::format("sweep axis {}: range must be finite", col));
    if (a.points < 2) throw SpecError(fmt::format("sweep axis {}: at least 2 points", col));
    const double lo = std::min(a.start, a.stop);
    if (a.variable == SweepVariable::KappaR || a.variable == SweepVariable::RatioKqKp) {
      if (!(lo > 0.0)) throw SpecError(fmt::format("sweep axis {}: values must be positive", col));
    } else if (lo < 0.0) {
      throw SpecError(fmt::format("sweep axis {}: values must be nonnegative", col));
    }
    if (a.variable == SweepVariable::Gp) direct = true;
  }
  for (const SweepAxis& a : axes) {
    if (a.variable == SweepVariable::Drive && direct)
      throw SpecError("sweep: a drive sweep needs drive-derived couplings (no direct G_p, G_q)");
    if (a.variable == SweepVariable::RatioGqGp && !direct)
      throw SpecError("sweep: ratio_GqGp needs direct couplings (G_p in the scenario or a G_p axis)");
  }
  if (ratio_GqGp && (!direct || *ratio_GqGp < 0.0))
    throw SpecError("sweep: the G_q/G_p anchor needs direct couplings and a nonnegative ratio");
  if (ratio_kqkp && !(*ratio_kqkp > 0.0)) throw SpecError("sweep: kappa_q/kappa_p anchor must be positive");
  if (direct && !base.G_p && !ratio_GqGp &&
      std::none_of(axes.begin(), axes.end(),
                   [](const SweepAxis& a) { return a.variable == SweepVariable::RatioGqGp; }))
    throw SpecError("sweep: a G_p axis without direct couplings needs a G_q/G_p anchor");
}

std::size_t SweepSpec::point_count() const {
  std::size_t n = 1;
  for (const SweepAxis& a : axes) n *= a.points;
  return n;
}

std::vector<double> SweepSpec::coordinates_at(std::size_t index) const {
  std::vector<double> c(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    c[k] = axes[k].value(index % axes[k].points);
    index /= axes[k].points;
  }
  return c;
}

Scenario SweepSpec::scenario_at(std::size_t index) const {
  Scenario s = base;
  const std::vector<double> c = coordinates_at(index);
  std::optional<double> gq_ratio = ratio_GqGp;
  std::optional<double> kq_ratio = ratio_kqkp;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const double v = c[k];
    switch (axes[k].variable) {
      case SweepVariable::RatioGqGp: gq_ratio = v; break;
      case SweepVariable::RatioKqKp: kq_ratio = v; break;
      case SweepVariable::KappaR: s.params.kappa_r = from_MHz(v); break;
      case SweepVariable::Temperature: s.params.temperature = v; break;
      case SweepVariable::Gp:
        s.G_p = v * G0;
        if (!s.G_q) s.G_q = 0.0;
        break;
      case SweepVariable::Drive: s.params.drive_amplitude = from_MHz(v); break;
    }
  }
  if (gq_ratio && s.G_p) s.G_q = *gq_ratio * *s.G_p;
  if (kq_ratio) s.params.kappa_q = *kq_ratio * s.params.kappa_p;
  return s;
}

std::vector<std::string> SweepResult::columns() const {
  std::vector<std::string> cols;
  for (const SweepAxis& a : spec.axes) cols.emplace_back(variable_column(a.variable));
  for (Output o : spec.outputs) cols.emplace_back(output_column(o));
  cols.emplace_back("stable");
  cols.emplace_back("regime");
  cols.emplace_back("status");
  return cols;
}

std::size_t SweepResult::failed_points() const {
  std::size_t n = 0;
  for (const SweepRow& r : rows)
    if (r.status.rfind("error", 0) == 0) ++n;
  return n;
}

std::optional<double> SweepResult::value(std::size_t row, Output o) const {
  for (std::size_t k = 0; k < spec.outputs.size(); ++k)
    if (spec.outputs[k] == o) return rows.at(row).values[k];
  throw LookupError(fmt::format("output {} was not requested", output_column(o)));
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  SweepResult result;
  result.spec = spec;
  result.scenario_hash = scenario_hash(spec.base);
  result.version = COMBTANGLE_VERSION;
  const std::size_t n = spec.point_count();
  result.rows.resize(n);

  const auto eval = [&](std::size_t i) {
    const PointResult p = evaluate_point(spec.scenario_at(i));
    SweepRow& row = result.rows[i];
    row.coordinates = spec.coordinates_at(i);
    for (Output o : spec.outputs) row.values.push_back(output_value(p, o));
    row.stable = p.stability && p.stability->stable();
    row.regime = std::string(regime_name(p.semiclassical.regime));
    row.status = p.status;
  };

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) eval(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) eval(i);
          } catch (...) {
            failures[t] = std::current_exception();
          }
        });
      }
    }
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out;
  const auto cols = result.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const SweepRow& row : result.rows) {
    for (double c : row.coordinates) out += csv_number(c) + ',';
    for (const auto& v : row.values) out += (v ? csv_number(*v) : std::string()) + ',';
    out += row.stable ? "true" : "false";
    out += ',' + row.regime + ',' + csv_field(row.status) + '\n';
  }
  return out;
}

std::string sweep_to_json(const SweepResult& result) {
  Json j;
  j["name"] = result.spec.name;
  j["version"] = result.version;
  j["scenario_hash"] = result.scenario_hash;
  j["caption"] = render_caption(Preset(result.spec));
  Json axes = Json::array();
  for (const SweepAxis& a : result.spec.axes)
    axes.push_back({{"variable", variable_column(a.variable)},
                    {"start", a.start},
                    {"stop", a.stop},
                    {"points", a.points}});
  j["axes"] = axes;
  Json rows = Json::array();
  for (const SweepRow& row : result.rows) {
    Json r;
    for (std::size_t k = 0; k < row.coordinates.size(); ++k)
      r[std::string(variable_column(result.spec.axes[k].variable))] = number(row.coordinates[k]);
    for (std::size_t k = 0; k < row.values.size(); ++k)
      r[std::string(output_column(result.spec.outputs[k]))] =
          row.values[k] ? number(*row.values[k]) : Json(nullptr);
    r["stable"] = row.stable;
    r["regime"] = row.regime;
    r["status"] = row.status;
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

WignerResult run_wigner(const WignerJob& job) {
  const PointResult p = evaluate_point(job.scenario);
  if (!gated_ok(p)) {
    if (p.status == "unstable" || p.status == "marginal")
      throw NoSteadyStateError("wigner: the scenario has no stable steady state");
    if (p.status == "above_threshold")
      throw UnsupportedRegimeError("wigner: the scenario is above threshold");
    throw DomainError(fmt::format("wigner: {}", p.status));
  }
  WignerResult out;
  out.v_pq = reduce_cm(p.lyapunov->cm, Mode::p, Mode::q).assembled();
  for (const auto& [a, b] : job.pairs) out.grids.push_back(marginal_pair(out.v_pq, a, b, job.grid));
  return out;
}

std::string wigner_grid_csv(const WignerGrid& grid) {
  std::string out = fmt::format("{},{},W\n", quadrature_name(grid.axis1), quadrature_name(grid.axis2));
  for (std::size_t i = 0; i < grid.axis1_values.size(); ++i)
    for (std::size_t j = 0; j < grid.axis2_values.size(); ++j)
      out += fmt::format("{:.12g},{:.12g},{:.12g}\n", grid.axis1_values[i], grid.axis2_values[j],
                         grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  return out;
}

std::string wigner_sidecar_json(const WignerJob& job, const WignerResult& result) {
  Json j;
  j["name"] = job.name;
  j["version"] = COMBTANGLE_VERSION;
  j["scenario_hash"] = scenario_hash(job.scenario);
  j["caption"] = render_caption(Preset(job));
  j["V_pq"] = to_json(Matrix(result.v_pq));
  Json grids = Json::array();
  for (const WignerGrid& g : result.grids) {
    const Ellipse& e = g.contour_1e;
    grids.push_back({{"axes", {quadrature_name(g.axis1), quadrature_name(g.axis2)}},
                     {"covariance", to_json(Matrix(g.covariance))},
                     {"integral", number(g.integral())},
                     {"vacuum_radius", number(g.vacuum_radius)},
                     {"contour_1e",
                      {{"semi_major", number(e.semi_major)},
                       {"semi_minor", number(e.semi_minor)},
                       {"major_angle_deg", number(e.angle * 180.0 / std::numbers::pi)},
                       {"minor_angle_deg", number(e.minor_angle() * 180.0 / std::numbers::pi)},
                       {"variance_major", number(e.variance_major)},
                       {"variance_minor", number(e.variance_minor)},
                       {"squeezed", e.squeezed()}}}});
  }
  j["marginals"] = grids;
  return j.dump(2) + "\n";
}

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b",
          "fig4",  "fig5a", "fig5b", "fig6a", "fig6b", "fig7"};
}

Preset figure_preset(std::string_view name, std::optional<std::pair<double, double>> range,
                     const std::optional<Scenario>& base_override) {
  Scenario base = base_override.value_or(Scenario::baseline());
  const auto direct = [&](double gp_mult, double ratio) {
    base.G_p = gp_mult * G0;
    base.G_q = ratio * *base.G_p;
  };
  const auto ranged = [&](SweepAxis axis) {
    if (range) {
      axis.start = range->first;
      axis.stop = range->second;
    }
    return axis;
  };

  SweepSpec s;
  s.name = std::string(name);
  if (name == "fig2a" || name == "fig2b" || name == "fig2c" || name == "fig2d") {
    const double gp = name == "fig2a" ? 0.2 : name == "fig2b" ? 1.0 : name == "fig2c" ? 2.0 : 10.0;
    direct(gp, 0.0);
    s.axes = {ranged({SweepVariable::RatioGqGp, 0.0, 1.0, 101})};
    s.outputs = {Output::E_rp, Output::E_rq, Output::E_pq};
  } else if (name == "fig3a") {
    direct(1.0, 0.5);
    s.ratio_GqGp = 0.5;
    s.axes = {ranged({SweepVariable::KappaR, 1.0, 40.0, 79})};
    s.outputs = {Output::E_rp, Output::E_rq, Output::E_pq};
  } else if (name == "fig3b") {
    direct(10.0, 0.85);
    s.ratio_GqGp = 0.85;
    s.axes = {ranged({SweepVariable::KappaR, 1.0, 60.0, 119})};
    s.outputs = {Output::E_pq, Output::xi, Output::G_tilde, Output::occ_beta1, Output::occ_beta2};
  } else if (name == "fig4") {
    if (!range)
      throw SpecError("fig4: the skyrmion damping range is required (kappa_r in MHz, e.g. 1..60)");
    direct(10.0, 0.0);
    base.params.kappa_r = from_MHz(40.0);
    s.axes = {{SweepVariable::RatioGqGp, 0.0, 1.0, 101},
              {SweepVariable::KappaR, range->first, range->second, 60}};
    s.outputs = {Output::S_pq, Output::S_qp, Output::E_pq};
  } else if (name == "fig5a" || name == "fig5b") {
    direct(10.0, 0.85);
    s.ratio_GqGp = 0.85;
    base.params.kappa_p = from_MHz(10.0);
    base.params.kappa_r = from_MHz(40.0);
    s.axes = {ranged({SweepVariable::RatioKqKp, 1.0, 3.0, 201})};
    s.outputs = name == "fig5a" ? std::vector<Output>{Output::E_pq, Output::S_pq, Output::S_qp}
                                : std::vector<Output>{Output::N_p, Output::N_q};
  } else if (name == "fig6a" || name == "fig6b") {
    const bool a = name == "fig6a";
    direct(a ? 10.0 : 40.0, a ? 0.85 : 0.95);
    s.ratio_GqGp = a ? 0.85 : 0.95;
    base.params.kappa_r = from_MHz(a ? 40.0 : 60.0);
    s.axes = {ranged({SweepVariable::Temperature, 0.0, a ? 3.0 : 5.0, a ? 301U : 501U})};
    s.outputs = {Output::E_pq, Output::S_pq, Output::S_qp};
  } else if (name == "fig7") {
    direct(10.0, 0.85);
    base.params.kappa_r = from_MHz(40.0);
    WignerJob job;
    job.name = "fig7";
    job.scenario = base;
    job.pairs = {{Quadrature::Xp, Quadrature::Yp},
                 {Quadrature::Xq, Quadrature::Yq},
                 {Quadrature::Xp, Quadrature::Xq},
                 {Quadrature::Yp, Quadrature::Yq}};
    return job;
  } else {
    throw LookupError(fmt::format("unknown preset '{}'", name));
  }
  s.base = base;
  s.validate();
  return s;
}

std::string render_caption(const Preset& preset) {
  const Scenario& base =
      std::holds_alternative<SweepSpec>(preset) ? std::get<SweepSpec>(preset).base
                                                : std::get<WignerJob>(preset).scenario;
  const SweepSpec* spec = std::get_if<SweepSpec>(&preset);
  const auto swept = [&](SweepVariable v) {
    return spec && std::any_of(spec->axes.begin(), spec->axes.end(),
                               [v](const SweepAxis& a) { return a.variable == v; });
  };
  const PhysicalParams defaults = PhysicalParams::baseline();

  std::vector<std::string> parts;
  if (base.G_p && !swept(SweepVariable::Gp)) {
    parts.push_back("G_p=" + multiplier(*base.G_p / G0, "G_0"));
    if (!swept(SweepVariable::RatioGqGp) && *base.G_p > 0.0)
      parts.push_back("G_q=" + multiplier(*base.G_q / *base.G_p, "G_p"));
  }
  if (swept(SweepVariable::RatioKqKp))
    parts.push_back(fmt::format("kappa_p/2pi={:g} MHz", to_MHz(base.params.kappa_p)));
  if (!swept(SweepVariable::KappaR) && base.params.kappa_r != defaults.kappa_r)
    parts.push_back(fmt::format("kappa_r/2pi={:g} MHz", to_MHz(base.params.kappa_r)));
  if (!swept(SweepVariable::Temperature) && base.params.temperature != defaults.temperature)
    parts.push_back(fmt::format("T={:g} K", base.params.temperature));

  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  if (spec) {
    for (const SweepAxis& a : spec->axes)
      out += fmt::format("; {} from {:g} to {:g} ({} points)", variable_column(a.variable), a.start,
                         a.stop, a.points);
  }
  return out;
}

}  // namespace combtangle
