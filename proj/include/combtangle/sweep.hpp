#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "combtangle/gaussian_measures.hpp"
#include "combtangle/linear_dynamics.hpp"
#include "combtangle/scenario.hpp"
#include "combtangle/semiclassical.hpp"
#include "combtangle/wigner.hpp"

namespace combtangle {

/// Everything computed for one parameter point. Correlation data is present
/// only when the point is below threshold and its drift is stable.
struct PointResult {
  SemiclassicalState semiclassical;
  EffectiveCouplings couplings;
  std::optional<DriftDiffusion> dynamics;
  std::optional<StabilityVerdict> stability;
  std::optional<LyapunovSolution> lyapunov;
  std::optional<CorrelationReport> report;
  /// "ok", "above_threshold", "unstable", "marginal" or "error: ...".
  std::string status;
  bool numerical_failure = false;
};

/// Effective couplings -> reduced drift/diffusion -> stability gate ->
/// Lyapunov -> measures. Errors are caught and reported in `status`.
PointResult evaluate_point(const Scenario& scenario);

enum class SweepVariable { RatioGqGp, RatioKqKp, KappaR, Temperature, Gp, Drive };

std::string_view variable_column(SweepVariable v);  // CSV column name
std::optional<SweepVariable> parse_variable(std::string_view name);

struct SweepAxis {
  SweepVariable variable = SweepVariable::RatioGqGp;
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 2;

  double value(std::size_t i) const;
};

enum class Output {
  E_rp, E_rq, E_pq,
  S_rp, S_pr, S_rq, S_qr, S_pq, S_qp,
  N_r, N_p, N_q,
  nu_rp, nu_rq, nu_pq,
  xi, G_tilde, occ_beta1, occ_beta2,
  abscissa,
};

std::string_view output_column(Output o);
std::optional<Output> parse_output(std::string_view name);

struct SweepSpec {
  std::string name;
  Scenario base;
  std::vector<SweepAxis> axes;  // one or two; the last one varies fastest
  std::vector<Output> outputs;
  /// Anchors: G_q = ratio_GqGp * G_p and kappa_q = ratio_kqkp * kappa_p,
  /// applied after the swept values unless the ratio is itself swept.
  std::optional<double> ratio_GqGp;
  std::optional<double> ratio_kqkp;

  /// Throws SpecError.
  void validate() const;
  std::size_t point_count() const;
  /// Scenario for the flat point index (row-major over axes).
  Scenario scenario_at(std::size_t index) const;
  std::vector<double> coordinates_at(std::size_t index) const;
};

struct SweepRow {
  std::vector<double> coordinates;
  std::vector<std::optional<double>> values;  // parallel to spec.outputs
  bool stable = false;
  std::string regime;
  std::string status;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  std::string scenario_hash;
  std::string version;

  std::vector<std::string> columns() const;
  std::size_t failed_points() const;
  std::optional<double> value(std::size_t row, Output o) const;
};

/// Points are independent; with threads > 1 they are evaluated concurrently
/// and then ordered by index, so the result is schedule independent.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 1);

/// Header row then one row per point; floats with 12 significant digits,
/// null values as empty cells, booleans as true/false.
std::string sweep_to_csv(const SweepResult& result);
std::string sweep_to_json(const SweepResult& result);

/// Wigner reconstruction of the (p, q) pair for a set of quadrature pairs.
struct WignerJob {
  std::string name;
  Scenario scenario;
  std::vector<std::pair<Quadrature, Quadrature>> pairs;
  GridSpec grid;
};

struct WignerResult {
  Eigen::Matrix4d v_pq;
  std::vector<WignerGrid> grids;
};

WignerResult run_wigner(const WignerJob& job);
/// Columns named after the two quadratures, then W.
std::string wigner_grid_csv(const WignerGrid& grid);
std::string wigner_sidecar_json(const WignerJob& job, const WignerResult& result);

using Preset = std::variant<SweepSpec, WignerJob>;

std::vector<std::string> preset_names();

/// Figure presets fig2a ... fig7. fig4's skyrmion-damping axis is not fixed
/// by its caption and must be passed as `range` in MHz (suggested 1..60); for
/// the other sweeps an explicit range overrides the first axis. `base`
/// replaces the baseline defaults for everything the caption leaves open.
Preset figure_preset(std::string_view name,
                     std::optional<std::pair<double, double>> range = std::nullopt,
                     const std::optional<Scenario>& base = std::nullopt);

/// Renders the fixed parameters back into the figure caption's notation,
/// e.g. "G_p=10G_0, G_q=0.85G_p, kappa_r/2pi=40 MHz".
std::string render_caption(const Preset& preset);

}  // namespace combtangle
