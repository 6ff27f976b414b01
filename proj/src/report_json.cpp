#include "combtangle/report_json.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>

#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {
namespace {

Json amplitude(std::complex<double> a) {
  return {{"modulus", number(std::abs(a))}, {"phase", number(std::arg(a))}};
}

}  // namespace

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(fmt::format("{:.12g}", x).c_str(), nullptr);
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const SemiclassicalState& s) {
  Json j;
  j["regime"] = regime_name(s.regime);
  j["threshold_MHz"] = number(to_MHz(s.threshold));
  j["near_threshold"] = s.near_threshold;
  j["phases_undetermined"] = s.phases_undetermined;
  if (s.phases_undetermined) j["phi_r"] = number(s.phi_r);
  Json amps;
  for (Mode m : {Mode::k, Mode::r, Mode::p, Mode::q}) amps[std::string(mode_name(m))] = amplitude(s.means[m]);
  j["amplitudes"] = amps;
  return j;
}

Json to_json(const CorrelationReport& r) {
  Json j;
  for (const PairCorrelation& p : r.pairs) {
    const std::string a(mode_name(p.first)), b(mode_name(p.second));
    j["E_" + a + b] = number(p.log_negativity);
  }
  for (const PairCorrelation& p : r.pairs) {
    const std::string a(mode_name(p.first)), b(mode_name(p.second));
    j["S_" + a + b] = number(p.s12);
    j["S_" + b + a] = number(p.s21);
  }
  for (const PairCorrelation& p : r.pairs)
    j["nu_" + std::string(mode_name(p.first)) + std::string(mode_name(p.second))] = number(p.nu);
  for (const auto& [m, n] : r.occupations) j["N_" + std::string(mode_name(m))] = number(n);
  if (r.bogoliubov) j["bogoliubov"] = to_json(*r.bogoliubov);
  return j;
}

Json to_json(const BogoliubovFrame& b) {
  return {{"xi", number(b.xi)},
          {"G_tilde_MHz", number(to_MHz(b.G_tilde))},
          {"occ_beta1", number(b.occupancy_beta1)},
          {"occ_beta2", number(b.occupancy_beta2)}};
}

Json point_json(const PointResult& point) {
  Json j;
  j["status"] = point.status;
  j["semiclassical"] = to_json(point.semiclassical);
  j["couplings"] = {{"G_p_MHz", number(to_MHz(point.couplings.G_p))},
                    {"G_q_MHz", number(to_MHz(point.couplings.G_q))}};
  if (point.stability) {
    j["stability"] = {{"verdict", stability_name(point.stability->verdict)},
                      {"abscissa", number(point.stability->abscissa)}};
  }
  if (point.lyapunov) {
    j["lyapunov"] = {{"residual", number(point.lyapunov->residual)},
                     {"reciprocal_condition", number(point.lyapunov->reciprocal_condition)},
                     {"ill_conditioned", point.lyapunov->ill_conditioned},
                     {"physical", point.lyapunov->physicality.physical}};
  }
  if (point.report) {
    j["measures"] = to_json(*point.report);
    j["modes"] = Json::array();
    for (Mode m : point.lyapunov->cm.mode_order) j["modes"].push_back(mode_name(m));
    j["covariance"] = to_json(point.lyapunov->cm.values);
  } else {
    j["measures"] = nullptr;
  }
  return j;
}

Json oracle_json(const EnsembleEstimate& est, const LyapunovSolution& reference) {
  Json j;
  j["modes"] = Json::array();
  for (Mode m : est.estimate.mode_order) j["modes"].push_back(mode_name(m));
  j["n_trajectories"] = est.n_trajectories;
  j["dt"] = number(est.dt);
  j["t_end"] = number(est.t_end);
  j["steps"] = est.steps;
  j["split_commutator"] = number(est.split_commutator);
  j["estimate"] = to_json(est.estimate.values);
  j["standard_error"] = to_json(est.standard_error);
  j["mean_standard_error"] = number(est.mean_standard_error());
  j["lyapunov"] = to_json(reference.cm.values);
  j["relative_frobenius"] = number(relative_frobenius(est.estimate.values, reference.cm.values));
  return j;
}

Json readout_json(const PointResult& point, const ReadoutChannel& ch_p, const ReadoutChannel& ch_q) {
  if (!point.report) throw DomainError(fmt::format("readout: no steady state ({})", point.status));
  const Eigen::Matrix4d v = reduce_cm(point.lyapunov->cm, Mode::p, Mode::q).assembled();
  const Eigen::Matrix4d out = joint_output_covariance(v, ch_p, ch_q);
  const Eigen::Matrix4d normalized = normalized_joint_output_covariance(v, ch_p, ch_q);
  const Eigen::Matrix4d rebuilt = reconstruct_covariance(out, ch_p, ch_q);
  const ReducedCM rcm = ReducedCM::from_matrix(normalized);
  const Steering st = gaussian_steering(rcm);

  const auto channel = [](const ReadoutChannel& c) {
    return Json{{"g_MHz", number(to_MHz(c.g))},
                {"kappa_c_MHz", number(to_MHz(c.kappa_c))},
                {"n_c", number(c.input_occupation)},
                {"gain", number(c.gain())},
                {"adiabaticity_warning", c.warning()}};
  };
  Json j;
  j["channels"] = {{"p", channel(ch_p)}, {"q", channel(ch_q)}};
  j["V_pq"] = to_json(Matrix(v));
  j["output_covariance"] = to_json(Matrix(out));
  j["normalized_output_covariance"] = to_json(Matrix(normalized));
  j["normalized_output"] = {{"E_pq", number(log_negativity(rcm).log_negativity)},
                            {"S_pq", number(st.s12)},
                            {"S_qp", number(st.s21)}};
  j["magnon"] = {{"E_pq", number(point.report->pair(Mode::p, Mode::q).log_negativity)},
                 {"S_pq", number(point.report->steering(Mode::p, Mode::q))},
                 {"S_qp", number(point.report->steering(Mode::q, Mode::p))}};
  j["reconstruction_error"] = number(relative_frobenius(rebuilt, v));
  return j;
}

}  // namespace combtangle
