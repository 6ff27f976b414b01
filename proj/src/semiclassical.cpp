#include "combtangle/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {
namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

void require_resonant(const PhysicalParams& params, const char* what) {
  const Detunings d = derived_detunings(params);
  if (d.k != 0.0)
    throw UnsupportedRegimeError(fmt::format(
        "{} requires a resonant drive (Delta_k = 0), got Delta_k/2pi = {} MHz", what,
        to_MHz(d.k)));
}

MeanAmplitudes operator+(const MeanAmplitudes& a, const MeanAmplitudes& b) {
  return {a.k + b.k, a.r + b.r, a.p + b.p, a.q + b.q};
}

MeanAmplitudes operator*(double s, const MeanAmplitudes& a) {
  return {s * a.k, s * a.r, s * a.p, s * a.q};
}

// Comb frame: b_r = a_r e^{i w_r t}, b_p = a_p e^{i w_r t}, b_q = a_q e^{-i w_r t}.
// The free rotation cancels in every product, leaving Delta_k on p and q.
MeanAmplitudes comb_rhs(const PhysicalParams& pr, const MeanAmplitudes& b) {
  const Detunings d = derived_detunings(pr);
  const cd E = pr.drive();
  MeanAmplitudes out;
  out.k = -(I * d.k + pr.kappa_k) * b.k - I * pr.g_p * std::conj(b.r) * b.p -
          I * pr.g_q * b.r * b.q + E;
  out.r = -pr.kappa_r * b.r - I * pr.g_p * std::conj(b.k) * b.p -
          I * pr.g_q * b.k * std::conj(b.q);
  out.p = -(I * d.k + pr.kappa_p) * b.p - I * pr.g_p * b.k * b.r;
  out.q = -(I * d.k + pr.kappa_q) * b.q - I * pr.g_q * b.k * std::conj(b.r);
  return out;
}

MeanAmplitudes to_comb(const MeanAmplitudes& a, double omega_r, double t) {
  const cd rot = std::polar(1.0, omega_r * t);
  return {a.k, a.r * rot, a.p * rot, a.q * std::conj(rot)};
}

MeanAmplitudes to_drive(const MeanAmplitudes& b, double omega_r, double t) {
  const cd rot = std::polar(1.0, -omega_r * t);
  return {b.k, b.r * rot, b.p * rot, b.q * std::conj(rot)};
}

}  // namespace

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::BelowThreshold: return "below_threshold";
    case Regime::AboveThreshold: return "above_threshold";
    case Regime::DivergentThreshold: return "divergent_threshold";
  }
  return "?";
}

std::complex<double> MeanAmplitudes::operator[](Mode m) const {
  switch (m) {
    case Mode::k: return k;
    case Mode::r: return r;
    case Mode::p: return p;
    case Mode::q: return q;
  }
  return {};
}

bool MeanAmplitudes::finite() const {
  for (const cd& z : {k, r, p, q})
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double threshold_amplitude(const PhysicalParams& params) {
  require_resonant(params, "threshold_amplitude");
  const double denom = params.g_q * params.g_q * params.kappa_p -
                       params.g_p * params.g_p * params.kappa_q;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return params.kappa_k *
         std::sqrt(params.kappa_r * params.kappa_p * params.kappa_q / denom);
}

SemiclassicalState steady_state(const PhysicalParams& params, double phi_r) {
  const double eth = threshold_amplitude(params);
  const double eps = params.drive_amplitude;

  SemiclassicalState s;
  s.threshold = eth;
  if (std::isinf(eth)) {
    s.regime = Regime::DivergentThreshold;
  } else if (std::abs(eps - eth) < 1e-6 * eth) {
    s.regime = Regime::AboveThreshold;
    s.near_threshold = true;
  } else {
    s.regime = eps < eth ? Regime::BelowThreshold : Regime::AboveThreshold;
  }

  if (s.regime != Regime::AboveThreshold) {
    s.means.k = params.drive() / params.kappa_k;
    return s;
  }

  const double kk = params.kappa_k, kr = params.kappa_r;
  const double kp = params.kappa_p, kq = params.kappa_q;
  const double gp = params.g_p, gq = params.g_q;
  const double excess = std::max(0.0, eps - eth) / eth;  // (eps - eth) / eth
  const double gq2kp = gq * gq * kp, gp2kq = gp * gp * kq;

  const double A_k = std::sqrt(kr * kp * kq / (gq2kp - gp2kq));
  const double A_r = std::sqrt(excess * kk * kp * kq / (gq2kp + gp2kq));
  const double common = std::sqrt(excess * kk * kr / (gq2kp * gq2kp - gp2kq * gp2kq));
  const double A_p = gp * kq * common;
  const double A_q = gq * kp * common;

  const double phi_k = params.drive_phase;
  const double half_pi = std::numbers::pi / 2;
  s.means.k = std::polar(A_k, phi_k);
  s.means.r = std::polar(A_r, phi_r);
  s.means.p = std::polar(A_p, phi_k - half_pi + phi_r);
  s.means.q = std::polar(A_q, phi_k - half_pi - phi_r);
  s.phases_undetermined = true;
  s.phi_r = phi_r;
  return s;
}

MeanAmplitudes meanfield_rhs(const PhysicalParams& pr, const MeanAmplitudes& a) {
  const Detunings d = derived_detunings(pr);
  const cd E = pr.drive();
  MeanAmplitudes out;
  out.k = -(I * d.k + pr.kappa_k) * a.k - I * pr.g_p * std::conj(a.r) * a.p -
          I * pr.g_q * a.r * a.q + E;
  out.r = -(I * pr.omega_r + pr.kappa_r) * a.r - I * pr.g_p * std::conj(a.k) * a.p -
          I * pr.g_q * a.k * std::conj(a.q);
  out.p = -(I * d.p + pr.kappa_p) * a.p - I * pr.g_p * a.k * a.r;
  out.q = -(I * d.q + pr.kappa_q) * a.q - I * pr.g_q * a.k * std::conj(a.r);
  return out;
}

double default_meanfield_dt(const PhysicalParams& params, MeanFieldFrame frame) {
  const Detunings d = derived_detunings(params);
  double fastest = std::max({params.kappa_k, params.kappa_r, params.kappa_p, params.kappa_q});
  if (frame == MeanFieldFrame::Drive) {
    fastest = std::max({fastest, params.omega_r, std::abs(d.k), std::abs(d.p), std::abs(d.q)});
  } else {
    fastest = std::max(fastest, std::abs(d.k));
  }
  return 0.01 / fastest;
}

MeanFieldTrajectory integrate_meanfield(const PhysicalParams& params,
                                        const MeanAmplitudes& initial, double t_end,
                                        double dt, const MeanFieldOptions& options) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("integrate_meanfield: dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw DomainError("integrate_meanfield: t_end must be > 0");
  params.validate();

  const bool comb = options.frame == MeanFieldFrame::Comb;
  const auto rhs = [&](const MeanAmplitudes& y) {
    return comb ? comb_rhs(params, y) : meanfield_rhs(params, y);
  };
  const auto record = [&](MeanFieldTrajectory& tr, const MeanAmplitudes& y, double t) {
    tr.times.push_back(t);
    tr.samples.push_back(comb ? to_drive(y, params.omega_r, t) : y);
  };

  const auto steps = static_cast<std::uint64_t>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  const std::uint64_t every = std::max<std::uint64_t>(1, options.sample_every);

  MeanFieldTrajectory tr;
  MeanAmplitudes y = comb ? to_comb(initial, params.omega_r, 0.0) : initial;
  record(tr, y, 0.0);
  for (std::uint64_t n = 0; n < steps; ++n) {
    const MeanAmplitudes k1 = rhs(y);
    const MeanAmplitudes k2 = rhs(y + (h / 2) * k1);
    const MeanAmplitudes k3 = rhs(y + (h / 2) * k2);
    const MeanAmplitudes k4 = rhs(y + h * k3);
    y = y + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t = static_cast<double>(n + 1) * h;
    if (!y.finite())
      throw DivergenceError(fmt::format("mean-field integration diverged at t = {:.6g} s", t), t);
    if ((n + 1) % every == 0 || n + 1 == steps) record(tr, y, t);
  }
  tr.final_state = tr.samples.back();
  tr.final_time = t_end;
  tr.steps = steps;
  return tr;
}

}  // namespace combtangle
