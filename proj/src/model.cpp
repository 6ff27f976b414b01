#include "combtangle/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::k: return "k";
    case Mode::r: return "r";
    case Mode::p: return "p";
    case Mode::q: return "q";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "k") return Mode::k;
  if (name == "r") return Mode::r;
  if (name == "p") return Mode::p;
  if (name == "q") return Mode::q;
  return std::nullopt;
}

double PhysicalParams::kappa(Mode m) const {
  switch (m) {
    case Mode::k: return kappa_k;
    case Mode::r: return kappa_r;
    case Mode::p: return kappa_p;
    case Mode::q: return kappa_q;
  }
  return 0.0;
}

double PhysicalParams::omega(Mode m) const {
  switch (m) {
    case Mode::k: return omega_k;
    case Mode::r: return omega_r;
    case Mode::p: return omega_p();
    case Mode::q: return omega_q();
  }
  return 0.0;
}

void PhysicalParams::validate() const {
  const auto finite_nonneg = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
      throw SpecError(fmt::format("{} must be finite and nonnegative (got {})", name, v));
  };
  finite_nonneg(omega_k, "omega_k");
  finite_nonneg(omega_r, "omega_r");
  finite_nonneg(omega_0, "omega_0");
  finite_nonneg(g_p, "g_p");
  finite_nonneg(g_q, "g_q");
  finite_nonneg(drive_amplitude, "drive_amplitude");
  finite_nonneg(temperature, "temperature");
  if (!std::isfinite(drive_phase)) throw SpecError("drive_phase must be finite");
  for (Mode m : {Mode::k, Mode::r, Mode::p, Mode::q}) {
    const double k = kappa(m);
    if (!std::isfinite(k) || k <= 0.0)
      throw SpecError(fmt::format("kappa_{} must be positive (got {})", mode_name(m), k));
  }
  if (!(omega_k > 0.0) || !(omega_r > 0.0))
    throw SpecError("omega_k and omega_r must be positive");
  if (!(omega_q() > 0.0))
    throw SpecError("omega_q = omega_k - omega_r must be positive");
}

PhysicalParams PhysicalParams::baseline() {
  PhysicalParams p;
  p.omega_k = from_GHz(80.0);
  p.omega_r = from_GHz(8.0);
  p.omega_0 = p.omega_k;
  p.kappa_k = from_MHz(10.0);
  p.kappa_r = from_MHz(1.0);
  p.kappa_p = from_MHz(10.0);
  p.kappa_q = from_MHz(10.0);
  p.g_p = from_MHz(1.0e-3);
  p.g_q = from_MHz(1.0e-3);
  p.drive_amplitude = 1.5e4 * p.kappa_k;
  p.drive_phase = 0.0;
  p.temperature = 0.02;
  return p;
}

Detunings derived_detunings(const PhysicalParams& params) {
  Detunings d;
  d.k = params.omega_k - params.omega_0;
  d.p = d.k + params.omega_r;
  d.q = d.k - params.omega_r;
  return d;
}

EffectiveCouplings effective_couplings(const PhysicalParams& params,
                                       std::complex<double> mean_k) {
  EffectiveCouplings e;
  e.mean_k = mean_k;
  e.G_p = params.g_p * std::abs(mean_k);
  e.G_q = params.g_q * std::abs(mean_k);
  return e;
}

double thermal_occupation(double omega, double temperature) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw DomainError(fmt::format("thermal_occupation: omega must be positive (got {})", omega));
  if (!(temperature >= 0.0) || !std::isfinite(temperature))
    throw DomainError(fmt::format("thermal_occupation: temperature must be >= 0 (got {})", temperature));
  if (temperature == 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::k_B * temperature);
  return 1.0 / std::expm1(x);
}

double BathOccupations::operator[](Mode m) const {
  switch (m) {
    case Mode::k: return k;
    case Mode::r: return r;
    case Mode::p: return p;
    case Mode::q: return q;
  }
  return 0.0;
}

BathOccupations bath_occupations(const PhysicalParams& params) {
  BathOccupations n;
  n.k = thermal_occupation(params.omega_k, params.temperature);
  n.r = thermal_occupation(params.omega_r, params.temperature);
  n.p = thermal_occupation(params.omega_p(), params.temperature);
  n.q = thermal_occupation(params.omega_q(), params.temperature);
  return n;
}

}  // namespace combtangle
