#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>

namespace combtangle {

/// CODATA-2018 constants (SI). hbar and k_B are exact by definition since
/// the 2019 SI redefinition.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J / K
inline constexpr double two_pi = 6.283185307179586476925286766559;
/// G_0 / 2pi = 15 MHz, the coupling unit used by all figure presets.
inline constexpr double G0 = two_pi * 15.0e6;
}  // namespace constants

/// Ordinary frequency (MHz or GHz) <-> angular frequency (rad/s).
constexpr double from_MHz(double nu) { return constants::two_pi * nu * 1.0e6; }
constexpr double from_GHz(double nu) { return constants::two_pi * nu * 1.0e9; }
constexpr double to_MHz(double omega) { return omega / (constants::two_pi * 1.0e6); }
constexpr double to_GHz(double omega) { return omega / (constants::two_pi * 1.0e9); }

/// Modes of the comb model: mWGM k, skyrmion r, sum tooth p, difference tooth q.
enum class Mode { k = 0, r = 1, p = 2, q = 3 };

std::string_view mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

/// One physical scenario. All rates and frequencies are angular (rad/s).
/// omega_p and omega_q are derived from omega_k +- omega_r and never stored.
struct PhysicalParams {
  double omega_k = 0.0;
  double omega_r = 0.0;
  double omega_0 = 0.0;
  double kappa_k = 0.0;
  double kappa_r = 0.0;
  double kappa_p = 0.0;
  double kappa_q = 0.0;
  double g_p = 0.0;
  double g_q = 0.0;
  double drive_amplitude = 0.0;  // epsilon >= 0
  double drive_phase = 0.0;      // phi_l
  double temperature = 0.0;      // K

  double omega_p() const { return omega_k + omega_r; }
  double omega_q() const { return omega_k - omega_r; }
  std::complex<double> drive() const { return std::polar(drive_amplitude, drive_phase); }
  double kappa(Mode m) const;
  double omega(Mode m) const;

  /// Throws SpecError when an invariant is violated.
  void validate() const;

  /// omega_k/2pi = 80 GHz, omega_r/2pi = 8 GHz, resonant drive,
  /// kappa_p = kappa_q = 10 MHz, kappa_r = 1 MHz, kappa_k = 10 MHz, T = 20 mK.
  /// g_p = g_q = 2pi * 1 kHz and a drive giving <a_k> = 1.5e4, i.e. G_p = G_q = G_0.
  static PhysicalParams baseline();
};

struct Detunings {
  double k = 0.0;
  double p = 0.0;
  double q = 0.0;
};

Detunings derived_detunings(const PhysicalParams& params);

/// G_p, G_q and the mWGM amplitude they were derived from. Figure-style sweeps
/// set G_p and G_q directly; the magnitudes enter the reduced drift matrix.
struct EffectiveCouplings {
  double G_p = 0.0;
  double G_q = 0.0;
  std::complex<double> mean_k{0.0, 0.0};
  bool above_threshold = false;

  static EffectiveCouplings direct(double G_p, double G_q) {
    EffectiveCouplings e;
    e.G_p = G_p;
    e.G_q = G_q;
    return e;
  }
};

EffectiveCouplings effective_couplings(const PhysicalParams& params,
                                       std::complex<double> mean_k);

/// Bose factor [exp(hbar omega / k_B T) - 1]^-1; exactly 0 at T = 0.
double thermal_occupation(double omega, double temperature);

struct BathOccupations {
  double k = 0.0;
  double r = 0.0;
  double p = 0.0;
  double q = 0.0;

  double operator[](Mode m) const;
};

/// The skyrmion bath is evaluated at omega_r (the diffusion matrix labels it
/// n_a; read as the skyrmion occupation).
BathOccupations bath_occupations(const PhysicalParams& params);

}  // namespace combtangle
