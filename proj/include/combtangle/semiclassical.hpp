#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "combtangle/model.hpp"

namespace combtangle {

enum class Regime { BelowThreshold, AboveThreshold, DivergentThreshold };

std::string_view regime_name(Regime r);

/// Complex mean amplitudes <a_j> of the four modes.
struct MeanAmplitudes {
  std::complex<double> k{0.0, 0.0};
  std::complex<double> r{0.0, 0.0};
  std::complex<double> p{0.0, 0.0};
  std::complex<double> q{0.0, 0.0};

  std::complex<double> operator[](Mode m) const;
  bool finite() const;
};

struct SemiclassicalState {
  MeanAmplitudes means;
  Regime regime = Regime::BelowThreshold;
  /// epsilon_th in rad/s; +infinity for the divergent branch.
  double threshold = 0.0;
  /// Above threshold only phi_k and the two phase sums are fixed.
  bool phases_undetermined = false;
  /// The free skyrmion phase phi_r used to pin the above-threshold solution.
  double phi_r = 0.0;
  /// |epsilon - epsilon_th| < 1e-6 epsilon_th; classified AboveThreshold.
  bool near_threshold = false;
};

/// kappa_k sqrt(kappa_r kappa_p kappa_q / (g_q^2 kappa_p - g_p^2 kappa_q)), or
/// +infinity when g_q^2 kappa_p <= g_p^2 kappa_q. Requires Delta_k == 0.
double threshold_amplitude(const PhysicalParams& params);

/// Analytic mean-field fixed point for a resonant drive. Above threshold the
/// solution is pinned by `phi_r`: phi_k = phi_l, phi_p = phi_k + pi/2 + phi_r,
/// phi_q = phi_k + pi/2 - phi_r.
SemiclassicalState steady_state(const PhysicalParams& params, double phi_r = 0.0);

/// Frame for the mean-field ODE. Drive: rotating at omega_0 (the physical
/// amplitudes). Comb: additionally removes the free rotation at omega_r from
/// r, p (e^{-i omega_r t}) and q (e^{+i omega_r t}); this is an exact change of
/// variables, and results are mapped back to the drive frame.
enum class MeanFieldFrame { Drive, Comb };

struct MeanFieldOptions {
  MeanFieldFrame frame = MeanFieldFrame::Drive;
  /// Store every n-th step in the trajectory (the final state is always kept).
  std::uint64_t sample_every = 1000;
};

struct MeanFieldTrajectory {
  std::vector<double> times;
  std::vector<MeanAmplitudes> samples;  // drive frame
  MeanAmplitudes final_state;
  double final_time = 0.0;
  std::uint64_t steps = 0;
};

/// Largest step satisfying dt <= 0.01 / (fastest rate) in the given frame.
double default_meanfield_dt(const PhysicalParams& params, MeanFieldFrame frame);

/// Fixed-step RK4 integration of the four coupled mean-field equations.
/// Throws DivergenceError (carrying the time) if the state becomes non-finite.
MeanFieldTrajectory integrate_meanfield(const PhysicalParams& params,
                                        const MeanAmplitudes& initial,
                                        double t_end, double dt,
                                        const MeanFieldOptions& options = {});

/// Right-hand side of the mean-field equations in the drive frame.
MeanAmplitudes meanfield_rhs(const PhysicalParams& params, const MeanAmplitudes& a);

}  // namespace combtangle
