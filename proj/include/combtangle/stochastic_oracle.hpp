#pragma once

#include <cstddef>
#include <cstdint>

#include "combtangle/linear_dynamics.hpp"

namespace combtangle {

struct EnsembleSpec {
  std::size_t n_trajectories = 20000;
  double dt = 0.0;     // 0: choose automatically
  double t_end = 0.0;  // 0: choose automatically
  std::uint64_t seed = 1;
  /// Moments are time-averaged over [burn_in_fraction * t_end, t_end].
  double burn_in_fraction = 0.5;
  unsigned threads = 1;
};

struct EnsembleEstimate {
  CovarianceMatrix estimate;
  Matrix standard_error;
  double dt = 0.0;
  double t_end = 0.0;
  std::size_t steps = 0;
  std::size_t n_trajectories = 0;
  /// ||[R, C]||_F / ||M||_F for the rotation / slow split; 0 when exact.
  double split_commutator = 0.0;
  double mean_standard_error() const;
};

/// Fills dt (0.05 / ||C||_2, C the slow part of the drift) and t_end
/// (10.5 / |max Re lambda|) for unset fields.
EnsembleSpec resolve_ensemble_spec(const DriftDiffusion& dd, EnsembleSpec spec);

/// Monte Carlo estimate of the stationary covariance from an ensemble of
/// trajectories of du = M u dt + dW, <dW dW^T> = D dt, started at u = 0.
///
/// Each step applies the per-mode free rotation exactly and an Euler-Maruyama
/// update for the rest of the drift and the noise. When the rotation commutes
/// with the rest of the drift (always the case for the comb model) this is
/// Euler-Maruyama in the interaction picture; otherwise the free rotation is
/// not split off.
///
/// Trajectory i draws from its own generator seeded by (seed, i); trajectories
/// are reduced in fixed-size blocks in index order, so the result does not
/// depend on the thread count.
EnsembleEstimate simulate_ensemble(const DriftDiffusion& dd, const EnsembleSpec& spec);

}  // namespace combtangle
