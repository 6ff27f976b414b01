#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "combtangle/bogoliubov.hpp"
#include "combtangle/linear_dynamics.hpp"

namespace combtangle {

/// Two-mode covariance matrix [[V1, V12], [V12^T, V2]].
struct ReducedCM {
  Eigen::Matrix2d v1 = Eigen::Matrix2d::Identity() / 2;
  Eigen::Matrix2d v2 = Eigen::Matrix2d::Identity() / 2;
  Eigen::Matrix2d v12 = Eigen::Matrix2d::Zero();
  Mode first = Mode::p;
  Mode second = Mode::q;

  Eigen::Matrix4d assembled() const;
  static ReducedCM from_matrix(const Eigen::Matrix4d& m, Mode first = Mode::p,
                               Mode second = Mode::q);
};

/// Deletes the rows and columns of every mode except `first` and `second`.
ReducedCM reduce_cm(const CovarianceMatrix& V, Mode first, Mode second);

/// Exact cofactor expansion.
double det4(const Eigen::Matrix4d& m);

struct Negativity {
  double log_negativity = 0.0;
  double nu = 0.5;  // minimal symplectic eigenvalue of the partial transpose
};

/// Closed form via Sigma = det V1 + det V2 - 2 det V12.
Negativity log_negativity(const ReducedCM& rcm);

/// Minimal |eigenvalue| of i Omega_2 P V P, P = diag(1, 1, 1, -1).
Negativity log_negativity_symplectic(const ReducedCM& rcm);

struct Steering {
  double s12 = 0.0;  // mode 1 steers mode 2 (Gaussian measurements on mode 1)
  double s21 = 0.0;
};

Steering gaussian_steering(const ReducedCM& rcm);

/// N_j = [<dX^2> + <dY^2> - 1] / 2; round-off below zero is clamped.
double effective_number(const CovarianceMatrix& V, Mode m);

struct PairCorrelation {
  Mode first;
  Mode second;
  double log_negativity = 0.0;
  double nu = 0.5;
  double s12 = 0.0;
  double s21 = 0.0;
};

struct CorrelationReport {
  std::vector<PairCorrelation> pairs;        // (r,p), (r,q), (p,q) when present
  std::vector<std::pair<Mode, double>> occupations;
  bool stable = true;
  bool physical = true;
  double abscissa = 0.0;
  /// Present when the Bogoliubov frame is defined (0 <= G_q < G_p).
  std::optional<BogoliubovFrame> bogoliubov;

  const PairCorrelation& pair(Mode a, Mode b) const;
  double occupation(Mode m) const;
  /// S from `from` to `to`.
  double steering(Mode from, Mode to) const;
};

/// All pairwise measures over the CM's modes (the mWGM is skipped). The
/// Bogoliubov block is attached when `eff` is given and the frame is defined.
CorrelationReport correlation_report(const CovarianceMatrix& V,
                                     const std::optional<EffectiveCouplings>& eff = std::nullopt);

}  // namespace combtangle
