#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "combtangle/model.hpp"
#include "combtangle/semiclassical.hpp"

namespace combtangle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Quadrature convention: X = (a + a^dag)/sqrt2, Y = i(a^dag - a)/sqrt2, so
/// the vacuum variance is 1/2. Vectors are ordered (X_j, Y_j) per mode.
struct DriftDiffusion {
  Matrix drift;
  Matrix diffusion;  // diagonal
  std::vector<Mode> mode_order;
  std::vector<double> kappas;  // per mode, same order

  int n_modes() const { return static_cast<int>(mode_order.size()); }
  int index_of(Mode m) const;  // mode position, -1 when absent
};

/// Symmetric matrix of symmetrized quadrature moments.
struct CovarianceMatrix {
  Matrix values;
  std::vector<Mode> mode_order;

  int n_modes() const { return static_cast<int>(mode_order.size()); }
  /// Throws LookupError when the mode is absent.
  int index_of(Mode m) const;
  Eigen::Matrix2d block(Mode a, Mode b) const;

  static CovarianceMatrix vacuum(std::vector<Mode> order);
};

/// Omega_n = (+) [[0, 1], [-1, 0]].
Matrix symplectic_form(int n_modes);

/// 6x6 drift for modes [r, p, q] with resonant drive, plus the
/// diagonal diffusion kappa_j (2 n_j + 1).
DriftDiffusion build_reduced_drift(const EffectiveCouplings& eff,
                                   const PhysicalParams& params);

/// 8x8 drift for [k, r, p, q] linearized around `state`, derived mode by mode
/// from the fluctuation equations; general detunings are allowed.
DriftDiffusion build_full_drift(const PhysicalParams& params,
                                const SemiclassicalState& state);

/// Converts d(da)/dt = A da + B da^dag (complex n x n) into the real 2n x 2n
/// quadrature drift.
Matrix quadrature_drift(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

enum class Stability { Stable, Marginal, Unstable };

std::string_view stability_name(Stability s);

struct StabilityVerdict {
  Stability verdict = Stability::Unstable;
  double abscissa = 0.0;   // max Re lambda(M)
  double tolerance = 0.0;  // 1e-6 * max kappa
  Eigen::VectorXcd eigenvalues;

  bool stable() const { return verdict == Stability::Stable; }
};

/// Stable iff max Re lambda(M) < -1e-6 max(kappa); a margin inside that band is
/// Marginal.
StabilityVerdict is_stable(const DriftDiffusion& dd);

struct PhysicalityReport {
  Vector spectrum;  // eigenvalues of the Hermitian matrix V + (i/2) Omega
  double min_eigenvalue = 0.0;
  double min_cm_eigenvalue = 0.0;  // of V itself
  bool physical = false;           // min_eigenvalue >= -1e-10 max(1, ‖V‖_F)
  bool positive_definite = false;
};

PhysicalityReport check_physicality(const CovarianceMatrix& cm);

struct LyapunovSolution {
  CovarianceMatrix cm;
  double residual = 0.0;  // backward error, see lyapunov_residual
  double reciprocal_condition = 0.0;
  bool ill_conditioned = false;  // conditioning warning
  bool marginal = false;
  PhysicalityReport physicality;
};

/// Solves M V + V M^T = -D by a direct solve of the vectorized system.
/// Throws NoSteadyStateError when M has an eigenvalue with Re >= 0.
LyapunovSolution solve_lyapunov(const DriftDiffusion& dd);

/// ||MV + VM^T + D||_F / (2 ||M||_F ||V||_F + ||D||_F).
double lyapunov_residual(const DriftDiffusion& dd, const Matrix& V);

/// M = R + C with R the per-mode free rotation (antisymmetric part of the
/// diagonal 2x2 blocks). `omega` is empty when R does not commute with C or
/// the noise is not isotropic per mode; C is then M itself.
struct RotationSplit {
  Matrix slow;
  std::vector<double> omega;
  double commutator = 0.0;  // ||[R, C]||_F / ||M||_F

  bool active() const { return !omega.empty(); }
};

RotationSplit split_free_rotation(const DriftDiffusion& dd);

/// A step size that keeps RK4 well inside its stability region, set by the
/// slow part of the drift when the free rotation splits off.
double default_covariance_dt(const DriftDiffusion& dd);

/// RK4 integration of dV/dt = M V + V M^T + D from V0 to t_end. With an
/// active rotation split the free rotation is applied exactly and RK4 runs
/// on the slow part only. Throws DivergenceError for unstable M or
/// non-finite values.
CovarianceMatrix evolve_covariance(const DriftDiffusion& dd, const CovarianceMatrix& V0,
                                   double t_end, double dt);

/// ||A - B||_F / ||B||_F.
double relative_frobenius(const Matrix& a, const Matrix& b);

}  // namespace combtangle
