#include "combtangle/linear_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {
namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

Matrix diffusion_for(const PhysicalParams& params, const std::vector<Mode>& order) {
  const BathOccupations n = bath_occupations(params);
  const int dim = 2 * static_cast<int>(order.size());
  Matrix D = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < order.size(); ++j) {
    const double d = params.kappa(order[j]) * (2.0 * n[order[j]] + 1.0);
    const int i = 2 * static_cast<int>(j);
    D(i, i) = d;
    D(i + 1, i + 1) = d;
  }
  return D;
}

std::vector<double> kappas_for(const PhysicalParams& params, const std::vector<Mode>& order) {
  std::vector<double> out;
  for (Mode m : order) out.push_back(params.kappa(m));
  return out;
}

Matrix lyapunov_operator_apply(const Matrix& M, const Matrix& V) {
  return M * V + V * M.transpose();
}

}  // namespace

int DriftDiffusion::index_of(Mode m) const {
  const auto it = std::find(mode_order.begin(), mode_order.end(), m);
  return it == mode_order.end() ? -1 : static_cast<int>(it - mode_order.begin());
}

int CovarianceMatrix::index_of(Mode m) const {
  const auto it = std::find(mode_order.begin(), mode_order.end(), m);
  if (it == mode_order.end())
    throw LookupError(fmt::format("mode '{}' is not part of this covariance matrix", mode_name(m)));
  return static_cast<int>(it - mode_order.begin());
}

Eigen::Matrix2d CovarianceMatrix::block(Mode a, Mode b) const {
  return values.block<2, 2>(2 * index_of(a), 2 * index_of(b));
}

CovarianceMatrix CovarianceMatrix::vacuum(std::vector<Mode> order) {
  const auto dim = static_cast<Eigen::Index>(2 * order.size());
  return {Matrix::Identity(dim, dim) / 2.0, std::move(order)};
}

Matrix symplectic_form(int n_modes) {
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    omega(2 * j, 2 * j + 1) = 1.0;
    omega(2 * j + 1, 2 * j) = -1.0;
  }
  return omega;
}

Matrix quadrature_drift(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  // da = A a + B a^*, a = (x + i y)/sqrt2:
  //   dx = Re(A + B) x - Im(A - B) y,  dy = Im(A + B) x + Re(A - B) y.
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXcd S = A + B, T = A - B;
  Matrix M(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      M(2 * i, 2 * j) = S(i, j).real();
      M(2 * i, 2 * j + 1) = -T(i, j).imag();
      M(2 * i + 1, 2 * j) = S(i, j).imag();
      M(2 * i + 1, 2 * j + 1) = T(i, j).real();
    }
  }
  return M;
}

DriftDiffusion build_reduced_drift(const EffectiveCouplings& eff, const PhysicalParams& params) {
  if (eff.above_threshold)
    throw UnsupportedRegimeError(
        "fluctuation analysis is only defined below threshold (<a_r> = <a_p> = <a_q> = 0)");
  const Detunings d = derived_detunings(params);
  if (d.k != 0.0)
    throw UnsupportedRegimeError(
        "the reduced [r, p, q] drift assumes a resonant drive; use build_full_drift for Delta_k != 0");
  if (eff.G_p < 0.0 || eff.G_q < 0.0)
    throw DomainError("effective couplings must be nonnegative magnitudes");

  const double kr = params.kappa_r, kp = params.kappa_p, kq = params.kappa_q;
  const double w = params.omega_r, Gp = eff.G_p, Gq = eff.G_q;

  DriftDiffusion dd;
  dd.mode_order = {Mode::r, Mode::p, Mode::q};
  dd.drift.resize(6, 6);
  // clang-format off
  dd.drift <<
      -kr,   w,   0,  Gp,   0, -Gq,
       -w, -kr, -Gp,   0, -Gq,   0,
        0,  Gp, -kp,   w,   0,   0,
      -Gp,   0,  -w, -kp,   0,   0,
        0, -Gq,   0,   0, -kq,  -w,
      -Gq,   0,   0,   0,   w, -kq;
  // clang-format on
  dd.diffusion = diffusion_for(params, dd.mode_order);
  dd.kappas = kappas_for(params, dd.mode_order);
  return dd;
}

DriftDiffusion build_full_drift(const PhysicalParams& params, const SemiclassicalState& state) {
  if (state.regime == Regime::AboveThreshold)
    throw UnsupportedRegimeError(
        "fluctuation analysis is only defined below threshold (<a_r> = <a_p> = <a_q> = 0)");
  params.validate();
  const Detunings d = derived_detunings(params);
  const cd mk = state.means.k, mr = state.means.r, mp = state.means.p, mq = state.means.q;
  const double gp = params.g_p, gq = params.g_q;
  enum { K = 0, R = 1, P = 2, Q = 3 };

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(4, 4);
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(4, 4);
  A(K, K) = -(I * d.k + params.kappa_k);
  A(K, P) = -I * gp * std::conj(mr);
  B(K, R) = -I * gp * mp;
  A(K, Q) = -I * gq * mr;
  A(K, R) += -I * gq * mq;

  A(R, R) = -(I * params.omega_r + params.kappa_r);
  A(R, P) = -I * gp * std::conj(mk);
  B(R, K) = -I * gp * mp;
  B(R, Q) = -I * gq * mk;
  A(R, K) += -I * gq * std::conj(mq);

  A(P, P) = -(I * d.p + params.kappa_p);
  A(P, R) = -I * gp * mk;
  A(P, K) += -I * gp * mr;

  A(Q, Q) = -(I * d.q + params.kappa_q);
  B(Q, R) = -I * gq * mk;
  A(Q, K) += -I * gq * std::conj(mr);

  DriftDiffusion dd;
  dd.mode_order = {Mode::k, Mode::r, Mode::p, Mode::q};
  dd.drift = quadrature_drift(A, B);
  dd.diffusion = diffusion_for(params, dd.mode_order);
  dd.kappas = kappas_for(params, dd.mode_order);
  return dd;
}

std::string_view stability_name(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Marginal: return "marginal";
    case Stability::Unstable: return "unstable";
  }
  return "?";
}

StabilityVerdict is_stable(const DriftDiffusion& dd) {
  StabilityVerdict v;
  Eigen::EigenSolver<Matrix> es(dd.drift, /*computeEigenvectors=*/false);
  v.eigenvalues = es.eigenvalues();
  v.abscissa = v.eigenvalues.real().maxCoeff();
  const double kmax = dd.kappas.empty() ? dd.drift.diagonal().cwiseAbs().maxCoeff()
                                        : *std::max_element(dd.kappas.begin(), dd.kappas.end());
  v.tolerance = 1e-6 * kmax;
  if (v.abscissa < -v.tolerance)
    v.verdict = Stability::Stable;
  else if (v.abscissa <= v.tolerance)
    v.verdict = Stability::Marginal;
  else
    v.verdict = Stability::Unstable;
  return v;
}

PhysicalityReport check_physicality(const CovarianceMatrix& cm) {
  PhysicalityReport r;
  const Eigen::MatrixXcd H =
      cm.values.cast<cd>() + 0.5 * I * symplectic_form(cm.n_modes()).cast<cd>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  r.spectrum = es.eigenvalues();
  r.min_eigenvalue = r.spectrum.minCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> ev(cm.values, Eigen::EigenvaluesOnly);
  r.min_cm_eigenvalue = ev.eigenvalues().minCoeff();
  r.physical = r.min_eigenvalue >= -1e-10 * std::max(1.0, cm.values.norm());
  r.positive_definite = r.min_cm_eigenvalue > 0.0;
  return r;
}

double lyapunov_residual(const DriftDiffusion& dd, const Matrix& V) {
  const double scale = 2.0 * dd.drift.norm() * V.norm() + dd.diffusion.norm();
  return scale > 0.0 ? (lyapunov_operator_apply(dd.drift, V) + dd.diffusion).norm() / scale : 0.0;
}

LyapunovSolution solve_lyapunov(const DriftDiffusion& dd) {
  const StabilityVerdict verdict = is_stable(dd);
  if (verdict.abscissa >= 0.0)
    throw NoSteadyStateError(fmt::format(
        "drift matrix is not Hurwitz (max Re lambda = {:.6g} rad/s); no steady state",
        verdict.abscissa));

  const Eigen::Index n = dd.drift.rows();
  // Rescale to O(1) entries; M V + V M^T = -D is invariant under M, D -> M/s, D/s.
  const double scale = dd.drift.cwiseAbs().maxCoeff();
  const Matrix M = dd.drift / scale;
  const Matrix D = dd.diffusion / scale;

  const Matrix In = Matrix::Identity(n, n);
  Matrix L = Matrix::Zero(n * n, n * n);
  // Column-major vec: vec(M V) = (I (x) M) vec V, vec(V M^T) = (M (x) I) vec V.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      L.block(i * n, j * n, n, n) += In(i, j) * M;
      L.block(i * n, j * n, n, n) += M(i, j) * In;
    }
  Eigen::FullPivLU<Matrix> lu(L);

  const auto solve = [&](const Matrix& rhs) {
    const Vector x = lu.solve(Eigen::Map<const Vector>(rhs.data(), rhs.size()));
    return Matrix(Eigen::Map<const Matrix>(x.data(), n, n));
  };
  Matrix V = solve(-D);
  for (int sweep = 0; sweep < 2; ++sweep) V += solve(-D - lyapunov_operator_apply(M, V));
  V = ((V + V.transpose()) / 2.0).eval();

  LyapunovSolution sol;
  sol.cm.values = V;
  sol.cm.mode_order = dd.mode_order;
  sol.residual = lyapunov_residual(dd, V);
  sol.reciprocal_condition = lu.rcond();
  sol.ill_conditioned = sol.reciprocal_condition < 1e-12;
  sol.marginal = verdict.verdict != Stability::Stable;
  sol.physicality = check_physicality(sol.cm);
  return sol;
}

RotationSplit split_free_rotation(const DriftDiffusion& dd) {
  const Matrix& M = dd.drift;
  const int n = static_cast<int>(M.rows()) / 2;
  Matrix R = Matrix::Zero(M.rows(), M.cols());
  std::vector<double> omega(n);
  bool noise_isotropic = dd.diffusion.rows() == M.rows();
  for (int j = 0; j < n && noise_isotropic; ++j) {
    omega[j] = 0.5 * (M(2 * j, 2 * j + 1) - M(2 * j + 1, 2 * j));
    R(2 * j, 2 * j + 1) = omega[j];
    R(2 * j + 1, 2 * j) = -omega[j];
    const double dx = dd.diffusion(2 * j, 2 * j), dy = dd.diffusion(2 * j + 1, 2 * j + 1);
    if (std::abs(dx - dy) > 1e-14 * std::max(std::abs(dx), std::abs(dy)) ||
        dd.diffusion(2 * j, 2 * j + 1) != 0.0 || dd.diffusion(2 * j + 1, 2 * j) != 0.0)
      noise_isotropic = false;
  }
  RotationSplit s;
  s.slow = M - R;
  const double mnorm = M.norm();
  s.commutator = mnorm > 0.0 ? (R * s.slow - s.slow * R).norm() / mnorm : 0.0;
  if (s.commutator <= 1e-12 && noise_isotropic && R.norm() > 0.0)
    s.omega = std::move(omega);
  else
    s.slow = M;
  return s;
}

double default_covariance_dt(const DriftDiffusion& dd) {
  Eigen::EigenSolver<Matrix> es(split_free_rotation(dd).slow, false);
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  // The Lyapunov flow has eigenvalues lambda_i + lambda_j, |.| <= 2 radius;
  // RK4 is stable on the imaginary axis up to |h lambda| ~ 2.8.
  return 0.1 / radius;
}

CovarianceMatrix evolve_covariance(const DriftDiffusion& dd, const CovarianceMatrix& V0,
                                   double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("evolve_covariance: dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw DomainError("evolve_covariance: t_end must be >= 0");
  if (V0.values.rows() != dd.drift.rows() || V0.values.cols() != dd.drift.cols())
    throw DomainError("evolve_covariance: V0 does not match the drift dimension");
  const StabilityVerdict verdict = is_stable(dd);
  if (verdict.verdict == Stability::Unstable)
    throw DivergenceError(
        fmt::format("evolve_covariance: drift is unstable (max Re lambda = {:.6g} rad/s); the "
                    "covariance grows without bound",
                    verdict.abscissa),
        0.0);

  // With the split, W = e^{-Rt} V e^{-R^T t} obeys dW/dt = C W + W C^T + D.
  const RotationSplit split = split_free_rotation(dd);
  const Matrix& M = split.slow;
  const Matrix& D = dd.diffusion;
  const auto f = [&](const Matrix& V) -> Matrix { return M * V + V * M.transpose() + D; };

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = steps ? t_end / static_cast<double>(steps) : 0.0;
  Matrix V = V0.values;
  for (std::size_t s = 0; s < steps; ++s) {
    const Matrix k1 = f(V);
    const Matrix k2 = f(V + (h / 2) * k1);
    const Matrix k3 = f(V + (h / 2) * k2);
    const Matrix k4 = f(V + h * k3);
    V += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    if ((s & 1023) == 1023 || s + 1 == steps) {
      if (!V.allFinite()) {
        const double t = static_cast<double>(s + 1) * h;
        throw DivergenceError(
            fmt::format("evolve_covariance: non-finite covariance at t = {:.6g} s", t), t);
      }
    }
  }
  if (split.active()) {
    Matrix rot = Matrix::Zero(V.rows(), V.cols());
    for (std::size_t j = 0; j < split.omega.size(); ++j) {
      const double c = std::cos(split.omega[j] * t_end), sn = std::sin(split.omega[j] * t_end);
      const auto i = static_cast<Eigen::Index>(2 * j);
      rot(i, i) = c;
      rot(i, i + 1) = sn;
      rot(i + 1, i) = -sn;
      rot(i + 1, i + 1) = c;
    }
    V = rot * V * rot.transpose();
  }
  return {V, V0.mode_order};
}

double relative_frobenius(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace combtangle
