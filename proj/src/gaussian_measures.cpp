#include "combtangle/gaussian_measures.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {
namespace {

constexpr double kClampTolerance = 1e-12;

double det2(const Eigen::Matrix2d& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

Negativity from_nu(double nu) {
  return {std::max(0.0, -std::log(2.0 * nu)), nu};
}

}  // namespace

Eigen::Matrix4d ReducedCM::assembled() const {
  Eigen::Matrix4d m;
  m << v1, v12, v12.transpose(), v2;
  return m;
}

ReducedCM ReducedCM::from_matrix(const Eigen::Matrix4d& m, Mode first, Mode second) {
  ReducedCM r;
  r.v1 = m.block<2, 2>(0, 0);
  r.v2 = m.block<2, 2>(2, 2);
  r.v12 = m.block<2, 2>(0, 2);
  r.first = first;
  r.second = second;
  return r;
}

ReducedCM reduce_cm(const CovarianceMatrix& V, Mode first, Mode second) {
  if (first == second) throw LookupError("reduce_cm: the two modes must be distinct");
  ReducedCM r;
  r.v1 = V.block(first, first);
  r.v2 = V.block(second, second);
  r.v12 = V.block(first, second);
  r.first = first;
  r.second = second;
  return r;
}

double det4(const Eigen::Matrix4d& m) {
  // Laplace expansion by complementary 2x2 minors of the first two rows.
  const auto minor = [&](int r0, int c0, int c1) {
    return m(r0, c0) * m(r0 + 1, c1) - m(r0, c1) * m(r0 + 1, c0);
  };
  return minor(0, 0, 1) * minor(2, 2, 3) - minor(0, 0, 2) * minor(2, 1, 3) +
         minor(0, 0, 3) * minor(2, 1, 2) + minor(0, 1, 2) * minor(2, 0, 3) -
         minor(0, 1, 3) * minor(2, 0, 2) + minor(0, 2, 3) * minor(2, 0, 1);
}

Negativity log_negativity(const ReducedCM& rcm) {
  const double sigma = det2(rcm.v1) + det2(rcm.v2) - 2.0 * det2(rcm.v12);
  const double det = det4(rcm.assembled());
  double radicand = sigma * sigma - 4.0 * det;
  const double scale = std::max(1.0, sigma * sigma);
  if (radicand < -kClampTolerance * scale)
    throw DomainError(fmt::format(
        "log_negativity: negative radicand {:.3g}; the covariance matrix is not physical", radicand));
  radicand = std::max(0.0, radicand);
  // nu^2 = (Sigma - sqrt(Sigma^2 - 4 det)) / 2, written without cancellation.
  const double denom = sigma + std::sqrt(radicand);
  if (!(denom > 0.0) || det < -kClampTolerance * scale)
    throw DomainError("log_negativity: the covariance matrix is not physical");
  const double nu2 = std::max(0.0, 2.0 * det / denom);
  return from_nu(std::sqrt(nu2));
}

Negativity log_negativity_symplectic(const ReducedCM& rcm) {
  Eigen::Matrix4d P = Eigen::Matrix4d::Identity();
  P(3, 3) = -1.0;
  const Eigen::Matrix4d vt = P * rcm.assembled() * P;
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  // Eigenvalues of Omega V~ are +-i nu_j; those of i Omega V~ are +-nu_j.
  Eigen::EigenSolver<Eigen::Matrix4d> es(omega * vt, false);
  const double nu = es.eigenvalues().cwiseAbs().minCoeff();
  if (!std::isfinite(nu)) throw DomainError("log_negativity_symplectic: non-finite spectrum");
  return from_nu(nu);
}

Steering gaussian_steering(const ReducedCM& rcm) {
  const double d1 = det2(2.0 * rcm.v1);
  const double d2 = det2(2.0 * rcm.v2);
  const double d = 16.0 * det4(rcm.assembled());  // det(2 V~)
  if (!(d1 > 0.0) || !(d2 > 0.0) || !(d > 0.0))
    throw DomainError("gaussian_steering: non-positive determinant; the state is not physical");
  const double joint = 0.5 * std::log(d);
  return {std::max(0.0, 0.5 * std::log(d1) - joint), std::max(0.0, 0.5 * std::log(d2) - joint)};
}

double effective_number(const CovarianceMatrix& V, Mode m) {
  const int i = 2 * V.index_of(m);
  const double n = (V.values(i, i) + V.values(i + 1, i + 1) - 1.0) / 2.0;
  return (n < 0.0 && n > -1e-10) ? 0.0 : n;
}

const PairCorrelation& CorrelationReport::pair(Mode a, Mode b) const {
  for (const auto& p : pairs)
    if ((p.first == a && p.second == b) || (p.first == b && p.second == a)) return p;
  throw LookupError(fmt::format("no correlation entry for pair ({}, {})", mode_name(a), mode_name(b)));
}

double CorrelationReport::occupation(Mode m) const {
  for (const auto& [mode, n] : occupations)
    if (mode == m) return n;
  throw LookupError(fmt::format("no occupation for mode '{}'", mode_name(m)));
}

double CorrelationReport::steering(Mode from, Mode to) const {
  const PairCorrelation& p = pair(from, to);
  return p.first == from ? p.s12 : p.s21;
}

CorrelationReport correlation_report(const CovarianceMatrix& V,
                                     const std::optional<EffectiveCouplings>& eff) {
  CorrelationReport report;
  std::vector<Mode> modes;
  for (Mode m : V.mode_order)
    if (m != Mode::k) modes.push_back(m);

  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = i + 1; j < modes.size(); ++j) {
      const ReducedCM rcm = reduce_cm(V, modes[i], modes[j]);
      const Negativity en = log_negativity(rcm);
      const Steering s = gaussian_steering(rcm);
      report.pairs.push_back({modes[i], modes[j], en.log_negativity, en.nu, s.s12, s.s21});
    }
  }
  for (Mode m : modes) report.occupations.emplace_back(m, effective_number(V, m));

  if (eff && eff->G_q < eff->G_p && eff->G_q >= 0.0 &&
      std::find(modes.begin(), modes.end(), Mode::p) != modes.end() &&
      std::find(modes.begin(), modes.end(), Mode::q) != modes.end())
    report.bogoliubov = bogoliubov_frame(V, *eff);
  return report;
}

}  // namespace combtangle
