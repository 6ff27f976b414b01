#include "combtangle/bogoliubov.hpp"

#include <cmath>

#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {

double squeeze_parameter(const EffectiveCouplings& eff) {
  if (!(eff.G_q >= 0.0) || !(eff.G_q < eff.G_p))
    throw DomainError(fmt::format(
        "Bogoliubov frame needs 0 <= G_q < G_p (got G_q/G_p = {:.6g})", eff.G_q / eff.G_p));
  return std::atanh(eff.G_q / eff.G_p);
}

namespace moments {

double number(const CovarianceMatrix& V, Mode m) {
  const int i = 2 * V.index_of(m);
  return (V.values(i, i) + V.values(i + 1, i + 1) - 1.0) / 2.0;
}

std::complex<double> pair_annihilation(const CovarianceMatrix& V, Mode m1, Mode m2) {
  if (m1 == m2) throw DomainError("pair_annihilation needs two distinct modes");
  const Eigen::Matrix2d c = V.block(m1, m2);
  // a1 a2 = (X1 + iY1)(X2 + iY2)/2; distinct modes commute.
  return {(c(0, 0) - c(1, 1)) / 2.0, (c(0, 1) + c(1, 0)) / 2.0};
}

}  // namespace moments

std::pair<double, double> bogoliubov_occupations(const CovarianceMatrix& V,
                                                 const EffectiveCouplings& eff) {
  const double xi = squeeze_parameter(eff);
  const double c = std::cosh(xi), s = std::sinh(xi);
  const double np = moments::number(V, Mode::p);
  const double nq = moments::number(V, Mode::q);
  // <a_q^dag a_p^dag + a_q a_p> = 2 Re <a_q a_p>
  const double anomalous = 2.0 * moments::pair_annihilation(V, Mode::q, Mode::p).real();
  // The a_p a_p^dag (a_q a_q^dag) term of beta_1 (beta_2) contributes <n> + 1.
  const double beta1 = c * c * nq + s * s * (np + 1.0) + s * c * anomalous;
  const double beta2 = c * c * np + s * s * (nq + 1.0) + s * c * anomalous;
  return {beta1, beta2};
}

BogoliubovFrame bogoliubov_frame(const CovarianceMatrix& V, const EffectiveCouplings& eff) {
  BogoliubovFrame f;
  f.xi = squeeze_parameter(eff);
  f.G_tilde = std::sqrt(eff.G_p * eff.G_p - eff.G_q * eff.G_q);
  std::tie(f.occupancy_beta1, f.occupancy_beta2) = bogoliubov_occupations(V, eff);
  return f;
}

}  // namespace combtangle
