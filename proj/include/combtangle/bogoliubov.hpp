#pragma once

#include <utility>

#include "combtangle/linear_dynamics.hpp"

namespace combtangle {

/// Two-mode-squeezed Bogoliubov modes of the (p, q) pair,
///   beta_1 = a_q cosh(xi) + a_p^dag sinh(xi)
///   beta_2 = a_p cosh(xi) + a_q^dag sinh(xi),
/// with xi = artanh(G_q / G_p). In this frame the fluctuation Hamiltonian reads
/// omega_r (a_r^dag a_r + beta_2^dag beta_2 - beta_1^dag beta_1)
///   + G_tilde (a_r^dag beta_2 + h.c.),  G_tilde = sqrt(G_p^2 - G_q^2),
/// so only beta_2 exchanges excitations with the skyrmion.
struct BogoliubovFrame {
  double xi = 0.0;
  double G_tilde = 0.0;
  double occupancy_beta1 = 0.0;
  double occupancy_beta2 = 0.0;
};

/// artanh(G_q / G_p); DomainError unless 0 <= G_q < G_p.
double squeeze_parameter(const EffectiveCouplings& eff);

/// Normal-ordered second moments of one or two modes, read from symmetrized
/// quadrature moments (X = (a + a^dag)/sqrt2).
namespace moments {
/// <a^dag a> = (V_XX + V_YY - 1) / 2
double number(const CovarianceMatrix& V, Mode m);
/// <a_1 a_2> for distinct modes.
std::complex<double> pair_annihilation(const CovarianceMatrix& V, Mode m1, Mode m2);
}  // namespace moments

/// (<beta_1^dag beta_1>, <beta_2^dag beta_2>) evaluated from the steady-state
/// moments of V:
///   <beta_1^dag beta_1> = c^2 <a_q^dag a_q> + s^2 (<a_p^dag a_p> + 1) + s c <a_q^dag a_p^dag + a_q a_p>
/// and p <-> q for beta_2 (c = cosh xi, s = sinh xi).
std::pair<double, double> bogoliubov_occupations(const CovarianceMatrix& V,
                                                 const EffectiveCouplings& eff);

BogoliubovFrame bogoliubov_frame(const CovarianceMatrix& V, const EffectiveCouplings& eff);

}  // namespace combtangle
