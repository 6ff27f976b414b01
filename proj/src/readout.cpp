#include "combtangle/readout.hpp"

#include <cmath>

#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {
namespace {

Eigen::Matrix4d mode_map(const ReadoutChannel& p, const ReadoutChannel& q) {
  Eigen::Matrix4d K = Eigen::Matrix4d::Zero();
  K.block<2, 2>(0, 0) = p.gain() * readout_rotation();
  K.block<2, 2>(2, 2) = q.gain() * readout_rotation();
  return K;
}

Eigen::Matrix4d probe_noise(const ReadoutChannel& p, const ReadoutChannel& q) {
  Eigen::Matrix4d N = Eigen::Matrix4d::Zero();
  N(0, 0) = N(1, 1) = (2.0 * p.input_occupation + 1.0) / 2.0;
  N(2, 2) = N(3, 3) = (2.0 * q.input_occupation + 1.0) / 2.0;
  return N;
}

}  // namespace

double ReadoutChannel::gain() const { return std::sqrt(2.0) * g / std::sqrt(kappa_c); }

void ReadoutChannel::validate() const {
  if (!(kappa_c > 0.0) || !(g >= 0.0) || !(input_occupation >= 0.0))
    throw DomainError("readout channel needs kappa_c > 0, g >= 0 and n_c >= 0");
  if (g > 0.0 && kappa_c / g < min_ratio)
    throw AdiabaticityError(fmt::format(
        "readout channel: kappa_c / g = {:.3g} is below {:.3g}; the probe does not follow the "
        "magnon adiabatically",
        kappa_c / g, min_ratio));
}

bool ReadoutChannel::warning() const { return g > 0.0 && kappa_c / g < warn_ratio; }

Eigen::Matrix2d readout_rotation() {
  Eigen::Matrix2d R;
  R << 0.0, 1.0, -1.0, 0.0;
  return R;
}

Eigen::Matrix2d output_covariance(const Eigen::Matrix2d& v_mode, const ReadoutChannel& ch) {
  ch.validate();
  const Eigen::Matrix2d R = readout_rotation();
  const double eta = ch.gain();
  return eta * eta * R * v_mode * R.transpose() +
         (2.0 * ch.input_occupation + 1.0) / 2.0 * Eigen::Matrix2d::Identity();
}

Eigen::Matrix4d joint_output_covariance(const Eigen::Matrix4d& v_pq, const ReadoutChannel& ch_p,
                                        const ReadoutChannel& ch_q) {
  ch_p.validate();
  ch_q.validate();
  const Eigen::Matrix4d K = mode_map(ch_p, ch_q);
  return K * v_pq * K.transpose() + probe_noise(ch_p, ch_q);
}

Eigen::Matrix4d reconstruct_covariance(const Eigen::Matrix4d& out_pq, const ReadoutChannel& ch_p,
                                       const ReadoutChannel& ch_q) {
  ch_p.validate();
  ch_q.validate();
  if (!(ch_p.gain() > 0.0) || !(ch_q.gain() > 0.0))
    throw DomainError("reconstruct_covariance: both readout gains must be nonzero");
  // K is a scaled rotation per block, so K^-1 = blockdiag(R^T / eta).
  Eigen::Matrix4d Kinv = Eigen::Matrix4d::Zero();
  Kinv.block<2, 2>(0, 0) = readout_rotation().transpose() / ch_p.gain();
  Kinv.block<2, 2>(2, 2) = readout_rotation().transpose() / ch_q.gain();
  return Kinv * (out_pq - probe_noise(ch_p, ch_q)) * Kinv.transpose();
}

Eigen::Matrix4d normalized_joint_output_covariance(const Eigen::Matrix4d& v_pq,
                                                   const ReadoutChannel& ch_p,
                                                   const ReadoutChannel& ch_q) {
  const Eigen::Matrix4d out = joint_output_covariance(v_pq, ch_p, ch_q);
  Eigen::Vector4d s;
  const double sp = 1.0 / std::sqrt(1.0 + ch_p.gain() * ch_p.gain());
  const double sq = 1.0 / std::sqrt(1.0 + ch_q.gain() * ch_q.gain());
  s << sp, sp, sq, sq;
  return s.asDiagonal() * out * s.asDiagonal();
}

}  // namespace combtangle
