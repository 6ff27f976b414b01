#pragma once

#include <Eigen/Dense>

namespace combtangle {

/// Microwave probe resonantly coupled to one magnon tooth. In the adiabatic
/// limit kappa_c >> g the output field is
///   dc_out = (-i sqrt2 g / sqrt(kappa_c)) da + dc_in.
struct ReadoutChannel {
  double g = 0.0;        // rad/s
  double kappa_c = 0.0;  // rad/s
  double input_occupation = 0.0;
  /// kappa_c / g below this is rejected.
  double min_ratio = 5.0;
  /// kappa_c / g in [min_ratio, warn_ratio) is accepted with a warning.
  double warn_ratio = 10.0;

  /// eta = sqrt2 g / sqrt(kappa_c).
  double gain() const;
  /// Throws AdiabaticityError below min_ratio.
  void validate() const;
  bool warning() const;
};

/// Quarter-turn induced by the -i factor: (X_c, Y_c) = eta (Y_a, -X_a).
Eigen::Matrix2d readout_rotation();

/// eta^2 R V R^T + (2 n_c + 1)/2 I.
Eigen::Matrix2d output_covariance(const Eigen::Matrix2d& v_mode, const ReadoutChannel& ch);

/// Mode-wise map of a two-mode block with independent probe noises.
Eigen::Matrix4d joint_output_covariance(const Eigen::Matrix4d& v_pq,
                                        const ReadoutChannel& ch_p,
                                        const ReadoutChannel& ch_q);

/// Inverse of joint_output_covariance for known gains (both must be nonzero).
Eigen::Matrix4d reconstruct_covariance(const Eigen::Matrix4d& out_pq,
                                       const ReadoutChannel& ch_p,
                                       const ReadoutChannel& ch_q);

/// Output CM of the commutator-normalized output mode c_out / sqrt(1 + eta^2):
/// a beam splitter of transmissivity eta^2/(1 + eta^2) mixing in the probe.
Eigen::Matrix4d normalized_joint_output_covariance(const Eigen::Matrix4d& v_pq,
                                                   const ReadoutChannel& ch_p,
                                                   const ReadoutChannel& ch_q);

}  // namespace combtangle
