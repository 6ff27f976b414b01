#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "combtangle/model.hpp"

namespace combtangle {

/// One phase-space coordinate of the (p, q) pair.
enum class Quadrature { Xp = 0, Yp = 1, Xq = 2, Yq = 3 };

std::string_view quadrature_name(Quadrature q);  // "X_p", ...
std::optional<Quadrature> parse_quadrature(std::string_view name);

/// Gaussian Wigner function of the (p, q) pair at mu = (X_p, Y_p, X_q, Y_q),
///   W = exp(-mu^T V^-1 mu / 2) / (pi^2 sqrt(det 2V)),
/// normalized so that it integrates to one (vacuum value at the origin: 1/pi^2).
double wigner_value(const Eigen::Matrix4d& v_pq, const Eigen::Vector4d& mu);

/// 1/e contour of a bivariate Gaussian: mu^T Sigma^-1 mu = 2.
struct Ellipse {
  double center_x = 0.0;
  double center_y = 0.0;
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double angle = 0.0;  // of the major axis from axis 1, in (-pi/2, pi/2]
  double variance_major = 0.0;
  double variance_minor = 0.0;

  /// Minor-axis variance below the vacuum variance 1/2.
  bool squeezed() const { return variance_minor < 0.5; }
  /// Angle of the minor (squeezed) axis, in (-pi/2, pi/2].
  double minor_angle() const;
  std::vector<Eigen::Vector2d> sample(std::size_t n) const;
};

struct GridSpec {
  std::size_t resolution = 201;  // points per axis
  double extent_sigmas = 6.0;    // half-width in marginal standard deviations
};

struct WignerGrid {
  Quadrature axis1 = Quadrature::Xp;
  Quadrature axis2 = Quadrature::Yp;
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;
  Eigen::MatrixXd values;  // values(i, j) at (axis1_values[i], axis2_values[j])
  Eigen::Matrix2d covariance;
  Ellipse contour_1e;
  double vacuum_radius = 1.0;

  /// Riemann sum times cell area.
  double integral() const;
};

Ellipse contour_ellipse(const Eigen::Matrix2d& sigma);

/// Bivariate normal marginal of two quadratures on a regular grid.
WignerGrid marginal_pair(const Eigen::Matrix4d& v_pq, Quadrature a, Quadrature b,
                         const GridSpec& grid = {});

}  // namespace combtangle
