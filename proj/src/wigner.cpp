#include "combtangle/wigner.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {
namespace {

constexpr double pi = std::numbers::pi;

double wrap_half_turn(double a) {
  while (a > pi / 2) a -= pi;
  while (a <= -pi / 2) a += pi;
  return a;
}

}  // namespace

std::string_view quadrature_name(Quadrature q) {
  switch (q) {
    case Quadrature::Xp: return "X_p";
    case Quadrature::Yp: return "Y_p";
    case Quadrature::Xq: return "X_q";
    case Quadrature::Yq: return "Y_q";
  }
  return "?";
}

std::optional<Quadrature> parse_quadrature(std::string_view name) {
  for (Quadrature q : {Quadrature::Xp, Quadrature::Yp, Quadrature::Xq, Quadrature::Yq})
    if (name == quadrature_name(q)) return q;
  return std::nullopt;
}

double wigner_value(const Eigen::Matrix4d& v_pq, const Eigen::Vector4d& mu) {
  Eigen::LLT<Eigen::Matrix4d> llt(v_pq);
  if (llt.info() != Eigen::Success)
    throw DomainError("wigner_value: covariance block is not positive definite");
  const double sqrt_det = llt.matrixL().toDenseMatrix().diagonal().prod();
  const Eigen::Vector4d w = llt.matrixL().solve(mu);
  // pi^2 sqrt(det 2V) = 4 pi^2 sqrt(det V)
  return std::exp(-0.5 * w.squaredNorm()) / (4.0 * pi * pi * sqrt_det);
}

double Ellipse::minor_angle() const { return wrap_half_turn(angle + pi / 2); }

std::vector<Eigen::Vector2d> Ellipse::sample(std::size_t n) const {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(n);
  const double c = std::cos(angle), s = std::sin(angle);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
    const double u = semi_major * std::cos(t), v = semi_minor * std::sin(t);
    pts.emplace_back(center_x + c * u - s * v, center_y + s * u + c * v);
  }
  return pts;
}

Ellipse contour_ellipse(const Eigen::Matrix2d& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sigma);
  if (es.info() != Eigen::Success || !(es.eigenvalues()(0) > 0.0))
    throw DomainError("contour_ellipse: degenerate 2x2 covariance");
  Ellipse e;
  e.variance_minor = es.eigenvalues()(0);
  e.variance_major = es.eigenvalues()(1);
  // mu^T Sigma^-1 mu = 2  =>  semi-axis sqrt(2 lambda)
  e.semi_minor = std::sqrt(2.0 * e.variance_minor);
  e.semi_major = std::sqrt(2.0 * e.variance_major);
  const Eigen::Vector2d major = es.eigenvectors().col(1);
  e.angle = wrap_half_turn(std::atan2(major(1), major(0)));
  return e;
}

double WignerGrid::integral() const {
  if (axis1_values.size() < 2 || axis2_values.size() < 2) return 0.0;
  const double da = axis1_values[1] - axis1_values[0];
  const double db = axis2_values[1] - axis2_values[0];
  return values.sum() * da * db;
}

WignerGrid marginal_pair(const Eigen::Matrix4d& v_pq, Quadrature a, Quadrature b,
                         const GridSpec& grid) {
  if (a == b) throw DomainError("marginal_pair: the two quadratures must differ");
  if (grid.resolution < 2 || !(grid.extent_sigmas > 0.0))
    throw DomainError("marginal_pair: invalid grid specification");
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);

  WignerGrid out;
  out.axis1 = a;
  out.axis2 = b;
  out.covariance << v_pq(ia, ia), v_pq(ia, ib), v_pq(ib, ia), v_pq(ib, ib);
  const double det = out.covariance.determinant();
  if (!(det > 0.0) || !(out.covariance(0, 0) > 0.0))
    throw DomainError("marginal_pair: degenerate 2x2 covariance");
  out.contour_1e = contour_ellipse(out.covariance);
  out.vacuum_radius = 1.0;  // mu^T (I/2)^-1 mu = 2

  const Eigen::Matrix2d inv = out.covariance.inverse();
  const double norm = 1.0 / (2.0 * pi * std::sqrt(det));
  const auto axis = [&](double sigma) {
    std::vector<double> v(grid.resolution);
    const double half = grid.extent_sigmas * sigma;
    for (std::size_t i = 0; i < grid.resolution; ++i)
      v[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(grid.resolution - 1);
    return v;
  };
  out.axis1_values = axis(std::sqrt(out.covariance(0, 0)));
  out.axis2_values = axis(std::sqrt(out.covariance(1, 1)));

  const auto n = static_cast<Eigen::Index>(grid.resolution);
  out.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Vector2d mu(out.axis1_values[i], out.axis2_values[j]);
      out.values(i, j) = norm * std::exp(-0.5 * mu.dot(inv * mu));
    }
  }
  return out;
}

}  // namespace combtangle
