#include "doctest.h"

#include <cmath>
#include <random>

#include "combtangle/errors.hpp"
#include "combtangle/gaussian_measures.hpp"
#include "combtangle/readout.hpp"
#include "test_support.hpp"

using namespace combtangle;

namespace {

ReadoutChannel channel(double g_MHz, double kc_MHz, double n = 0.0) {
  ReadoutChannel c;
  c.g = from_MHz(g_MHz);
  c.kappa_c = from_MHz(kc_MHz);
  c.input_occupation = n;
  return c;
}

bool physical(const Eigen::Matrix4d& v) {
  return check_physicality({v, {Mode::p, Mode::q}}).physical;
}

}  // namespace

TEST_CASE("gain and adiabaticity") {
  const auto c = channel(1.0, 20.0);
  CHECK(c.gain() == doctest::Approx(std::sqrt(2.0) * c.g / std::sqrt(c.kappa_c)));
  CHECK_NOTHROW(c.validate());
  CHECK_FALSE(c.warning());
  CHECK_THROWS_AS(channel(1.0, 4.0).validate(), AdiabaticityError);
  CHECK_NOTHROW(channel(1.0, 7.0).validate());
  CHECK(channel(1.0, 7.0).warning());
}

TEST_CASE("single-mode output of the vacuum") {
  const auto c = channel(1.0, 20.0, 0.3);
  const double eta = c.gain();
  const Eigen::Matrix2d out = output_covariance(Eigen::Matrix2d::Identity() / 2, c);
  CHECK(out(0, 0) == doctest::Approx(eta * eta / 2 + 0.8));
  CHECK(out(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("quarter turn swaps the quadratures") {
  Eigen::Matrix2d v;
  v << 2.0, 0.3, 0.3, 0.7;
  const auto c = channel(10.0, 200.0);
  const double eta2 = c.gain() * c.gain();
  const Eigen::Matrix2d out = output_covariance(v, c);
  CHECK(out(0, 0) == doctest::Approx(eta2 * 0.7 + 0.5));
  CHECK(out(1, 1) == doctest::Approx(eta2 * 2.0 + 0.5));
  CHECK(out(0, 1) == doctest::Approx(-eta2 * 0.3));
}

TEST_CASE("reconstruction inverts the output map") {
  std::mt19937_64 rng(5);
  const auto cp = channel(1.0, 20.0, 0.1), cq = channel(2.0, 30.0, 0.0);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Matrix4d v = testing::random_physical_cm(2, rng);
    const Eigen::Matrix4d back = reconstruct_covariance(joint_output_covariance(v, cp, cq), cp, cq);
    CHECK((back - v).norm() / v.norm() < 1e-12);
  }
}

TEST_CASE("normalized output is a physical state that keeps some entanglement") {
  std::mt19937_64 rng(6);
  const auto cp = channel(1.0, 20.0), cq = channel(1.0, 20.0);
  for (int i = 0; i < 20; ++i)
    CHECK(physical(normalized_joint_output_covariance(testing::random_physical_cm(2, rng), cp, cq)));
  const Eigen::Matrix4d v = testing::tmsv(1.0);
  const Eigen::Matrix4d out = normalized_joint_output_covariance(v, cp, cq);
  const double e_in = log_negativity(ReducedCM::from_matrix(v)).log_negativity;
  const double e_out = log_negativity(ReducedCM::from_matrix(out)).log_negativity;
  CHECK(e_out > 0.0);
  CHECK(e_out < e_in);
}

TEST_CASE("probe noise degrades the retained entanglement") {
  const Eigen::Matrix4d v = testing::tmsv(0.8);
  double previous = 1e9;
  for (double n : {0.0, 0.5, 2.0}) {
    const auto c = channel(3.0, 40.0, n);
    const double e = log_negativity(ReducedCM::from_matrix(
                                        normalized_joint_output_covariance(v, c, c)))
                         .log_negativity;
    CHECK(e < previous);
    previous = e;
  }
}
