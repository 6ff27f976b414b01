#include "doctest.h"

#include <cmath>

#include "combtangle/bogoliubov.hpp"
#include "combtangle/errors.hpp"
#include "combtangle/gaussian_measures.hpp"
#include "test_support.hpp"

using namespace combtangle;

namespace {

CovarianceMatrix pq_state(const Eigen::Matrix4d& v) {
  return {v, {Mode::p, Mode::q}};
}

}  // namespace

TEST_CASE("squeeze parameter") {
  CHECK(squeeze_parameter(EffectiveCouplings::direct(1.0, 0.85)) ==
        doctest::Approx(1.25615281198806).epsilon(1e-13));
  CHECK(squeeze_parameter(EffectiveCouplings::direct(2.0, 0.0)) == 0.0);
  CHECK_THROWS_AS(squeeze_parameter(EffectiveCouplings::direct(1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(squeeze_parameter(EffectiveCouplings::direct(1.0, 1.5)), DomainError);
  CHECK_THROWS_AS(squeeze_parameter(EffectiveCouplings::direct(0.0, 0.0)), DomainError);
}

TEST_CASE("vacuum seen from the squeezed frame") {
  const auto eff = EffectiveCouplings::direct(1.0, 0.6);
  const double s = std::sinh(squeeze_parameter(eff));
  const auto [n1, n2] = bogoliubov_occupations(pq_state(Eigen::Matrix4d::Identity() / 2), eff);
  CHECK(n1 == doctest::Approx(s * s).epsilon(1e-14));
  CHECK(n2 == doctest::Approx(s * s).epsilon(1e-14));
}

TEST_CASE("a matching two-mode squeezed state is the Bogoliubov vacuum") {
  for (double ratio : {0.2, 0.6, 0.85}) {
    const auto eff = EffectiveCouplings::direct(1.0, ratio);
    const double xi = squeeze_parameter(eff);
    const Eigen::Matrix4d v = testing::tmsv(-xi);  // <a_p a_q> = -sinh(2 xi)/2
    const auto [n1, n2] = bogoliubov_occupations(pq_state(v), eff);
    CHECK(std::abs(n1) < 1e-12 * std::cosh(2 * xi));
    CHECK(std::abs(n2) < 1e-12 * std::cosh(2 * xi));
  }
}

TEST_CASE("normal-ordered moments") {
  const double r = 0.4;
  const auto cm = pq_state(testing::tmsv(r));
  CHECK(moments::number(cm, Mode::p) == doctest::Approx(std::sinh(r) * std::sinh(r)));
  const auto m = moments::pair_annihilation(cm, Mode::p, Mode::q);
  CHECK(m.real() == doctest::Approx(std::sinh(2 * r) / 2));
  CHECK(m.imag() == doctest::Approx(0.0));
  CHECK_THROWS_AS(moments::pair_annihilation(cm, Mode::p, Mode::p), DomainError);
}

TEST_CASE("frame summary") {
  const auto eff = EffectiveCouplings::direct(5.0, 3.0);
  const auto f = bogoliubov_frame(pq_state(Eigen::Matrix4d::Identity() / 2), eff);
  CHECK(f.G_tilde == doctest::Approx(4.0));
  CHECK(f.xi == doctest::Approx(std::atanh(0.6)));
  CHECK(f.occupancy_beta1 == doctest::Approx(std::sinh(f.xi) * std::sinh(f.xi)));
}

TEST_CASE("report attaches the frame only where it is defined") {
  const auto cm = pq_state(Eigen::Matrix4d::Identity() / 2);
  CHECK(correlation_report(cm, EffectiveCouplings::direct(1.0, 0.5)).bogoliubov.has_value());
  CHECK_FALSE(correlation_report(cm, EffectiveCouplings::direct(1.0, 1.2)).bogoliubov.has_value());
}
