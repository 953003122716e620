#include <stdexcept>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "csfrot/profile.hpp"

using namespace csfrot;

namespace {

Profile inverse_profile() {
  // r = 1/(-z): the alpha = 1 end of the power family, which the constructor
  // rejects; used as the negative control.
  return Profile::custom(
      [](double z) {
        const double y = -z;
        return ProfileEvaluation{z, 1.0 / y, 1.0 / (y * y), 2.0 / (y * y * y)};
      },
      Interval{-std::numeric_limits<double>::infinity(), 0.0}, "inverse");
}

double fd1(const Profile& p, double z, double h) {
  return (p.eval(z + h).r - p.eval(z - h).r) / (2.0 * h);
}

double fd2(const Profile& p, double z, double h) {
  return (p.eval(z + h).r - 2.0 * p.eval(z).r + p.eval(z - h).r) / (h * h);
}

}  // namespace

TEST_CASE("power profile closed-form evaluation") {
  const Profile p = Profile::power(0.5);

  const ProfileEvaluation a = p.eval(-2.0);
  CHECK(a.r == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
  CHECK(a.r1 == doctest::Approx(0.5 * std::pow(2.0, -1.5)).epsilon(1e-15));
  CHECK(a.r2 == doctest::Approx(0.75 * std::pow(2.0, -2.5)).epsilon(1e-15));

  const ProfileEvaluation b = p.eval(-1.0);
  CHECK(b.r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.r1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.r2 == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("power profile rejects bad inputs") {
  CHECK_THROWS_AS(Profile::power(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Profile::power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Profile::power(-0.5), std::invalid_argument);

  const Profile p = Profile::power(0.5);
  CHECK_THROWS_AS(p.eval(0.0), std::domain_error);
  CHECK_THROWS_AS(p.eval(1.0), std::domain_error);
}

TEST_CASE("exp_inverse flattens toward z -> -inf") {
  const Profile p = Profile::exp_inverse();
  const ProfileEvaluation far = p.eval(-1e6);
  CHECK(std::abs(far.r - 1.0) < 2e-6);
  CHECK(far.r1 > 0.0);
  CHECK(far.r1 < 1e-11);
  CHECK_THROWS_AS(p.eval(0.0), std::domain_error);
}

TEST_CASE("profile derivatives agree with centered differences at order 2") {
  const std::vector<Profile> profiles = {Profile::power(0.5),
                                         Profile::power(0.3),
                                         Profile::exp_inverse()};
  const double h = 2e-3;
  for (const Profile& p : profiles) {
    for (double z : {-1.5, -2.0, -3.0, -5.0}) {
      const ProfileEvaluation pe = p.eval(z);
      const double e1 = std::abs(fd1(p, z, h) - pe.r1);
      const double e1h = std::abs(fd1(p, z, h / 2.0) - pe.r1);
      CHECK(e1 / e1h == doctest::Approx(4.0).epsilon(0.125));
      const double e2 = std::abs(fd2(p, z, h) - pe.r2);
      const double e2h = std::abs(fd2(p, z, h / 2.0) - pe.r2);
      CHECK(e2 / e2h == doctest::Approx(4.0).epsilon(0.125));
    }
  }
}

TEST_CASE("setting_rs_margin at the worked examples") {
  const Profile p = Profile::power(0.5);

  const RsMargin m = setting_rs_margin(p, -2.0);
  CHECK(m.slope_ok);
  // exact rationals: r r'' = 3/32, r'^2 = 1/32
  CHECK(m.inequality_margin ==
        doctest::Approx(3.0 / 32.0 - 2.0 * (1.0 / 32.0) * (33.0 / 32.0))
            .epsilon(1e-14));
  CHECK(m.inequality_margin == doctest::Approx(0.029296875).epsilon(1e-12));

  // near the boundary the margin crosses zero
  const RsMargin boundary = setting_rs_margin(p, -0.7937005259840997);
  CHECK(std::abs(boundary.inequality_margin) < 1e-9);
}

TEST_CASE("inverse profile fails the curvature condition everywhere") {
  const Profile p = inverse_profile();
  for (double z = -10.0; z < -0.2; z += 0.1) {
    CHECK(setting_rs_margin(p, z).inequality_margin < 0.0);
  }
  CHECK_THROWS_AS(validity_window(p, -10.0, -0.1, 1000), std::runtime_error);
}

TEST_CASE("power_btilde closed form") {
  CHECK(power_btilde(0.5) == doctest::Approx(-std::cbrt(0.5)).epsilon(1e-14));
  CHECK(power_btilde(0.3) ==
        doctest::Approx(-0.51709024894153208).epsilon(1e-12));
  CHECK(power_btilde(0.8) ==
        doctest::Approx(-1.5740532978840350).epsilon(1e-12));
  CHECK_THROWS_AS(power_btilde(0.0), std::invalid_argument);
  CHECK_THROWS_AS(power_btilde(1.0), std::invalid_argument);
}

TEST_CASE("validity_window agrees with the closed form across alpha") {
  for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const Profile p = Profile::power(alpha);
    const ValidityWindow w = validity_window(p, -10.0, -0.01, 10000);
    CHECK(std::abs(w.b_tilde - power_btilde(alpha)) < 1e-6);
    CHECK(w.margin > 0.0);
  }
}

TEST_CASE("validity_window finds a finite window for exp_inverse") {
  const ValidityWindow w =
      validity_window(Profile::exp_inverse(), -50.0, -0.1, 10000);
  CHECK(w.b_tilde < -1.0);
  CHECK(w.b_tilde > -2.0);
  const Profile p = Profile::exp_inverse();
  // conditions hold just below and fail just above the reported endpoint
  const RsMargin below = setting_rs_margin(p, w.b_tilde - 0.1);
  CHECK(below.slope_ok);
  CHECK(below.inequality_margin > 0.0);
  const RsMargin above = setting_rs_margin(p, w.b_tilde + 0.05);
  CHECK((!above.slope_ok || above.inequality_margin <= 0.0));
}

TEST_CASE("inequality margin changes sign exactly once on a scan") {
  for (double alpha : {0.5, 0.8}) {
    const Profile p = Profile::power(alpha);
    const double crossing = -std::pow(
        2.0 * alpha * alpha * alpha / (1.0 - alpha), 1.0 / (2.0 * (alpha + 1.0)));
    int sign_changes = 0;
    double prev = setting_rs_margin(p, -3.0).inequality_margin;
    double change_at = 0.0;
    for (double z = -3.0 + 1e-3; z < -0.2; z += 1e-3) {
      const double cur = setting_rs_margin(p, z).inequality_margin;
      if ((prev > 0.0) != (cur > 0.0)) {
        ++sign_changes;
        change_at = z;
      }
      prev = cur;
    }
    CHECK(sign_changes == 1);
    CHECK(std::abs(change_at - crossing) < 2e-3);
  }
}

TEST_CASE("custom profiles validate their inputs") {
  CHECK_THROWS_AS(Profile::custom(nullptr, Interval{-10.0, 0.0}),
                  std::invalid_argument);
  const Profile bad = Profile::custom(
      [](double z) { return ProfileEvaluation{z, -1.0, 0.0, 0.0}; },
      Interval{-10.0, 0.0});
  CHECK_THROWS_AS(bad.eval(-1.0), std::domain_error);
  const Profile p = inverse_profile();
  CHECK_THROWS_AS(p.eval(0.5), std::domain_error);
}

TEST_CASE("validity_window input validation") {
  const Profile p = Profile::power(0.5);
  CHECK_THROWS_AS(validity_window(p, -1.0, -2.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(validity_window(p, -2.0, -1.0, 1), std::invalid_argument);
}
