#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"

#include "csfrot/geometry.hpp"

using namespace csfrot;

namespace {

double fd_of(double (*f)(const Profile&, double), const Profile& p, double z,
             double h) {
  return (f(p, z + h) - f(p, z - h)) / (2.0 * h);
}

double kcal_of(const Profile& p, double z) { return surface_scalars(p, z).kcal; }
double g_of(const Profile& p, double z) { return surface_scalars(p, z).g_speed; }

}  // namespace

TEST_CASE("surface scalars at the worked point (power 0.5, z=-2)") {
  const Profile p = Profile::power(0.5);
  const SurfaceScalars s = surface_scalars(p, -2.0);

  // exact values: kcal = sqrt(2/33), kbar = -64/363, G = 8/33
  CHECK(s.kcal == doctest::Approx(std::sqrt(2.0 / 33.0)).epsilon(1e-14));
  CHECK(s.kbar == doctest::Approx(-64.0 / 363.0).epsilon(1e-14));
  CHECK(s.g_speed == doctest::Approx(8.0 / 33.0).epsilon(1e-14));
  CHECK(s.pc_theta == doctest::Approx(-1.3926212476455827).epsilon(1e-12));
  CHECK(s.pc_z == doctest::Approx(0.12660193160414388).epsilon(1e-12));
  CHECK(s.g_theta_theta == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.g_zz == doctest::Approx(33.0 / 32.0).epsilon(1e-14));

  CHECK(surface_scalars(p, -1.0).kcal ==
        doctest::Approx(0.5 / std::sqrt(1.25)).epsilon(1e-14));
}

TEST_CASE("Gauss curvature factors into the principal curvatures") {
  std::mt19937 rng(20240811);
  for (const Profile& p : {Profile::power(0.5), Profile::power(0.3),
                           Profile::exp_inverse()}) {
    std::uniform_real_distribution<double> zdist(-8.0, -1.8);
    for (int i = 0; i < 1000; ++i) {
      const SurfaceScalars s = surface_scalars(p, zdist(rng));
      CHECK(std::abs(s.kbar - s.pc_theta * s.pc_z) <= 1e-12 * std::abs(s.kbar));
    }
  }
}

TEST_CASE("kcal_prime closed form and finite-difference oracle") {
  const Profile p = Profile::power(0.5);
  // exact reduction at z=-2: sqrt(33/32) * 14/121
  CHECK(kcal_prime(p, -2.0) ==
        doctest::Approx(std::sqrt(33.0 / 32.0) * 14.0 / 121.0).epsilon(1e-14));

  for (double z : {-1.5, -2.0, -4.0}) {
    const double exact = kcal_prime(p, z);
    CHECK(std::abs(fd_of(kcal_of, p, z, 1e-5) - exact) <= 1e-7 * std::abs(exact));
    const double e = std::abs(fd_of(kcal_of, p, z, 2e-3) - exact);
    const double eh = std::abs(fd_of(kcal_of, p, z, 1e-3) - exact);
    CHECK(e / eh == doctest::Approx(4.0).epsilon(0.125));
  }
}

TEST_CASE("g_prime closed form and finite-difference oracle") {
  const Profile p = Profile::power(0.5);
  CHECK(g_prime(p, -2.0) == doctest::Approx(40.0 / 363.0).epsilon(1e-14));

  for (double z : {-1.5, -2.0, -4.0}) {
    const double exact = g_prime(p, z);
    CHECK(std::abs(fd_of(g_of, p, z, 1e-5) - exact) <= 1e-7 * std::abs(exact));
    const double e = std::abs(fd_of(g_of, p, z, 2e-3) - exact);
    const double eh = std::abs(fd_of(g_of, p, z, 1e-3) - exact);
    CHECK(e / eh == doctest::Approx(4.0).epsilon(0.125));
  }
}

TEST_CASE("curvature signs on the admissible window") {
  for (double alpha : {0.3, 0.5, 0.7}) {
    const Profile p = Profile::power(alpha);
    const double b = power_btilde(alpha);
    for (int k = 0; k <= 200; ++k) {
      const double z = (b - 5.0) + k * (4.95 / 200.0);  // up to b - 0.05
      const SurfaceScalars s = surface_scalars(p, z);
      CHECK(s.kbar < 0.0);
      CHECK(2.0 * s.kcal * s.kcal + s.kbar < 0.0);
      CHECK(g_prime(p, z) > 0.0);
    }
  }
}

TEST_CASE("parallel curvature vanishes toward z -> -inf") {
  const Profile p = Profile::power(0.5);
  CHECK(surface_scalars(p, -1e6).kcal < 1e-5);
  double prev = surface_scalars(p, -1.0).kcal;
  for (double z : {-10.0, -100.0, -1000.0, -1e4, -1e5, -1e6}) {
    const double cur = surface_scalars(p, z).kcal;
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("connection coefficient coincides with kcal") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> zdist(-10.0, -0.9);
  const Profile p = Profile::power(0.5);
  for (int i = 0; i < 1000; ++i) {
    const double z = zdist(rng);
    CHECK(connection_coefficient(p, z) == surface_scalars(p, z).kcal);
  }
  CHECK(connection_coefficient(Profile::exp_inverse(), -1e9) ==
        doctest::Approx(0.0).epsilon(1e-8));
}
