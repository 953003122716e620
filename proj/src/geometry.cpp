#include "csfrot/geometry.hpp"

#include <cmath>

namespace csfrot {

SurfaceScalars surface_scalars(const Profile& profile, double z) {
  const ProfileEvaluation pe = profile.eval(z);
  const double q = pe.r1 * pe.r1 + 1.0;
  const double sq = std::sqrt(q);
  SurfaceScalars s;
  s.z = z;
  s.kcal = pe.r1 / (pe.r * sq);
  s.kbar = -pe.r2 / (pe.r * q * q);
  s.g_speed = pe.r1 / (pe.r * q);
  s.pc_theta = -1.0 / (pe.r * sq);
  s.pc_z = pe.r2 / (q * sq);
  s.g_theta_theta = pe.r * pe.r;
  s.g_zz = q;
  return s;
}

double kcal_prime(const Profile& profile, double z) {
  const SurfaceScalars s = surface_scalars(profile, z);
  return -std::sqrt(s.g_zz) * (s.kcal * s.kcal + s.kbar);
}

double g_prime(const Profile& profile, double z) {
  const ProfileEvaluation pe = profile.eval(z);
  const double q = pe.r1 * pe.r1 + 1.0;
  return (pe.r * pe.r2 * (1.0 - pe.r1 * pe.r1) - pe.r1 * pe.r1 * q) /
         (pe.r * pe.r * q * q);
}

double connection_coefficient(const Profile& profile, double z) {
  const ProfileEvaluation pe = profile.eval(z);
  return pe.r1 / (pe.r * std::sqrt(pe.r1 * pe.r1 + 1.0));
}

}  // namespace csfrot
