#pragma once

#include "csfrot/profile.hpp"

namespace csfrot {

/// Closed-form scalars of the rotational surface at height z.
struct SurfaceScalars {
  double z;
  double kcal;           // curvature of the theta-circle, r'/(r sqrt(r'^2+1))
  double kbar;           // Gauss curvature, -r''/(r (r'^2+1)^2)
  double g_speed;        // circle-flow speed G = r'/(r (r'^2+1))
  double pc_theta;       // principal curvature -1/(r sqrt(r'^2+1))
  double pc_z;           // principal curvature r''/(r'^2+1)^(3/2)
  double g_theta_theta;  // metric coefficient r^2
  double g_zz;           // metric coefficient r'^2 + 1
};

SurfaceScalars surface_scalars(const Profile& profile, double z);

/// d kcal/dz = -sqrt(r'^2+1) (kcal^2 + kbar).
double kcal_prime(const Profile& profile, double z);

/// dG/dz = (r r'' (1 - r'^2) - r'^2 (r'^2+1)) / (r^2 (r'^2+1)^2).
/// Strictly positive wherever the admissibility conditions hold.
double g_prime(const Profile& profile, double z);

// The single nonzero scalar of the orthonormal frame connection, with the
// sign table
//   D_{E_theta} E_theta = -c E_z      D_{E_theta} E_z = +c E_theta
//   D_{E_z}     E_theta =  0          D_{E_z}     E_z =  0
// where c = r'/(r sqrt(r'^2+1)).  Numerically identical to kcal.
double connection_coefficient(const Profile& profile, double z);

}  // namespace csfrot
