#pragma once

#include <cmath>

#include "csfrot/profile.hpp"

namespace csfrot::detail {

struct PointFields {
  double r, r1, r2;
  double w, u, n_theta, kappa, v;
};

// All per-sample quantities of a graph curve at one grid node.  zdot and
// zddot are derivatives with respect to theta.
inline PointFields point_fields(const ProfileEvaluation& pe, double zdot,
                                double zddot) {
  PointFields f;
  f.r = pe.r;
  f.r1 = pe.r1;
  f.r2 = pe.r2;
  const double q = pe.r1 * pe.r1 + 1.0;
  const double sq = std::sqrt(q);
  const double w2 = pe.r * pe.r + q * zdot * zdot;
  f.w = std::sqrt(w2);
  f.u = pe.r / f.w;
  f.n_theta = -zdot * sq / f.w;
  f.kappa = ((pe.r1 * zdot * zdot / q) * (2.0 * q - pe.r * pe.r2) +
             (pe.r / sq) * (pe.r * pe.r1 - zddot * q)) /
            (w2 * f.w);
  f.v = f.w / pe.r;
  return f;
}

// dz/dt at fixed theta.  The normal motion moves material points by
// dz/dt = -kappa u / sqrt(r'^2+1) and dtheta/dt = kappa zdot sqrt(r'^2+1)/(w r);
// subtracting the tangential drift V^theta * zdot collapses to a single term:
//   dz/dt|_theta = -kappa (u/sqrt(r'^2+1) + zdot^2 sqrt(r'^2+1)/(w r))
//               = -kappa w / (r sqrt(r'^2+1)).
inline double graph_rhs_point(double kappa, double w, double r, double r1) {
  return -kappa * w / (r * std::sqrt(r1 * r1 + 1.0));
}

/// Tangential drift speed V^theta of a material point in graph coordinates.
inline double drift_speed_point(double kappa, double zdot, double w, double r,
                                double r1) {
  return kappa * zdot * std::sqrt(r1 * r1 + 1.0) / (w * r);
}

}  // namespace csfrot::detail
