#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "csfrot/profile.hpp"

namespace csfrot {

// Closed embedded curve that is a graph over the parallels, sampled as
// z(theta_i) on the uniform periodic grid theta_i = i * 2 pi / n.  There is
// no duplicated endpoint; neighbours wrap modulo n.
struct GraphCurve {
  double theta_step = 0.0;
  std::vector<double> z;

  int n() const { return static_cast<int>(z.size()); }
  double theta(int i) const { return theta_step * i; }
  double z_min() const;
  double z_max() const;
};

GraphCurve make_graph_curve(int n, const std::function<double(double)>& z_of_theta);

// Per-sample derived quantities of a graph curve:
//   w       coordinate speed sqrt(r^2 + (r'^2+1) zdot^2)
//   u       <N, E_z> = r/w  (positive: the graph property)
//   n_theta <N, E_theta> = -zdot sqrt(r'^2+1) / w
//   kappa   curvature of the curve with respect to -N
//   v       1/u
// plus the profile values r, r', r'' at each sample and the periodic finite
// differences zdot, zddot, which the flow and the verification residuals
// reuse.
struct CurveFields {
  std::vector<double> w, u, n_theta, kappa, v;
  std::vector<double> r, r1, r2;
  std::vector<double> zdot, zddot;

  int n() const { return static_cast<int>(w.size()); }
  void resize(int n);
};

// Second-order centered differences with periodic wraparound.  Requires
// length >= 4.
void fd_periodic(std::span<const double> values, double theta_step,
                 std::span<double> d1, std::span<double> d2);
std::pair<std::vector<double>, std::vector<double>> fd_periodic(
    std::span<const double> values, double theta_step);

// Throws std::domain_error when the curve leaves the profile's domain.
CurveFields curve_fields(const Profile& profile, const GraphCurve& curve);

/// L = sum_i w_i * theta_step.
double arc_length(const Profile& profile, const GraphCurve& curve);
double arc_length(const CurveFields& fields, double theta_step);

/// Arc-length derivative (1/w) d/dtheta of a per-sample field.
std::vector<double> d_ds(std::span<const double> field,
                         const CurveFields& fields, double theta_step);

// Max-norm residuals of the five pointwise arc-length identities of a graph
// curve:
//   (1) ds u       = (-kappa + kcal u) n_theta
//   (2) ds n_theta = -u (-kappa + kcal u)
//   (3) ds z       = -n_theta / sqrt(r'^2+1)
//   (4) lap u      = -ds kappa n_theta - kcal kappa (1-u^2)
//                    + (2 kcal^2 + kbar)(u - u^3) - u (kcal u - kappa)^2
//   (5) lap z      = -r' r'' (1-u^2)/(r'^2+1)^2 - (kappa u - kcal u^2)/sqrt(r'^2+1)
// with lap = ds ds applied twice.
struct IdentityResiduals {
  double ds_u, ds_n_theta, ds_z, lap_u, lap_z;
  double max() const;
  double operator[](int i) const;
  static const char* label(int i);
};

IdentityResiduals static_identity_residuals(const Profile& profile,
                                            const GraphCurve& curve);

}  // namespace csfrot
