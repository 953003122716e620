#include "csfrot/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "csfrot/kernels.hpp"

namespace csfrot {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double GraphCurve::z_min() const { return *std::min_element(z.begin(), z.end()); }
double GraphCurve::z_max() const { return *std::max_element(z.begin(), z.end()); }

GraphCurve make_graph_curve(int n, const std::function<double(double)>& z_of_theta) {
  if (n < 16) {
    throw std::invalid_argument("graph curve needs at least 16 samples, got " +
                                std::to_string(n));
  }
  GraphCurve c;
  c.theta_step = kTwoPi / n;
  c.z.resize(n);
  for (int i = 0; i < n; ++i) c.z[i] = z_of_theta(c.theta_step * i);
  return c;
}

void CurveFields::resize(int n) {
  for (auto* a : {&w, &u, &n_theta, &kappa, &v, &r, &r1, &r2, &zdot, &zddot}) {
    a->resize(n);
  }
}

void fd_periodic(std::span<const double> values, double theta_step,
                 std::span<double> d1, std::span<double> d2) {
  if (values.size() < 4) {
    throw std::invalid_argument("fd_periodic needs at least 4 samples");
  }
  if (d1.size() != values.size() || d2.size() != values.size()) {
    throw std::invalid_argument("fd_periodic: output size mismatch");
  }
  if (!(theta_step > 0.0)) {
    throw std::invalid_argument("fd_periodic: theta_step must be positive");
  }
  kernels::fd_periodic(values, theta_step, d1, d2);
}

std::pair<std::vector<double>, std::vector<double>> fd_periodic(
    std::span<const double> values, double theta_step) {
  std::vector<double> d1(values.size()), d2(values.size());
  fd_periodic(values, theta_step, d1, d2);
  return {std::move(d1), std::move(d2)};
}

namespace {

// Profile domains are intervals, so validating the curve's range up front
// makes the parallel kernel body throw-free.
void require_in_domain(const Profile& profile, const GraphCurve& curve) {
  const Interval dom = profile.domain_hint();
  const double lo = curve.z_min();
  const double hi = curve.z_max();
  if (!dom.contains(lo) || !dom.contains(hi)) {
    throw std::domain_error("curve range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "] leaves the domain of profile '" +
                            profile.name() + "'");
  }
}

}  // namespace

CurveFields curve_fields(const Profile& profile, const GraphCurve& curve) {
  if (curve.n() < 4) {
    throw std::invalid_argument("curve_fields needs at least 4 samples");
  }
  require_in_domain(profile, curve);
  auto [d1, d2] = fd_periodic(curve.z, curve.theta_step);
  CurveFields f;
  kernels::point_fields(profile, curve.z, d1, d2, f);
  return f;
}

double arc_length(const CurveFields& fields, double theta_step) {
  double sum = 0.0;
  for (double wi : fields.w) sum += wi;
  return sum * theta_step;
}

double arc_length(const Profile& profile, const GraphCurve& curve) {
  return arc_length(curve_fields(profile, curve), curve.theta_step);
}

std::vector<double> d_ds(std::span<const double> field,
                         const CurveFields& fields, double theta_step) {
  if (static_cast<int>(field.size()) != fields.n()) {
    throw std::invalid_argument("d_ds: field length does not match the curve");
  }
  auto [d1, d2] = fd_periodic(field, theta_step);
  for (int i = 0; i < fields.n(); ++i) d1[i] /= fields.w[i];
  return std::move(d1);
}

double IdentityResiduals::max() const {
  return std::max({ds_u, ds_n_theta, ds_z, lap_u, lap_z});
}

double IdentityResiduals::operator[](int i) const {
  switch (i) {
    case 0: return ds_u;
    case 1: return ds_n_theta;
    case 2: return ds_z;
    case 3: return lap_u;
    case 4: return lap_z;
  }
  throw std::out_of_range("IdentityResiduals index");
}

const char* IdentityResiduals::label(int i) {
  switch (i) {
    case 0: return "ds_u";
    case 1: return "ds_n_theta";
    case 2: return "ds_z";
    case 3: return "lap_u";
    case 4: return "lap_z";
  }
  throw std::out_of_range("IdentityResiduals index");
}

IdentityResiduals static_identity_residuals(const Profile& profile,
                                            const GraphCurve& curve) {
  const CurveFields f = curve_fields(profile, curve);
  const int n = f.n();
  const double h = curve.theta_step;

  const std::vector<double> ds_u = d_ds(f.u, f, h);
  const std::vector<double> ds_nt = d_ds(f.n_theta, f, h);
  const std::vector<double> ds_z = d_ds(curve.z, f, h);
  const std::vector<double> ds_k = d_ds(f.kappa, f, h);
  const std::vector<double> lap_u = d_ds(ds_u, f, h);
  const std::vector<double> lap_z = d_ds(ds_z, f, h);

  IdentityResiduals res{0.0, 0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    const double q = f.r1[i] * f.r1[i] + 1.0;
    const double sq = std::sqrt(q);
    const double kcal = f.r1[i] / (f.r[i] * sq);
    const double kbar = -f.r2[i] / (f.r[i] * q * q);
    const double u = f.u[i];
    const double nt = f.n_theta[i];
    const double k = f.kappa[i];

    const double r1v = ds_u[i] - (-k + kcal * u) * nt;
    const double r2v = ds_nt[i] + u * (-k + kcal * u);
    const double r3v = ds_z[i] + nt / sq;
    const double r4v = lap_u[i] -
                       (-ds_k[i] * nt - kcal * k * (1.0 - u * u) +
                        (2.0 * kcal * kcal + kbar) * (u - u * u * u) -
                        u * (kcal * u - k) * (kcal * u - k));
    const double r5v = lap_z[i] -
                       (-f.r1[i] * f.r2[i] * (1.0 - u * u) / (q * q) -
                        (k * u - kcal * u * u) / sq);

    res.ds_u = std::max(res.ds_u, std::abs(r1v));
    res.ds_n_theta = std::max(res.ds_n_theta, std::abs(r2v));
    res.ds_z = std::max(res.ds_z, std::abs(r3v));
    res.lap_u = std::max(res.lap_u, std::abs(r4v));
    res.lap_z = std::max(res.lap_z, std::abs(r5v));
  }
  return res;
}

}  // namespace csfrot
