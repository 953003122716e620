#include <cstddef>

#include "csfrot/detail/point_math.hpp"
#include "csfrot/kernels.hpp"

// Parallel variants of the grid kernels.  Every loop is elementwise with the
// same per-lane arithmetic as the serial reference, so the two produce
// bitwise-identical arrays for any thread count.  Small grids skip the
// parallel region entirely (the flow's working resolutions sit well below
// parallel_grain; the crossover is measured by the kernel benchmark).

namespace csfrot::kernels {

void fd_periodic(std::span<const double> f, double theta_step,
                 std::span<double> d1, std::span<double> d2) {
  const int n = static_cast<int>(f.size());
  const double inv_2h = 1.0 / (2.0 * theta_step);
  const double inv_h2 = 1.0 / (theta_step * theta_step);
#pragma omp parallel for schedule(static) if (n >= parallel_grain)
  for (int i = 0; i < n; ++i) {
    const double fm = f[(i + n - 1) % n];
    const double fp = f[(i + 1) % n];
    d1[i] = (fp - fm) * inv_2h;
    d2[i] = (fp - 2.0 * f[i] + fm) * inv_h2;
  }
}

void point_fields(const Profile& profile, std::span<const double> z,
                  std::span<const double> zdot, std::span<const double> zddot,
                  CurveFields& out) {
  const int n = static_cast<int>(z.size());
  out.resize(n);
#pragma omp parallel for schedule(static) if (n >= parallel_grain)
  for (int i = 0; i < n; ++i) {
    const detail::PointFields p =
        detail::point_fields(profile.eval(z[i]), zdot[i], zddot[i]);
    out.w[i] = p.w;
    out.u[i] = p.u;
    out.n_theta[i] = p.n_theta;
    out.kappa[i] = p.kappa;
    out.v[i] = p.v;
    out.r[i] = p.r;
    out.r1[i] = p.r1;
    out.r2[i] = p.r2;
    out.zdot[i] = zdot[i];
    out.zddot[i] = zddot[i];
  }
}

void graph_rhs(const CurveFields& fields, std::span<double> dzdt) {
  const int n = fields.n();
#pragma omp parallel for schedule(static) if (n >= parallel_grain)
  for (int i = 0; i < n; ++i) {
    dzdt[i] = detail::graph_rhs_point(fields.kappa[i], fields.w[i],
                                      fields.r[i], fields.r1[i]);
  }
}

void axpy(double a, std::span<const double> k, std::span<const double> base,
          std::span<double> out) {
  const int n = static_cast<int>(k.size());
#pragma omp parallel for schedule(static) if (n >= parallel_grain)
  for (int i = 0; i < n; ++i) out[i] = base[i] + a * k[i];
}

void rk4_combine(std::span<const double> z, double dt,
                 std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4,
                 std::span<double> out) {
  const int n = static_cast<int>(z.size());
  const double c = dt / 6.0;
#pragma omp parallel for schedule(static) if (n >= parallel_grain)
  for (int i = 0; i < n; ++i) {
    out[i] = z[i] + c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

}  // namespace csfrot::kernels
