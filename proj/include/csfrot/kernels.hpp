#pragma once

#include <span>

#include "csfrot/curve.hpp"

// Grid kernels of the inner loops.  The default entry points use OpenMP
// when the build enables it and the grid is large enough to amortize a
// parallel region; csfrot::kernels::serial holds the plain-loop reference
// used by the tests and by the kernel benchmark.  Elementwise kernels do
// identical per-lane arithmetic in both variants, so results are bitwise
// equal; reductions stay serial everywhere to keep outputs independent of
// the thread count.
namespace csfrot::kernels {

inline constexpr int parallel_grain = 4096;

void fd_periodic(std::span<const double> f, double theta_step,
                 std::span<double> d1, std::span<double> d2);

// Callers must have validated that every z lies inside the profile domain:
// the loop body cannot throw.
void point_fields(const Profile& profile, std::span<const double> z,
                  std::span<const double> zdot, std::span<const double> zddot,
                  CurveFields& out);

void graph_rhs(const CurveFields& fields, std::span<double> dzdt);

/// out = base + a * k
void axpy(double a, std::span<const double> k, std::span<const double> base,
          std::span<double> out);

/// out = z + (dt/6) (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<const double> z, double dt,
                 std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4,
                 std::span<double> out);

namespace serial {

void fd_periodic(std::span<const double> f, double theta_step,
                 std::span<double> d1, std::span<double> d2);
void point_fields(const Profile& profile, std::span<const double> z,
                  std::span<const double> zdot, std::span<const double> zddot,
                  CurveFields& out);
void graph_rhs(const CurveFields& fields, std::span<double> dzdt);
void axpy(double a, std::span<const double> k, std::span<const double> base,
          std::span<double> out);
void rk4_combine(std::span<const double> z, double dt,
                 std::span<const double> k1, std::span<const double> k2,
                 std::span<const double> k3, std::span<const double> k4,
                 std::span<double> out);

}  // namespace serial

}  // namespace csfrot::kernels
