#pragma once

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csfrot/curve.hpp"
#include "csfrot/geometry.hpp"

namespace csfrot {

/// z0(theta) = c0 + sum_m amplitude_m * cos(m theta + phase_m)
struct InitialCurveSpec {
  struct Mode {
    int m = 1;
    double amplitude = 0.0;
    double phase = 0.0;
  };

  double c0 = 0.0;
  std::vector<Mode> modes;

  double operator()(double theta) const;
  GraphCurve sample(int n) const;
  /// c0 + sum |amplitude_m|; the sampled curve never exceeds this.
  double upper_bound() const;
  double lower_bound() const;
};

struct FlowConfig {
  Profile profile;
  InitialCurveSpec initial;
  int n = 256;
  double t_end = 1.0;
  double cfl_safety = 0.25;
  double snapshot_every = 0.0;  // <= 0: only the initial and final snapshots
  double kappa_blowup_guard = 1e6;
  int diagnostics_stride = 1;  // emit a row every k-th accepted step
};

struct FlowState {
  double t = 0.0;
  GraphCurve curve;
  CurveFields fields;
  double dt_last = 0.0;
};

struct DiagnosticsRow {
  double t, z_min, z_max, v_max, kappa_min, kappa_max, length, g_max, dt;
};

// Weighted curvature monitor g = phi(v) kappa^2 with phi(v) = v^2/(1 - k v^2).
// k is fixed from the initial curve as 1/(2 max v^2): graph preservation
// bounds v by its initial max, so k v^2 stays below ~1/2 for the whole run.
struct GradientMonitor {
  double k = 0.0;
  std::vector<double> phi, g;
  double g_max = 0.0;
};

enum class Termination {
  reached_t_end,
  left_validity_window,
  curvature_blowup,
  dt_underflow,
  left_domain,
  reached_domain_floor,
};

const char* to_string(Termination t);

struct FlowError : std::runtime_error {
  FlowError(Termination kind_, double t_, const std::string& what_)
      : std::runtime_error(what_), kind(kind_), t(t_) {}
  Termination kind;
  double t;
};

struct Snapshot {
  double t;
  GraphCurve curve;
};

struct RunResult {
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<Snapshot> snapshots;
  Termination termination = Termination::reached_t_end;
  double t_final = 0.0;
  double monitor_k = 0.0;
  double b_tilde = 0.0;
  std::string message;

  bool completed() const { return termination == Termination::reached_t_end; }
};

/// Streaming hooks; on_snapshot calls double as flush points for file sinks.
struct RunSinks {
  std::function<void(const DiagnosticsRow&)> on_diagnostics;
  std::function<void(const Snapshot&)> on_snapshot;
};

/// dz/dt at fixed theta per sample: -kappa w / (r sqrt(r'^2+1)).
std::vector<double> rhs_graph(const Profile& profile, const GraphCurve& curve);

/// Explicit stability bound dt = safety * theta_step^2 * min_i w_i^2.
/// The linearized graph PDE diffuses with coefficient 1/w^2.
double cfl_dt(const Profile& profile, const GraphCurve& curve, double safety);

FlowState make_flow_state(const Profile& profile, GraphCurve curve,
                          double t = 0.0);

struct StepGuards {
  double b_tilde = std::numeric_limits<double>::infinity();
  double kappa_guard = 1e6;
  double z_floor = -std::numeric_limits<double>::infinity();
};

// One classical RK4 step of the method-of-lines system.  Throws
// std::invalid_argument when dt exceeds the stability bound at the maximum
// permitted safety factor (0.5) and FlowError when the new curve trips a
// guard.
FlowState step_rk4(const Profile& profile, const FlowState& state, double dt,
                   const StepGuards& guards = {});

/// Throws std::runtime_error when k v^2 >= 1 at any sample.
GradientMonitor gradient_monitor(const CurveFields& fields, double k);

/// Upper end of the admissible window (closed form for the power family,
/// scan + bisection otherwise).
double find_btilde(const Profile& profile);

// Integrates the configured initial curve with dt from the CFL bound until
// t_end or a guard trips.  Always emits the initial and final diagnostics
// row and snapshot; snapshots land exactly on multiples of snapshot_every
// (dt is clamped to hit them).  Throws std::invalid_argument for invalid
// configs and for initial data outside the validity window; guard trips
// mid-run are reported in the result, not thrown.
RunResult run(const FlowConfig& config, const RunSinks& sinks = {});

// Exact rotationally symmetric solution: dz/dt = -G(z) integrated by
// adaptive step-doubling RK4 with local tolerance tol.  Throws FlowError
// with the exit time if z leaves the profile domain.
std::vector<std::pair<double, double>> circle_flow(const Profile& profile,
                                                   double z0, double t_end,
                                                   double tol = 1e-10);

/// Same integrator, landing exactly on each requested time (ascending).
std::vector<double> circle_flow_at(const Profile& profile, double z0,
                                   std::span<const double> times,
                                   double tol = 1e-10);

}  // namespace csfrot
