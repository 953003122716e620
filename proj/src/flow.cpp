#include "csfrot/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csfrot/detail/point_math.hpp"
#include "csfrot/kernels.hpp"

namespace csfrot {

namespace {

constexpr double kDtUnderflow = 1e-14;

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_end: return "reached_t_end";
    case Termination::left_validity_window: return "left_validity_window";
    case Termination::curvature_blowup: return "curvature_blowup";
    case Termination::dt_underflow: return "dt_underflow";
    case Termination::left_domain: return "left_domain";
    case Termination::reached_domain_floor: return "reached_domain_floor";
  }
  return "unknown";
}

double InitialCurveSpec::operator()(double theta) const {
  double z = c0;
  for (const Mode& mode : modes) {
    z += mode.amplitude * std::cos(mode.m * theta + mode.phase);
  }
  return z;
}

GraphCurve InitialCurveSpec::sample(int n) const {
  for (const Mode& mode : modes) {
    if (mode.m < 1) throw std::invalid_argument("initial curve mode numbers must be >= 1");
  }
  return make_graph_curve(n, [this](double theta) { return (*this)(theta); });
}

double InitialCurveSpec::upper_bound() const {
  double b = c0;
  for (const Mode& mode : modes) b += std::abs(mode.amplitude);
  return b;
}

double InitialCurveSpec::lower_bound() const {
  double b = c0;
  for (const Mode& mode : modes) b -= std::abs(mode.amplitude);
  return b;
}

namespace {

void require_curve_in_domain(const Profile& profile, std::span<const double> z) {
  const Interval dom = profile.domain_hint();
  const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
  if (!dom.contains(*lo) || !dom.contains(*hi)) {
    throw std::domain_error("curve range [" + std::to_string(*lo) + ", " +
                            std::to_string(*hi) + "] leaves the domain of profile '" +
                            profile.name() + "'");
  }
}

struct StepScratch {
  CurveFields fields;
  std::vector<double> d1, d2, k1, k2, k3, k4, ztmp, znew;

  void resize(int n) {
    for (auto* a : {&d1, &d2, &k1, &k2, &k3, &k4, &ztmp, &znew}) a->resize(n);
  }
};

void rhs_inplace(const Profile& profile, std::span<const double> z, double h,
                 StepScratch& s, std::span<double> out) {
  require_curve_in_domain(profile, z);
  kernels::fd_periodic(z, h, s.d1, s.d2);
  kernels::point_fields(profile, z, s.d1, s.d2, s.fields);
  kernels::graph_rhs(s.fields, out);
}

double cfl_from_fields(const CurveFields& fields, double theta_step,
                       double safety) {
  double min_w2 = std::numeric_limits<double>::infinity();
  for (double wi : fields.w) min_w2 = std::min(min_w2, wi * wi);
  return safety * theta_step * theta_step * min_w2;
}

FlowState step_rk4_impl(const Profile& profile, const FlowState& state,
                        double dt, const StepGuards& guards, StepScratch& s) {
  if (dt < kDtUnderflow) {
    throw FlowError(Termination::dt_underflow, state.t,
                    "dt underflow: dt = " + std::to_string(dt));
  }
  const int n = state.curve.n();
  const double h = state.curve.theta_step;
  s.resize(n);
  const std::vector<double>& z = state.curve.z;

  try {
    rhs_inplace(profile, z, h, s, s.k1);
    kernels::axpy(0.5 * dt, s.k1, z, s.ztmp);
    rhs_inplace(profile, s.ztmp, h, s, s.k2);
    kernels::axpy(0.5 * dt, s.k2, z, s.ztmp);
    rhs_inplace(profile, s.ztmp, h, s, s.k3);
    kernels::axpy(dt, s.k3, z, s.ztmp);
    rhs_inplace(profile, s.ztmp, h, s, s.k4);
    kernels::rk4_combine(z, dt, s.k1, s.k2, s.k3, s.k4, s.znew);
  } catch (const std::domain_error& e) {
    throw FlowError(Termination::left_domain, state.t, e.what());
  }

  FlowState next;
  next.t = state.t + dt;
  next.dt_last = dt;
  next.curve.theta_step = h;
  next.curve.z = s.znew;
  try {
    next.fields = curve_fields(profile, next.curve);
  } catch (const std::domain_error& e) {
    throw FlowError(Termination::left_domain, next.t, e.what());
  }

  const double z_hi = next.curve.z_max();
  const double z_lo = next.curve.z_min();
  if (z_hi >= guards.b_tilde) {
    throw FlowError(Termination::left_validity_window, next.t,
                    "curve left the validity window: z_max = " +
                        std::to_string(z_hi) + " >= b_tilde = " +
                        std::to_string(guards.b_tilde));
  }
  if (z_lo <= guards.z_floor) {
    throw FlowError(Termination::reached_domain_floor, next.t,
                    "curve reached the domain floor: z_min = " +
                        std::to_string(z_lo));
  }
  if (max_abs(next.fields.kappa) > guards.kappa_guard) {
    throw FlowError(Termination::curvature_blowup, next.t,
                    "curvature blow-up guard tripped: |kappa|_max > " +
                        std::to_string(guards.kappa_guard));
  }
  return next;
}

}  // namespace

std::vector<double> rhs_graph(const Profile& profile, const GraphCurve& curve) {
  const CurveFields f = curve_fields(profile, curve);
  std::vector<double> out(curve.n());
  kernels::graph_rhs(f, out);
  return out;
}

double cfl_dt(const Profile& profile, const GraphCurve& curve, double safety) {
  if (!(safety > 0.0 && safety <= 0.5)) {
    throw std::invalid_argument("cfl safety factor must lie in (0, 0.5]");
  }
  return cfl_from_fields(curve_fields(profile, curve), curve.theta_step, safety);
}

FlowState make_flow_state(const Profile& profile, GraphCurve curve, double t) {
  FlowState s;
  s.t = t;
  s.fields = curve_fields(profile, curve);
  s.curve = std::move(curve);
  s.dt_last = 0.0;
  return s;
}

FlowState step_rk4(const Profile& profile, const FlowState& state, double dt,
                   const StepGuards& guards) {
  const double cap = cfl_dt(profile, state.curve, 0.5);
  if (dt > cap * (1.0 + 1e-9)) {
    throw std::invalid_argument("dt = " + std::to_string(dt) +
                                " exceeds the explicit stability bound " +
                                std::to_string(cap));
  }
  StepScratch scratch;
  return step_rk4_impl(profile, state, dt, guards, scratch);
}

GradientMonitor gradient_monitor(const CurveFields& fields, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("monitor weight k must be positive");
  const int n = fields.n();
  GradientMonitor m;
  m.k = k;
  m.phi.resize(n);
  m.g.resize(n);
  m.g_max = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v2 = fields.v[i] * fields.v[i];
    const double kv2 = k * v2;
    if (kv2 >= 1.0) {
      throw std::runtime_error("monitor domain violated: k v^2 = " +
                               std::to_string(kv2) + " at sample " +
                               std::to_string(i));
    }
    m.phi[i] = v2 / (1.0 - kv2);
    m.g[i] = m.phi[i] * fields.kappa[i] * fields.kappa[i];
    m.g_max = std::max(m.g_max, m.g[i]);
  }
  return m;
}

double find_btilde(const Profile& profile) {
  if (profile.family() == ProfileFamily::power) {
    return power_btilde(profile.alpha());
  }
  const Interval dom = profile.domain_hint();
  const double lo = std::isfinite(dom.lo) ? dom.lo : -50.0;
  const double hi = std::isfinite(dom.hi) ? std::min(dom.hi, -1e-3) : -1e-3;
  return validity_window(profile, lo, hi, 8192).b_tilde;
}

namespace {

double monitor_gmax(const CurveFields& fields, double k) {
  double g_max = 0.0;
  for (int i = 0; i < fields.n(); ++i) {
    const double v2 = fields.v[i] * fields.v[i];
    const double kv2 = k * v2;
    if (kv2 >= 1.0) {
      throw std::runtime_error("monitor domain violated: k v^2 >= 1");
    }
    g_max = std::max(g_max,
                     v2 / (1.0 - kv2) * fields.kappa[i] * fields.kappa[i]);
  }
  return g_max;
}

DiagnosticsRow diagnostics_of(const FlowState& state, double monitor_k) {
  DiagnosticsRow row;
  row.t = state.t;
  row.z_min = state.curve.z_min();
  row.z_max = state.curve.z_max();
  row.v_max = *std::max_element(state.fields.v.begin(), state.fields.v.end());
  const auto [kmin, kmax] = std::minmax_element(state.fields.kappa.begin(),
                                                state.fields.kappa.end());
  row.kappa_min = *kmin;
  row.kappa_max = *kmax;
  row.length = arc_length(state.fields, state.curve.theta_step);
  row.g_max = monitor_gmax(state.fields, monitor_k);
  row.dt = state.dt_last;
  return row;
}

}  // namespace

RunResult run(const FlowConfig& config, const RunSinks& sinks) {
  if (config.n < 16) throw std::invalid_argument("flow needs n >= 16 samples");
  if (!(config.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(config.cfl_safety > 0.0 && config.cfl_safety <= 0.5)) {
    throw std::invalid_argument("cfl_safety must lie in (0, 0.5]");
  }
  if (!(config.kappa_blowup_guard > 0.0)) {
    throw std::invalid_argument("kappa_blowup_guard must be positive");
  }
  if (config.diagnostics_stride < 1) {
    throw std::invalid_argument("diagnostics_stride must be >= 1");
  }

  const Profile& profile = config.profile;
  const double b_tilde = find_btilde(profile);
  const Interval dom = profile.domain_hint();
  if (!(config.initial.upper_bound() < b_tilde)) {
    throw std::invalid_argument(
        "initial curve outside validity window: z upper bound " +
        std::to_string(config.initial.upper_bound()) + " >= b_tilde = " +
        std::to_string(b_tilde));
  }
  if (!(config.initial.lower_bound() > dom.lo)) {
    throw std::invalid_argument("initial curve lies below the profile domain");
  }

  FlowState state = make_flow_state(profile, config.initial.sample(config.n));
  const double h = state.curve.theta_step;
  const double v_sup =
      *std::max_element(state.fields.v.begin(), state.fields.v.end());
  const double monitor_k = 1.0 / (2.0 * v_sup * v_sup);

  StepGuards guards;
  guards.b_tilde = b_tilde;
  guards.kappa_guard = config.kappa_blowup_guard;
  guards.z_floor = std::isfinite(dom.lo)
                       ? dom.lo + 10.0 * h
                       : -std::numeric_limits<double>::infinity();

  RunResult out;
  out.monitor_k = monitor_k;
  out.b_tilde = b_tilde;

  auto emit_diag = [&](const FlowState& s) {
    const DiagnosticsRow row = diagnostics_of(s, monitor_k);
    out.diagnostics.push_back(row);
    if (sinks.on_diagnostics) sinks.on_diagnostics(row);
  };
  auto emit_snap = [&](const FlowState& s) {
    out.snapshots.push_back(Snapshot{s.t, s.curve});
    if (sinks.on_snapshot) sinks.on_snapshot(out.snapshots.back());
  };

  emit_diag(state);
  emit_snap(state);

  const double t_eps = 1e-12 * std::max(1.0, config.t_end);
  const double cadence = config.snapshot_every;
  long snap_idx = 1;
  long step_count = 0;
  StepScratch scratch;
  out.termination = Termination::reached_t_end;

  while (state.t < config.t_end - t_eps) {
    double target = config.t_end;
    bool target_is_snap = false;
    if (cadence > 0.0) {
      while (snap_idx * cadence <= state.t + t_eps) ++snap_idx;
      const double t_snap = snap_idx * cadence;
      if (t_snap < config.t_end - t_eps) {
        target = t_snap;
        target_is_snap = true;
      }
    }

    double dt = cfl_from_fields(state.fields, h, config.cfl_safety);
    bool lands = false;
    if (state.t + dt >= target - t_eps) {
      dt = target - state.t;
      lands = true;
    }

    try {
      state = step_rk4_impl(profile, state, dt, guards, scratch);
    } catch (const FlowError& e) {
      out.termination = e.kind;
      out.message = e.what();
      out.t_final = e.t;
      return out;
    }
    if (lands) state.t = target;
    ++step_count;

    if (step_count % config.diagnostics_stride == 0 || lands) emit_diag(state);
    if (lands && target_is_snap) emit_snap(state);
  }

  state.t = config.t_end;
  emit_snap(state);
  out.t_final = state.t;
  return out;
}

namespace {

double circle_rhs(const Profile& profile, double z) {
  const ProfileEvaluation pe = profile.eval(z);
  return -pe.r1 / (pe.r * (pe.r1 * pe.r1 + 1.0));
}

double circle_rk4(const Profile& profile, double z, double h) {
  const double k1 = circle_rhs(profile, z);
  const double k2 = circle_rhs(profile, z + 0.5 * h * k1);
  const double k3 = circle_rhs(profile, z + 0.5 * h * k2);
  const double k4 = circle_rhs(profile, z + h * k3);
  return z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Step-doubling controller: one full step against two half steps, error
// estimate |z2 - z1|/15 with local extrapolation of the accepted value.
class CircleStepper {
 public:
  CircleStepper(const Profile& profile, double z0, double tol)
      : profile_(profile), z_(z0), tol_(tol), h_(1e-2) {
    profile_.eval(z0);  // domain check up front
  }

  double t() const { return t_; }
  double z() const { return z_; }

  /// Advances to exactly t_target.
  void advance_to(double t_target) {
    const double eps = 1e-14 * std::max(1.0, std::abs(t_target));
    while (t_ < t_target - eps) {
      double h = std::min(h_, t_target - t_);
      const bool lands = h >= t_target - t_ - eps;
      try {
        const double z1 = circle_rk4(profile_, z_, h);
        const double zm = circle_rk4(profile_, z_, 0.5 * h);
        const double z2 = circle_rk4(profile_, zm, 0.5 * h);
        const double err = std::abs(z2 - z1) / 15.0;
        if (err <= tol_) {
          z_ = z2 + (z2 - z1) / 15.0;
          t_ = lands ? t_target : t_ + h;
        }
        const double factor =
            err > 0.0 ? 0.9 * std::pow(tol_ / err, 0.2) : 5.0;
        h_ = h * std::clamp(factor, 0.2, 5.0);
        if (h_ < 1e-15) {
          throw FlowError(Termination::dt_underflow, t_,
                          "circle flow step size underflow");
        }
      } catch (const std::domain_error& e) {
        throw FlowError(Termination::left_domain, t_,
                        std::string("circle flow left the profile domain: ") +
                            e.what());
      }
    }
    t_ = t_target;
  }

 private:
  const Profile& profile_;
  double t_ = 0.0;
  double z_;
  double tol_;
  double h_;
};

}  // namespace

std::vector<std::pair<double, double>> circle_flow(const Profile& profile,
                                                   double z0, double t_end,
                                                   double tol) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  CircleStepper stepper(profile, z0, tol);
  std::vector<std::pair<double, double>> out;
  out.emplace_back(0.0, z0);
  // dense enough trace for trend checks without recording every internal step
  const int n_record = 1000;
  for (int i = 1; i <= n_record; ++i) {
    const double t = t_end * i / n_record;
    stepper.advance_to(t);
    out.emplace_back(stepper.t(), stepper.z());
  }
  return out;
}

std::vector<double> circle_flow_at(const Profile& profile, double z0,
                                   std::span<const double> times, double tol) {
  CircleStepper stepper(profile, z0, tol);
  std::vector<double> out;
  out.reserve(times.size());
  double prev = 0.0;
  for (double t : times) {
    if (t < prev - 1e-14) {
      throw std::invalid_argument("circle_flow_at: times must be ascending");
    }
    if (t > prev) stepper.advance_to(t);
    out.push_back(stepper.z());
    prev = t;
  }
  return out;
}

}  // namespace csfrot
