#include "csfrot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "csfrot/detail/point_math.hpp"

namespace csfrot {

namespace {

constexpr double kMachineFloor = 1e-12;
constexpr double kOrderFloor = 1.8;
constexpr double kEvolutionOrderFloor = 1.5;
constexpr double kPreservationSlack = 1e-3;
constexpr double kComparisonTol = 1e-6;
constexpr double kMonotoneRateTol = 1e-6;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::passed: return "PASS";
    case CheckStatus::failed: return "FAIL";
    case CheckStatus::inconclusive: return "INCONCLUSIVE";
  }
  return "unknown";
}

std::vector<CheckReport> check_static_identities(const Profile& profile,
                                                 const InitialCurveSpec& family,
                                                 std::span<const int> grid_sizes) {
  if (grid_sizes.empty()) {
    throw std::invalid_argument("check_static_identities needs grid sizes");
  }
  std::vector<IdentityResiduals> residuals;
  residuals.reserve(grid_sizes.size());
  std::string sizes_str;
  for (int n : grid_sizes) {
    residuals.push_back(static_identity_residuals(profile, family.sample(n)));
    sizes_str += (sizes_str.empty() ? "" : ",") + std::to_string(n);
  }

  std::vector<CheckReport> reports;
  for (int i = 0; i < 5; ++i) {
    CheckReport rep;
    rep.name = std::string("static/") + IdentityResiduals::label(i);

    bool all_floor = true;
    double worst = 0.0;
    for (const auto& r : residuals) {
      worst = std::max(worst, r[i]);
      if (r[i] >= kMachineFloor) all_floor = false;
    }
    if (all_floor) {
      rep.status = CheckStatus::passed;
      rep.observed = worst;
      rep.threshold = kMachineFloor;
      rep.context = "residuals at machine floor; n=" + sizes_str;
      reports.push_back(std::move(rep));
      continue;
    }

    double min_order = std::numeric_limits<double>::infinity();
    std::string orders_str;
    for (size_t j = 0; j + 1 < residuals.size(); ++j) {
      const double a = residuals[j][i];
      const double b = residuals[j + 1][i];
      const double order = b > 0.0 ? std::log2(a / b)
                                   : std::numeric_limits<double>::infinity();
      min_order = std::min(min_order, order);
      orders_str += (orders_str.empty() ? "" : ",") + fmt(order);
    }
    rep.observed = min_order;
    rep.threshold = kOrderFloor;
    rep.status = min_order >= kOrderFloor ? CheckStatus::passed
                                          : CheckStatus::failed;
    rep.context = "orders=" + orders_str + "; n=" + sizes_str +
                  "; residual(n_max)=" + fmt(residuals.back()[i]);
    reports.push_back(std::move(rep));
  }
  return reports;
}

EvolutionResidualNorms evolution_residual_norms(const RunResult& run,
                                                const Profile& profile) {
  const auto& snaps = run.snapshots;
  if (snaps.size() < 3) {
    throw std::invalid_argument(
        "evolution residuals need at least 3 snapshots");
  }
  const double dt0 = snaps[1].t - snaps[0].t;
  for (size_t j = 0; j + 1 < snaps.size(); ++j) {
    const double dt = snaps[j + 1].t - snaps[j].t;
    if (std::abs(dt - dt0) > 1e-9 * dt0) {
      throw std::invalid_argument("snapshots are not equally spaced in time");
    }
  }

  std::vector<CurveFields> fields;
  fields.reserve(snaps.size());
  for (const Snapshot& s : snaps) {
    fields.push_back(curve_fields(profile, s.curve));
  }

  EvolutionResidualNorms norms{0.0, 0.0};
  for (size_t j = 1; j + 1 < snaps.size(); ++j) {
    const CurveFields& f = fields[j];
    const double h = snaps[j].curve.theta_step;
    const int n = f.n();

    const std::vector<double> u_theta = fd_periodic(f.u, h).first;
    const std::vector<double> lap_z =
        d_ds(d_ds(snaps[j].curve.z, f, h), f, h);
    const std::vector<double> lap_u = d_ds(d_ds(f.u, f, h), f, h);

    for (int i = 0; i < n; ++i) {
      const double dz_fixed =
          (snaps[j + 1].curve.z[i] - snaps[j - 1].curve.z[i]) / (2.0 * dt0);
      const double du_fixed =
          (fields[j + 1].u[i] - fields[j - 1].u[i]) / (2.0 * dt0);
      const double drift = detail::drift_speed_point(
          f.kappa[i], f.zdot[i], f.w[i], f.r[i], f.r1[i]);
      const double mat_z = dz_fixed + drift * f.zdot[i];
      const double mat_u = du_fixed + drift * u_theta[i];

      const double q = f.r1[i] * f.r1[i] + 1.0;
      const double kcal = f.r1[i] / (f.r[i] * std::sqrt(q));
      const double kbar = -f.r2[i] / (f.r[i] * q * q);
      const double u = f.u[i];
      const double rhs_z = f.r1[i] * f.r2[i] * (1.0 - u * u) / (q * q) -
                           f.r1[i] * u * u / (f.r[i] * q);
      const double dk = kcal * u - f.kappa[i];
      const double rhs_u =
          -(2.0 * kcal * kcal + kbar) * (u - u * u * u) + u * dk * dk;

      norms.res_z = std::max(norms.res_z, std::abs(mat_z - lap_z[i] - rhs_z));
      norms.res_u = std::max(norms.res_u, std::abs(mat_u - lap_u[i] - rhs_u));
    }
  }
  return norms;
}

CheckReport check_evolution_residuals(const RunResult& coarse,
                                      const RunResult& fine,
                                      const Profile& profile) {
  const EvolutionResidualNorms c = evolution_residual_norms(coarse, profile);
  const EvolutionResidualNorms f = evolution_residual_norms(fine, profile);

  auto order = [](double a, double b) {
    return b > 0.0 ? std::log2(a / b) : std::numeric_limits<double>::infinity();
  };
  const double order_z = order(c.res_z, f.res_z);
  const double order_u = order(c.res_u, f.res_u);

  CheckReport rep;
  rep.name = "evolution/residual_order";
  rep.observed = std::min(order_z, order_u);
  rep.threshold = kEvolutionOrderFloor;
  rep.status = rep.observed >= kEvolutionOrderFloor ? CheckStatus::passed
                                                    : CheckStatus::failed;
  rep.context = "order_z=" + fmt(order_z) + " order_u=" + fmt(order_u) +
                " res_z=" + fmt(c.res_z) + "->" + fmt(f.res_z) +
                " res_u=" + fmt(c.res_u) + "->" + fmt(f.res_u);
  return rep;
}

CheckReport check_graph_preservation(const RunResult& run) {
  if (run.diagnostics.empty()) {
    throw std::invalid_argument("check_graph_preservation: empty run");
  }
  const double v0 = run.diagnostics.front().v_max;
  double worst = v0;
  double worst_t = 0.0;
  for (const DiagnosticsRow& row : run.diagnostics) {
    if (row.v_max > worst) {
      worst = row.v_max;
      worst_t = row.t;
    }
  }
  CheckReport rep;
  rep.name = "preservation/v_max";
  rep.observed = worst / v0;
  rep.threshold = 1.0 + kPreservationSlack;
  rep.status = rep.observed <= rep.threshold ? CheckStatus::passed
                                             : CheckStatus::failed;
  rep.context = "v_max(0)=" + fmt(v0) + " worst=" + fmt(worst) + " at t=" +
                fmt(worst_t) + (run.completed() ? "" : "; run incomplete");
  return rep;
}

namespace {

/// Piecewise-linear sample of a diagnostics column at time t.
class DiagnosticsSeries {
 public:
  DiagnosticsSeries(const std::vector<DiagnosticsRow>& rows,
                    double DiagnosticsRow::*column) {
    t_.reserve(rows.size());
    y_.reserve(rows.size());
    for (const auto& r : rows) {
      t_.push_back(r.t);
      y_.push_back(r.*column);
    }
  }

  double t_front() const { return t_.front(); }
  double t_back() const { return t_.back(); }

  double operator()(double t) const {
    if (t <= t_.front()) return y_.front();
    if (t >= t_.back()) return y_.back();
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const size_t j = static_cast<size_t>(it - t_.begin());
    const double w = (t - t_[j - 1]) / (t_[j] - t_[j - 1]);
    return y_[j - 1] + w * (y_[j] - y_[j - 1]);
  }

 private:
  std::vector<double> t_, y_;
};

}  // namespace

CheckReport check_comparison(const RunResult& run_low,
                             const RunResult& run_high) {
  if (run_low.diagnostics.empty() || run_high.diagnostics.empty()) {
    throw std::invalid_argument("check_comparison: empty run");
  }
  const double low0 = run_low.diagnostics.front().z_max;
  const double high0 = run_high.diagnostics.front().z_min;
  if (low0 > high0) {
    throw std::invalid_argument(
        "check_comparison precondition violated: z_max(0) = " + fmt(low0) +
        " > z_min(0) = " + fmt(high0));
  }

  const DiagnosticsSeries z_max_low(run_low.diagnostics, &DiagnosticsRow::z_max);
  const DiagnosticsSeries z_min_high(run_high.diagnostics,
                                     &DiagnosticsRow::z_min);
  const double t_hi = std::min(z_max_low.t_back(), z_min_high.t_back());

  std::vector<double> times;
  for (const auto& r : run_low.diagnostics) {
    if (r.t <= t_hi) times.push_back(r.t);
  }
  for (const auto& r : run_high.diagnostics) {
    if (r.t <= t_hi) times.push_back(r.t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  double min_gap = std::numeric_limits<double>::infinity();
  double argmin_t = 0.0;
  for (double t : times) {
    const double gap = z_min_high(t) - z_max_low(t);
    if (gap < min_gap) {
      min_gap = gap;
      argmin_t = t;
    }
  }

  CheckReport rep;
  rep.name = "comparison/ordering";
  rep.observed = min_gap;
  rep.threshold = -kComparisonTol;
  rep.status = min_gap >= rep.threshold ? CheckStatus::passed
                                        : CheckStatus::failed;
  rep.context = "min gap at t=" + fmt(argmin_t) + "; gap(0)=" +
                fmt(high0 - low0) + "; common horizon=" + fmt(t_hi);
  return rep;
}

CheckReport check_monotone_descent(const RunResult& run,
                                   const Profile& profile) {
  const auto& rows = run.diagnostics;
  if (rows.size() < 2) {
    throw std::invalid_argument("check_monotone_descent: need >= 2 rows");
  }
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  bool strictly_decreasing = true;
  for (size_t j = 0; j + 1 < rows.size(); ++j) {
    const double dt = rows[j + 1].t - rows[j].t;
    if (dt <= 0.0) continue;
    if (rows[j + 1].z_max >= rows[j].z_max) strictly_decreasing = false;
    const double rate = (rows[j + 1].z_max - rows[j].z_max) / dt;
    const double g = surface_scalars(profile, rows[j].z_max).g_speed;
    const double excess = rate + g;  // must stay below the rate tolerance
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_t = rows[j].t;
    }
  }
  CheckReport rep;
  rep.name = "descent/z_max_rate";
  rep.observed = worst_excess;
  rep.threshold = kMonotoneRateTol;
  rep.status = (strictly_decreasing && worst_excess <= kMonotoneRateTol)
                   ? CheckStatus::passed
                   : CheckStatus::failed;
  rep.context = std::string("strictly decreasing=") +
                (strictly_decreasing ? "yes" : "no") +
                "; worst rate excess at t=" + fmt(worst_t);
  return rep;
}

CheckReport check_longtime(const RunResult& run, const Profile& profile) {
  CheckReport rep;
  rep.name = "longtime/decay";
  rep.threshold = 0.1;

  if (!run.completed()) {
    rep.status = CheckStatus::inconclusive;
    rep.context = "run terminated early: " + run.message;
    return rep;
  }
  const auto& rows = run.diagnostics;
  const double t_end = rows.back().t;
  if (t_end < 50.0) {
    rep.status = CheckStatus::inconclusive;
    rep.context = "horizon t_end=" + fmt(t_end) + " is below 50";
    return rep;
  }

  const double drop = rows.front().z_max - rows.back().z_max;
  const bool drop_ok = drop > 5.0;

  const double kappa_ratio = rows.back().kappa_max / rows.front().kappa_max;
  const bool ratio_ok = kappa_ratio < 0.1;

  int monotone_violations = 0;
  double peak_first_half = 0.0;
  double peak_second_half = 0.0;
  double prev_kappa = std::numeric_limits<double>::infinity();
  for (const DiagnosticsRow& row : rows) {
    if (row.t <= 0.5 * t_end) {
      peak_first_half = std::max(peak_first_half, row.g_max);
    } else {
      peak_second_half = std::max(peak_second_half, row.g_max);
      if (row.kappa_max > prev_kappa + 1e-12) ++monotone_violations;
      prev_kappa = row.kappa_max;
    }
  }
  const bool monotone_ok = monotone_violations == 0;
  const bool monitor_ok = peak_second_half <= 2.0 * peak_first_half;

  rep.observed = kappa_ratio;
  rep.status = (drop_ok && ratio_ok && monotone_ok && monitor_ok)
                   ? CheckStatus::passed
                   : CheckStatus::failed;
  rep.context = "z drop=" + fmt(drop) + " (need >5); kappa ratio=" +
                fmt(kappa_ratio) + "; expected kappa at final height=" +
                fmt(surface_scalars(profile, rows.back().z_max).kcal) +
                "; monotone violations=" + std::to_string(monotone_violations) +
                "; monitor peaks=" + fmt(peak_first_half) + "/" +
                fmt(peak_second_half);
  return rep;
}

namespace {

InitialCurveSpec cosine_curve(double c0, std::initializer_list<InitialCurveSpec::Mode> modes) {
  InitialCurveSpec spec;
  spec.c0 = c0;
  spec.modes = modes;
  return spec;
}

RunResult quiet_run(const Profile& profile, const InitialCurveSpec& initial,
                    int n, double t_end, double snapshot_every = 0.0,
                    int stride = 1) {
  FlowConfig cfg;
  cfg.profile = profile;
  cfg.initial = initial;
  cfg.n = n;
  cfg.t_end = t_end;
  cfg.snapshot_every = snapshot_every;
  cfg.diagnostics_stride = stride;
  return run(cfg);
}

}  // namespace

std::vector<CheckReport> run_verification_suite(const SuiteOptions& options) {
  const std::vector<std::string> groups = {"static", "evolution",
                                           "preservation", "comparison",
                                           "longtime"};
  if (!options.only.empty() &&
      std::find(groups.begin(), groups.end(), options.only) == groups.end()) {
    throw std::invalid_argument("unknown suite group '" + options.only + "'");
  }
  const auto wants = [&](const std::string& g) {
    return options.only.empty() || options.only == g;
  };

  std::vector<CheckReport> reports;
  const auto add = [&](CheckReport rep, const std::string& tag) {
    rep.name += "@" + tag;
    if (options.on_report) options.on_report(rep);
    reports.push_back(std::move(rep));
  };

  if (wants("static")) {
    const int sizes[] = {64, 128, 256, 512};
    struct Case {
      Profile profile;
      InitialCurveSpec curve;
      std::string tag;
    };
    const Case cases[] = {
        {Profile::power(0.5), cosine_curve(-2.0, {{1, 0.1, 0.0}}), "power-0.5"},
        {Profile::power(0.3), cosine_curve(-3.0, {{2, 0.05, 0.0}, {3, 0.02, 0.0}}),
         "power-0.3"},
        {Profile::power(0.7), cosine_curve(-2.5, {{1, 0.1, 0.0}}), "power-0.7"},
        {Profile::exp_inverse(), cosine_curve(-3.0, {{1, 0.1, 0.0}}),
         "exp_inverse"},
    };
    for (const Case& c : cases) {
      for (CheckReport& rep :
           check_static_identities(c.profile, c.curve, sizes)) {
        add(std::move(rep), c.tag);
      }
    }
  }

  if (wants("evolution")) {
    const Profile profile = Profile::power(0.5);
    const InitialCurveSpec curve = cosine_curve(-2.0, {{1, 0.1, 0.0}});
    // cadence = 2 * theta_step at each resolution so the time and space
    // truncation terms refine together; t_end is the same exact multiple of
    // both cadences.
    const double cadence_fine = 2.0 * (6.283185307179586 / 256.0);
    const double t_end = 12.0 * cadence_fine;
    const RunResult coarse =
        quiet_run(profile, curve, 128, t_end, 2.0 * cadence_fine, 16);
    const RunResult fine =
        quiet_run(profile, curve, 256, t_end, cadence_fine, 16);
    add(check_evolution_residuals(coarse, fine, profile), "power-0.5");
  }

  if (wants("preservation")) {
    struct Case {
      Profile profile;
      InitialCurveSpec curve;
      double t_end;
      std::string tag;
    };
    const Case cases[] = {
        {Profile::power(0.5), cosine_curve(-2.0, {{1, 0.1, 0.0}}), 2.0,
         "power-0.5-small"},
        {Profile::power(0.5), cosine_curve(-3.0, {{1, 0.5, 0.0}}), 2.0,
         "power-0.5-large"},
        {Profile::power(0.3), cosine_curve(-3.0, {{1, 0.1, 0.0}}), 1.0,
         "power-0.3"},
        {Profile::power(0.7), cosine_curve(-2.5, {{1, 0.1, 0.0}}), 1.0,
         "power-0.7"},
        {Profile::exp_inverse(), cosine_curve(-3.0, {{1, 0.1, 0.0}}), 1.0,
         "exp_inverse"},
    };
    for (const Case& c : cases) {
      const RunResult r = quiet_run(c.profile, c.curve, options.run_n, c.t_end);
      add(check_graph_preservation(r), c.tag);
      add(check_monotone_descent(r, c.profile), c.tag);
    }
  }

  if (wants("comparison")) {
    const Profile profile = Profile::power(0.5);
    {
      const RunResult low = quiet_run(profile, cosine_curve(-3.0, {{1, 0.1, 0.0}}),
                                      options.run_n, 2.0);
      const RunResult high = quiet_run(profile, cosine_curve(-2.0, {{1, 0.1, 0.0}}),
                                       options.run_n, 2.0);
      add(check_comparison(low, high), "ordered");
    }
    {
      const RunResult low = quiet_run(profile, cosine_curve(-2.6, {{1, 0.1, 0.0}}),
                                      options.run_n, 1.0);
      const RunResult high = quiet_run(profile, cosine_curve(-2.4, {{1, 0.1, 0.0}}),
                                       options.run_n, 1.0);
      add(check_comparison(low, high), "touching");
    }
  }

  if (wants("longtime")) {
    const Profile profile = Profile::power(0.5);
    const RunResult r = quiet_run(profile, cosine_curve(-2.0, {}),
                                  options.longtime_n, options.longtime_horizon,
                                  0.0, 10);
    add(check_longtime(r, profile), "power-0.5-circle");
  }

  return reports;
}

}  // namespace csfrot
