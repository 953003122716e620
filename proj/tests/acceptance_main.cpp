// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria.  argv[1] (optional) is the path to the csfrot CLI binary,
// argv[2] a scratch directory; criterion 10 exercises the CLI through both.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "csfrot/flow.hpp"
#include "csfrot/geometry.hpp"
#include "csfrot/verify.hpp"

using namespace csfrot;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Outcome {
  int id;
  std::string name;
  bool pass;
  double observed;
  double threshold;
  double seconds;
  std::string note;
};

std::vector<Outcome> g_outcomes;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void record(int id, const std::string& name, bool pass, double observed,
            double threshold, double seconds, const std::string& note = "") {
  g_outcomes.push_back({id, name, pass, observed, threshold, seconds, note});
  std::printf("[%s] criterion %2d: %-28s observed=%-13.6g threshold=%-10.6g (%.2fs)%s%s\n",
              pass ? "PASS" : "FAIL", id, name.c_str(), observed, threshold,
              seconds, note.empty() ? "" : "  ", note.c_str());
  std::fflush(stdout);
}

InitialCurveSpec cosine(double c0, double amplitude = 0.0, int m = 1) {
  InitialCurveSpec s;
  s.c0 = c0;
  if (amplitude != 0.0) s.modes.push_back({m, amplitude, 0.0});
  return s;
}

RunResult flow_run(double alpha, const InitialCurveSpec& initial, int n,
                   double t_end, double snapshot_every = 0.0, int stride = 1) {
  FlowConfig cfg;
  cfg.profile = Profile::power(alpha);
  cfg.initial = initial;
  cfg.n = n;
  cfg.t_end = t_end;
  cfg.snapshot_every = snapshot_every;
  cfg.diagnostics_stride = stride;
  return run(cfg);
}

int exit_code_of(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

// ---------------------------------------------------------------------- 1
void criterion_1_validity_window() {
  Timer timer;
  double worst = 0.0;
  for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const ValidityWindow w =
        validity_window(Profile::power(alpha), -10.0, -0.01, 10000);
    worst = std::max(worst, std::abs(w.b_tilde - power_btilde(alpha)));
  }
  const double b05 =
      validity_window(Profile::power(0.5), -10.0, -0.1, 10000).b_tilde;
  worst = std::max(worst, std::abs(b05 - (-std::cbrt(0.5))));
  const double sec = timer.seconds();
  record(1, "validity window", worst <= 1e-6 && sec < 1.0, worst, 1e-6, sec);
}

// ---------------------------------------------------------------------- 2
void criterion_2_curvature_algebra() {
  Timer timer;
  const Profile p = Profile::power(0.5);

  std::mt19937 rng(987654321);
  std::uniform_real_distribution<double> zdist(-6.8, -0.95);
  double worst_rel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SurfaceScalars s = surface_scalars(p, zdist(rng));
    worst_rel = std::max(
        worst_rel, std::abs(s.kbar - s.pc_theta * s.pc_z) / std::abs(s.kbar));
  }

  auto fd_ratio = [&](auto&& value, auto&& derivative, double z) {
    const double h = 2e-3;
    const double exact = derivative(p, z);
    const double e = std::abs((value(p, z + h) - value(p, z - h)) / (2 * h) -
                              exact);
    const double eh =
        std::abs((value(p, z + h / 2) - value(p, z - h / 2)) / h - exact);
    return e / eh;
  };
  auto kcal_of = [](const Profile& pr, double z) {
    return surface_scalars(pr, z).kcal;
  };
  auto g_of = [](const Profile& pr, double z) {
    return surface_scalars(pr, z).g_speed;
  };
  auto kcalp = [](const Profile& pr, double z) { return kcal_prime(pr, z); };
  auto gp = [](const Profile& pr, double z) { return g_prime(pr, z); };

  bool ratios_ok = true;
  double worst_ratio_dev = 0.0;
  std::uniform_real_distribution<double> zfd(-5.0, -1.2);
  for (int i = 0; i < 25; ++i) {
    const double z = zfd(rng);
    for (double ratio : {fd_ratio(kcal_of, kcalp, z), fd_ratio(g_of, gp, z)}) {
      worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 4.0));
      if (!(ratio >= 3.5 && ratio <= 4.5)) ratios_ok = false;
    }
  }

  const double sec = timer.seconds();
  record(2, "curvature algebra",
         worst_rel <= 1e-12 && ratios_ok && sec < 1.0, worst_rel, 1e-12, sec,
         "max |fd ratio - 4| = " + std::to_string(worst_ratio_dev));
}

// ---------------------------------------------------------------------- 3
void criterion_3_static_identities() {
  Timer timer;
  const int sizes[] = {64, 128, 256, 512};
  const auto reports = check_static_identities(
      Profile::power(0.5), cosine(-2.0, 0.1), sizes);
  double min_order = std::numeric_limits<double>::infinity();
  bool pass = true;
  for (const CheckReport& rep : reports) {
    min_order = std::min(min_order, rep.observed);
    pass = pass && rep.passed();
  }
  const double sec = timer.seconds();
  record(3, "static identities", pass && sec < 5.0, min_order, 1.8, sec);
}

// ---------------------------------------------------------------------- 4
RunResult criterion_4_circle_consistency() {
  Timer timer;
  RunResult res = flow_run(0.5, cosine(-2.0), 64, 1.0);

  double worst = std::numeric_limits<double>::infinity();
  double worst_const = std::numeric_limits<double>::infinity();
  bool pass = false;
  if (res.completed()) {
    std::vector<double> times;
    for (const DiagnosticsRow& row : res.diagnostics) times.push_back(row.t);
    const std::vector<double> ode =
        circle_flow_at(Profile::power(0.5), -2.0, times, 1e-10);
    worst = 0.0;
    worst_const = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
      worst = std::max(worst, std::abs(res.diagnostics[i].z_max - ode[i]));
      worst_const = std::max(
          worst_const, res.diagnostics[i].z_max - res.diagnostics[i].z_min);
    }
    pass = worst <= 1e-6 && worst_const <= 1e-12;
  }
  const double sec = timer.seconds();
  record(4, "circle consistency", pass && sec < 30.0, worst, 1e-6, sec,
         "theta spread " + std::to_string(worst_const));
  return res;
}

// ---------------------------------------------------------------------- 5
std::vector<RunResult> criterion_5_graph_preservation() {
  std::vector<RunResult> runs;
  bool pass = true;
  double worst = 0.0;
  double total = 0.0;
  for (const auto& [c0, amp] : {std::pair{-2.0, 0.1}, std::pair{-3.0, 0.5}}) {
    Timer timer;
    RunResult res = flow_run(0.5, cosine(c0, amp), 256, 2.0);
    const CheckReport rep = check_graph_preservation(res);
    const double sec = timer.seconds();
    total += sec;
    pass = pass && rep.passed() && res.completed() && sec < 120.0;
    worst = std::max(worst, rep.observed);
    runs.push_back(std::move(res));
  }
  record(5, "graph preservation", pass, worst, 1.0 + 1e-3, total);
  return runs;
}

// ---------------------------------------------------------------------- 6
std::vector<RunResult> criterion_6_comparison() {
  Timer timer;
  std::vector<RunResult> runs;
  double min_gap = std::numeric_limits<double>::infinity();
  bool pass = true;

  {
    RunResult low = flow_run(0.5, cosine(-3.0, 0.1), 128, 2.0);
    RunResult high = flow_run(0.5, cosine(-2.0, 0.1), 128, 2.0);
    const CheckReport rep = check_comparison(low, high);
    pass = pass && rep.passed();
    min_gap = std::min(min_gap, rep.observed);
    runs.push_back(std::move(low));
    runs.push_back(std::move(high));
  }
  {
    // touching data: z_max(0) of the lower run equals z_min(0) of the upper
    RunResult low = flow_run(0.5, cosine(-2.6, 0.1), 128, 2.0);
    RunResult high = flow_run(0.5, cosine(-2.4, 0.1), 128, 2.0);
    pass = pass && low.diagnostics.front().z_max ==
                       high.diagnostics.front().z_min;
    const CheckReport rep = check_comparison(low, high);
    pass = pass && rep.passed();
    min_gap = std::min(min_gap, rep.observed);
    runs.push_back(std::move(low));
    runs.push_back(std::move(high));
  }

  const double sec = timer.seconds();
  record(6, "comparison principle", pass && sec < 240.0, min_gap, -1e-6, sec);
  return runs;
}

// ---------------------------------------------------------------------- 7
void criterion_7_monotone_descent(const std::vector<const RunResult*>& runs) {
  Timer timer;
  const Profile p = Profile::power(0.5);
  bool pass = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (const RunResult* res : runs) {
    const CheckReport rep = check_monotone_descent(*res, p);
    pass = pass && rep.passed();
    worst = std::max(worst, rep.observed);
  }
  record(7, "monotone descent", pass, worst, 1e-6, timer.seconds(),
         std::to_string(runs.size()) + " trajectories");
}

// ---------------------------------------------------------------------- 8
void criterion_8_longtime() {
  Timer timer;
  const RunResult res = flow_run(0.5, cosine(-2.0), 64, 50.0, 0.0, 10);
  const CheckReport rep = check_longtime(res, Profile::power(0.5));
  const double sec = timer.seconds();
  // The 0.1x curvature-decay factor cannot hold by t=50 from z0=-2:
  // kappa ~ alpha/|z| on circles and |z(t)| ~ sqrt(z0^2 + 2 alpha t), so
  // kappa(50)/kappa(0) ~ 2/sqrt(54) ~ 0.28, and a 0.1x decay needs t ~ 410.
  // The bound is asserted as stated and this criterion is expected to
  // report FAIL until the horizon question is settled (the same check
  // passes at t=450; see the verification suite's longtime group).
  record(8, "long-time behavior",
         rep.status == CheckStatus::passed && sec < 300.0, rep.observed,
         rep.threshold, sec, rep.context);
}

// ---------------------------------------------------------------------- 9
void criterion_9_evolution_residuals() {
  Timer timer;
  const Profile p = Profile::power(0.5);
  const InitialCurveSpec initial = cosine(-2.0, 0.1);
  const double cadence_fine = 2.0 * kTwoPi / 256.0;
  const double t_end = 12.0 * cadence_fine;
  const RunResult coarse =
      flow_run(0.5, initial, 128, t_end, 2.0 * cadence_fine, 16);
  const RunResult fine = flow_run(0.5, initial, 256, t_end, cadence_fine, 16);
  const CheckReport rep = check_evolution_residuals(coarse, fine, p);
  const double sec = timer.seconds();
  record(9, "evolution residuals", rep.passed() && sec < 300.0, rep.observed,
         1.5, sec, rep.context);
}

// --------------------------------------------------------------------- 10
void criterion_10_negative_control(const std::string& cli,
                                   const fs::path& scratch) {
  Timer timer;
  bool pass = true;
  std::string note;

  // library level: initial data outside the window is rejected up front
  try {
    flow_run(0.5, cosine(-0.5), 64, 1.0);
    pass = false;
    note += "in-window rejection missing; ";
  } catch (const std::invalid_argument&) {
  }

  if (cli.empty()) {
    pass = false;
    note += "CLI path not provided; ";
  } else {
    fs::create_directories(scratch);
    const int rc_alpha = exit_code_of(
        "'" + cli + "' check --profile power --alpha 1.0 --z-range=-10:-0.1 "
        ">/dev/null 2>&1");
    if (rc_alpha != 2) {
      pass = false;
      note += "check alpha=1 exit " + std::to_string(rc_alpha) + " != 2; ";
    }

    const fs::path cfg = scratch / "outside_window.json";
    std::ofstream(cfg) << R"({"profile":{"family":"power","alpha":0.5},)"
                       << R"("initial":{"c0":-0.5,"modes":[]},)"
                       << R"("n":64,"t_end":1.0})";
    const int rc_sim = exit_code_of(
        "'" + cli + "' simulate --config '" + cfg.string() +
        "' --output-dir '" + (scratch / "neg").string() + "' >/dev/null 2>&1");
    if (rc_sim != 2) {
      pass = false;
      note += "simulate outside window exit " + std::to_string(rc_sim) +
              " != 2; ";
    }
  }

  record(10, "negative control", pass, pass ? 1.0 : 0.0, 1.0, timer.seconds(),
         note);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path scratch =
      argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "csfrot_acc";

  criterion_1_validity_window();
  criterion_2_curvature_algebra();
  criterion_3_static_identities();
  const RunResult circle_run = criterion_4_circle_consistency();
  const std::vector<RunResult> preservation_runs =
      criterion_5_graph_preservation();
  const std::vector<RunResult> comparison_runs = criterion_6_comparison();

  std::vector<const RunResult*> trajectories;
  for (const RunResult& r : preservation_runs) trajectories.push_back(&r);
  for (const RunResult& r : comparison_runs) trajectories.push_back(&r);
  criterion_7_monotone_descent(trajectories);

  criterion_8_longtime();
  criterion_9_evolution_residuals();
  criterion_10_negative_control(cli, scratch);
  (void)circle_run;

  int failed = 0;
  for (const Outcome& o : g_outcomes) failed += o.pass ? 0 : 1;
  std::printf("%zu criteria, %d failed\n", g_outcomes.size(), failed);
  return failed;
}
