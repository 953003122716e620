// Command-line front end: admissibility checks, geometry tables, flow runs,
// comparison experiments and the verification suite.
//
// Exit codes: 0 success, 2 input/precondition error, 3 runtime flow failure,
// 4 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "csfrot/csv.hpp"
#include "csfrot/flow.hpp"
#include "csfrot/geometry.hpp"
#include "csfrot/profile.hpp"
#include "csfrot/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitFlow = 3;
constexpr int kExitVerify = 4;

struct ZRange {
  double lo;
  double hi;
};

ZRange parse_z_range(const std::string& text) {
  const auto sep = text.find(':', 1);
  if (sep == std::string::npos) {
    throw std::invalid_argument("z-range must be 'lo:hi', got '" + text + "'");
  }
  ZRange r;
  std::size_t used = 0;
  r.lo = std::stod(text.substr(0, sep), &used);
  r.hi = std::stod(text.substr(sep + 1));
  if (!(r.lo < r.hi)) {
    throw std::invalid_argument("z-range needs lo < hi, got '" + text + "'");
  }
  return r;
}

csfrot::Profile make_profile(const std::string& family,
                             std::optional<double> alpha) {
  if (family == "power") {
    if (!alpha) throw std::invalid_argument("power profile requires --alpha");
    return csfrot::Profile::power(*alpha);
  }
  if (family == "exp_inverse") {
    if (alpha) {
      throw std::invalid_argument("exp_inverse profile takes no alpha");
    }
    return csfrot::Profile::exp_inverse();
  }
  throw std::invalid_argument("unknown profile family '" + family +
                              "' (use power or exp_inverse)");
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!obj.is_object()) {
    throw std::invalid_argument("config: '" + where + "' must be an object");
  }
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument("config: unknown key '" + item.key() +
                                  "' in " + where);
    }
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      throw std::invalid_argument("config: missing key '" + key + "' in " +
                                  where);
    }
  }
}

struct LoadedConfig {
  csfrot::FlowConfig flow;
  std::string output_dir;  // empty: not set in the file
};

LoadedConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  const json j = json::parse(in);

  require_keys(j, "config",
               {"profile", "initial", "n", "t_end", "cfl_safety",
                "snapshot_every", "output_dir"},
               {"profile", "initial", "n", "t_end"});

  LoadedConfig lc;

  const json& jp = j.at("profile");
  require_keys(jp, "profile", {"family", "alpha"}, {"family"});
  std::optional<double> alpha;
  if (jp.contains("alpha")) alpha = jp.at("alpha").get<double>();
  lc.flow.profile = make_profile(jp.at("family").get<std::string>(), alpha);

  const json& ji = j.at("initial");
  require_keys(ji, "initial", {"c0", "modes"}, {"c0"});
  lc.flow.initial.c0 = ji.at("c0").get<double>();
  if (ji.contains("modes")) {
    if (!ji.at("modes").is_array()) {
      throw std::invalid_argument("config: 'modes' must be an array");
    }
    for (const json& jm : ji.at("modes")) {
      require_keys(jm, "mode", {"m", "amplitude", "phase"}, {"m", "amplitude"});
      csfrot::InitialCurveSpec::Mode mode;
      mode.m = jm.at("m").get<int>();
      mode.amplitude = jm.at("amplitude").get<double>();
      mode.phase = jm.contains("phase") ? jm.at("phase").get<double>() : 0.0;
      lc.flow.initial.modes.push_back(mode);
    }
  }

  lc.flow.n = j.at("n").get<int>();
  lc.flow.t_end = j.at("t_end").get<double>();
  lc.flow.cfl_safety =
      j.contains("cfl_safety") ? j.at("cfl_safety").get<double>() : 0.25;
  lc.flow.snapshot_every = j.contains("snapshot_every")
                               ? j.at("snapshot_every").get<double>()
                               : lc.flow.t_end / 10.0;
  if (j.contains("output_dir")) {
    lc.output_dir = j.at("output_dir").get<std::string>();
  }
  return lc;
}

std::string resolve_output_dir(const std::string& flag_value,
                               const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;
  if (!config_value.empty()) return config_value;
  if (const char* env = std::getenv("CSFROT_OUTPUT_DIR")) {
    if (*env) return env;
  }
  return ".";
}

std::string report_line(const csfrot::CheckReport& rep) {
  return std::string(csfrot::to_string(rep.status)) + " " + rep.name +
         " observed=" + csfrot::fmt17(rep.observed) +
         " threshold=" + csfrot::fmt17(rep.threshold) + " context=\"" +
         rep.context + "\"";
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& family, std::optional<double> alpha,
              const std::string& z_range, int n_scan) {
  const csfrot::Profile profile = make_profile(family, alpha);
  const ZRange range = parse_z_range(z_range);

  std::cout << "profile: " << profile.name();
  if (profile.family() == csfrot::ProfileFamily::power) {
    std::cout << " alpha=" << csfrot::fmt17(profile.alpha());
  }
  std::cout << "\nscan range: [" << csfrot::fmt17(range.lo) << ", "
            << csfrot::fmt17(range.hi) << "], points: " << n_scan << "\n";

  csfrot::ValidityWindow window;
  try {
    window = csfrot::validity_window(profile, range.lo, range.hi, n_scan);
  } catch (const std::runtime_error& e) {
    std::cout << "admissible window found: no\n";
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::cout << "b_tilde (bisection): " << csfrot::fmt17(window.b_tilde) << "\n";
  if (profile.family() == csfrot::ProfileFamily::power) {
    std::cout << "b_tilde (closed form): "
              << csfrot::fmt17(csfrot::power_btilde(profile.alpha())) << "\n";
  }
  std::cout << "min slack over scan: " << csfrot::fmt17(window.margin) << "\n";
  std::cout << "sample margins:\n";
  const double lo = window.checked_range.lo;
  for (int k = 1; k <= 5; ++k) {
    const double z = lo + k * (window.b_tilde - lo) / 6.0;
    const csfrot::RsMargin m = csfrot::setting_rs_margin(profile, z);
    std::cout << "  z=" << csfrot::fmt17(z)
              << " slope_ok=" << (m.slope_ok ? "yes" : "no")
              << " inequality_margin=" << csfrot::fmt17(m.inequality_margin)
              << "\n";
  }
  std::cout << "admissible window found: yes\n";
  return kExitOk;
}

int cmd_geometry(const std::string& family, std::optional<double> alpha,
                 const std::string& z_range, int samples,
                 const std::string& output) {
  const csfrot::Profile profile = make_profile(family, alpha);
  const ZRange range = parse_z_range(z_range);
  if (samples < 0) throw std::invalid_argument("--samples must be >= 0");

  std::ofstream file;
  if (!output.empty()) {
    file.open(output, std::ios::binary | std::ios::trunc);
    if (!file) throw std::invalid_argument("cannot open '" + output + "'");
  }
  std::ostream& out = output.empty() ? std::cout : file;

  out << "z,kcal,kbar,g_speed,pc_theta,pc_z\n";
  for (int i = 0; i < samples; ++i) {
    const double z =
        samples == 1
            ? range.lo
            : range.lo + (range.hi - range.lo) * i / (samples - 1);
    const csfrot::SurfaceScalars s = csfrot::surface_scalars(profile, z);
    out << csfrot::fmt17(s.z) << ',' << csfrot::fmt17(s.kcal) << ','
        << csfrot::fmt17(s.kbar) << ',' << csfrot::fmt17(s.g_speed) << ','
        << csfrot::fmt17(s.pc_theta) << ',' << csfrot::fmt17(s.pc_z) << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag,
                 int n_override, double t_end_override, double cfl_override,
                 double snap_override) {
  LoadedConfig lc = parse_run_config(config_path);
  if (n_override > 0) lc.flow.n = n_override;
  if (t_end_override > 0.0) lc.flow.t_end = t_end_override;
  if (cfl_override > 0.0) lc.flow.cfl_safety = cfl_override;
  if (snap_override > 0.0) lc.flow.snapshot_every = snap_override;

  const fs::path dir = resolve_output_dir(out_flag, lc.output_dir);
  fs::create_directories(dir);

  csfrot::CsvWriter diag(
      (dir / "diagnostics.csv").string(),
      "t,z_min,z_max,v_max,kappa_min,kappa_max,length,g_max,dt");
  csfrot::CsvWriter snap((dir / "snapshots.csv").string(),
                         "t,theta,z,kappa,u,n_theta");

  const csfrot::Profile& profile = lc.flow.profile;
  csfrot::RunSinks sinks;
  sinks.on_diagnostics = [&](const csfrot::DiagnosticsRow& r) {
    diag.row({r.t, r.z_min, r.z_max, r.v_max, r.kappa_min, r.kappa_max,
              r.length, r.g_max, r.dt});
  };
  sinks.on_snapshot = [&](const csfrot::Snapshot& s) {
    const csfrot::CurveFields f = csfrot::curve_fields(profile, s.curve);
    for (int i = 0; i < s.curve.n(); ++i) {
      snap.row({s.t, s.curve.theta(i), s.curve.z[i], f.kappa[i], f.u[i],
                f.n_theta[i]});
    }
    snap.flush();
    diag.flush();
  };

  const csfrot::RunResult res = csfrot::run(lc.flow, sinks);
  diag.flush();
  snap.flush();

  const csfrot::DiagnosticsRow& last = res.diagnostics.back();
  std::cout << "t_final=" << csfrot::fmt17(res.t_final)
            << " z_max=" << csfrot::fmt17(last.z_max)
            << " kappa_max=" << csfrot::fmt17(last.kappa_max)
            << " termination=" << csfrot::to_string(res.termination) << "\n";
  if (!res.completed()) {
    std::cerr << "flow failure: " << res.message << "\n";
    return kExitFlow;
  }
  return kExitOk;
}

int cmd_compare(const std::string& config_a, const std::string& config_b) {
  const LoadedConfig a = parse_run_config(config_a);
  const LoadedConfig b = parse_run_config(config_b);

  const csfrot::RunResult run_a = csfrot::run(a.flow);
  const csfrot::RunResult run_b = csfrot::run(b.flow);

  const csfrot::CheckReport rep = csfrot::check_comparison(run_a, run_b);
  std::cout << report_line(rep) << "\n";
  return rep.passed() ? kExitOk : kExitVerify;
}

int cmd_verify(const std::string& only, const std::string& report_path,
               double longtime_horizon, int run_n) {
  csfrot::SuiteOptions options;
  options.only = only;
  options.longtime_horizon = longtime_horizon;
  options.run_n = run_n;
  options.on_report = [](const csfrot::CheckReport& rep) {
    std::cout << report_line(rep) << "\n" << std::flush;
  };

  const std::vector<csfrot::CheckReport> reports =
      csfrot::run_verification_suite(options);

  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot open '" + report_path + "'");
    for (const auto& rep : reports) out << report_line(rep) << "\n";
  }

  int failed = 0, inconclusive = 0;
  for (const auto& rep : reports) {
    if (rep.status == csfrot::CheckStatus::failed) ++failed;
    if (rep.status == csfrot::CheckStatus::inconclusive) ++inconclusive;
  }
  std::cout << reports.size() << " checks: " << failed << " failed, "
            << inconclusive << " inconclusive\n";
  if (inconclusive > 0) {
    std::cerr << "warning: " << inconclusive
              << " check(s) inconclusive (horizon or early termination)\n";
  }
  return failed > 0 ? kExitVerify : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curve shortening flow on rotational surfaces"};
  app.require_subcommand(1);

  std::string family = "power";
  double alpha_value = 0.0;
  std::string z_range = "-10:-0.1";
  int n_scan = 10000;
  int samples = 100;
  std::string output;

  auto* check = app.add_subcommand("check", "profile admissibility report");
  auto* check_alpha = check->add_option("--alpha", alpha_value, "power exponent");
  check->add_option("--profile", family, "power|exp_inverse");
  check->add_option("--z-range", z_range, "scan range lo:hi");
  check->add_option("--n-scan", n_scan, "scan points");

  auto* geometry = app.add_subcommand("geometry", "surface scalar table (CSV)");
  auto* geom_alpha = geometry->add_option("--alpha", alpha_value, "power exponent");
  geometry->add_option("--profile", family, "power|exp_inverse");
  geometry->add_option("--z-range", z_range, "tabulated range lo:hi");
  geometry->add_option("--samples", samples, "number of rows");
  geometry->add_option("--output", output, "output file (default stdout)");

  std::string config_path, out_dir;
  int n_override = 0;
  double t_end_override = 0.0, cfl_override = 0.0, snap_override = 0.0;
  auto* simulate = app.add_subcommand("simulate", "run a flow from a config file");
  simulate->add_option("--config", config_path, "run config (JSON)")->required();
  simulate->add_option("--output-dir", out_dir, "output directory");
  simulate->add_option("--n", n_override, "override sample count");
  simulate->add_option("--t-end", t_end_override, "override horizon");
  simulate->add_option("--cfl-safety", cfl_override, "override CFL safety");
  simulate->add_option("--snapshot-every", snap_override, "override cadence");

  std::string config_a, config_b;
  auto* compare = app.add_subcommand("compare", "comparison-principle experiment");
  compare->add_option("--config-a", config_a, "lower run config")->required();
  compare->add_option("--config-b", config_b, "upper run config")->required();

  std::string only, report_path;
  double longtime_horizon = 450.0;
  int run_n = 128;
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--only", only,
                     "static|evolution|preservation|comparison|longtime");
  verify->add_option("--report", report_path, "write the report to a file");
  verify->add_option("--longtime-horizon", longtime_horizon,
                     "horizon of the long-time run");
  verify->add_option("--n", run_n, "resolution of the suite's flow runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(check)) {
      std::optional<double> alpha;
      if (check_alpha->count() > 0) alpha = alpha_value;
      return cmd_check(family, alpha, z_range, n_scan);
    }
    if (app.got_subcommand(geometry)) {
      std::optional<double> alpha;
      if (geom_alpha->count() > 0) alpha = alpha_value;
      return cmd_geometry(family, alpha, z_range, samples, output);
    }
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(config_path, out_dir, n_override, t_end_override,
                          cfl_override, snap_override);
    }
    if (app.got_subcommand(compare)) {
      return cmd_compare(config_a, config_b);
    }
    if (app.got_subcommand(verify)) {
      return cmd_verify(only, report_path, longtime_horizon, run_n);
    }
  } catch (const csfrot::FlowError& e) {
    std::cerr << "flow failure at t=" << csfrot::fmt17(e.t) << ": " << e.what()
              << "\n";
    return kExitFlow;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
