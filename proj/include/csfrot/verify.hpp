#pragma once

#include <span>
#include <string>
#include <vector>

#include "csfrot/flow.hpp"

namespace csfrot {

enum class CheckStatus { passed, failed, inconclusive };

const char* to_string(CheckStatus s);

struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::failed;
  double observed = 0.0;  // worst-case measured quantity
  double threshold = 0.0;
  std::string context;

  bool passed() const { return status == CheckStatus::passed; }
};

// Samples the analytic curve family at each grid size and requires every
// identity residual either at machine floor (< 1e-12) or decaying with
// observed order >= 1.8 between successive sizes.  One report per identity.
std::vector<CheckReport> check_static_identities(const Profile& profile,
                                                 const InitialCurveSpec& family,
                                                 std::span<const int> grid_sizes);

struct EvolutionResidualNorms {
  double res_z;
  double res_u;
};

// Max-norm residuals of the evolution equations
//   (d_t - lap) z = r' r'' (1-u^2)/(r'^2+1)^2 - r' u^2/(r (r'^2+1))
//   (d_t - lap) u = -(2 kcal^2 + kbar)(u - u^3) + u (kcal u - kappa)^2
// reconstructed from equally spaced snapshots.  The material time derivative
// is recovered from the fixed-theta one by adding the tangential drift
// V^theta d_theta.  Requires >= 3 snapshots.
EvolutionResidualNorms evolution_residual_norms(const RunResult& run,
                                                const Profile& profile);

/// Passes when both residual norms decay from coarse to fine at observed
/// order >= 1.5.
CheckReport check_evolution_residuals(const RunResult& coarse,
                                      const RunResult& fine,
                                      const Profile& profile);

/// max_t v_max(t) <= v_max(0) * (1 + 1e-3).
CheckReport check_graph_preservation(const RunResult& run);

// Requires run_low.z_max(0) <= run_high.z_min(0) (otherwise throws
// std::invalid_argument: a violated precondition is a rejected input, not a
// failed check).  Passes when min_t (z_min_high - z_max_low) >= -1e-6 over
// the common time range, series joined by linear interpolation.
CheckReport check_comparison(const RunResult& run_low,
                             const RunResult& run_high);

// z_max must decrease strictly at every accepted step, at a forward rate of
// at most -G(z_max) + 1e-6.  The forward difference lags the instantaneous
// rate by (dt/2) d/dt G; at the working resolutions that lag stays under the
// tolerance whenever the curve still carries any theta-variation.
CheckReport check_monotone_descent(const RunResult& run,
                                   const Profile& profile);

// Long-horizon behavior: (i) z_max(t_end) < z_max(0) - 5, (ii) kappa_max
// decays below 0.1 of its initial value and is monotone over the final half,
// (iii) the monitor peak over the second half stays within 2x the peak
// established during the first half.  Runs that terminated early, or whose
// horizon is below 50, come back inconclusive rather than failed.
CheckReport check_longtime(const RunResult& run, const Profile& profile);

struct SuiteOptions {
  std::string only;             // empty: all groups; else one of
                                // static|evolution|preservation|comparison|longtime
  double longtime_horizon = 450.0;
  int longtime_n = 32;
  int run_n = 128;
  std::function<void(const CheckReport&)> on_report;  // streaming hook
};

// The default verification suite: static identities on three profile
// families, evolution residuals at two resolutions, graph preservation,
// comparison pairs (ordered and touching) and the long-horizon run.
std::vector<CheckReport> run_verification_suite(const SuiteOptions& options);

}  // namespace csfrot
