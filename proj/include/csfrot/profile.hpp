#pragma once

#include <functional>
#include <limits>
#include <string>

namespace csfrot {

enum class ProfileFamily { power, exp_inverse, custom };

/// r(z) and its first two derivatives at one height.
struct ProfileEvaluation {
  double z;
  double r;   // r(z) > 0
  double r1;  // dr/dz
  double r2;  // d^2 r/dz^2
};

/// Open interval.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double z) const { return z > lo && z < hi; }
};

// Rotation profile r(z) generating the ambient surface
//   (r(z) cos(theta), r(z) sin(theta), z).
// Built-in families are differentiated in closed form; custom profiles must
// supply (r, r', r'') analytically.
class Profile {
 public:
  using Evaluator = std::function<ProfileEvaluation(double)>;

  /// Unset profile; evaluating it throws. Assign a factory result before use.
  Profile() = default;

  /// r(z) = (-z)^(-alpha), z < 0. Requires 0 < alpha < 1.
  static Profile power(double alpha);
  /// r(z) = exp(-1/z), z < 0.
  static Profile exp_inverse();
  static Profile custom(Evaluator eval, Interval domain_hint,
                        std::string name = "custom");

  /// Throws std::domain_error for z outside the profile's domain.
  ProfileEvaluation eval(double z) const;

  ProfileFamily family() const { return family_; }
  /// Exponent of the power family; throws std::logic_error otherwise.
  double alpha() const;
  Interval domain_hint() const { return domain_; }
  const std::string& name() const { return name_; }

 private:
  ProfileFamily family_ = ProfileFamily::custom;
  double alpha_ = 0.0;
  Interval domain_{0.0, 0.0};
  Evaluator eval_;
  std::string name_ = "unset";
};

/// Slack of the two admissibility conditions at a single height.
struct RsMargin {
  bool slope_ok;             // 0 < r' <= 1/sqrt(2)
  double inequality_margin;  // r r'' - 2 r'^2 (r'^2 + 1), positive when the
                             // curvature condition holds
};

RsMargin setting_rs_margin(const Profile& profile, double z);

/// Closed-form upper end of the admissible window for the power family:
/// min of -(2 a^2)^(1/(2(a+1))) and -(2 a^3/(1-a))^(1/(2(a+1))).
double power_btilde(double alpha);

struct ValidityWindow {
  double b_tilde;          // conditions hold on [checked lo, b_tilde)
  Interval checked_range;  // closed range actually scanned
  double margin;           // smallest slack observed below b_tilde
};

// Scans [z_lo, z_hi] on n_scan points, then bisects (tolerance 1e-10 in z)
// for the largest b_tilde <= z_hi such that both admissibility conditions
// hold on [z_lo, b_tilde).  Throws std::runtime_error when even the lowest
// scanned point fails.
ValidityWindow validity_window(const Profile& profile, double z_lo,
                               double z_hi, int n_scan);

}  // namespace csfrot
