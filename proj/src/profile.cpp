#include "csfrot/profile.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csfrot {

namespace {

constexpr double kSlopeCap = 0.70710678118654752;  // 1/sqrt(2)
constexpr double kBisectTol = 1e-10;

[[noreturn]] void domain_violation(const std::string& name, double z) {
  throw std::domain_error("profile '" + name + "': z = " + std::to_string(z) +
                          " is outside the domain");
}

}  // namespace

Profile Profile::power(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(
        "power profile requires 0 < alpha < 1, got alpha = " +
        std::to_string(alpha));
  }
  Profile p;
  p.family_ = ProfileFamily::power;
  p.alpha_ = alpha;
  p.domain_ = Interval{-std::numeric_limits<double>::infinity(), 0.0};
  p.name_ = "power";
  return p;
}

Profile Profile::exp_inverse() {
  Profile p;
  p.family_ = ProfileFamily::exp_inverse;
  p.domain_ = Interval{-std::numeric_limits<double>::infinity(), 0.0};
  p.name_ = "exp_inverse";
  return p;
}

Profile Profile::custom(Evaluator eval, Interval domain_hint, std::string name) {
  if (!eval) throw std::invalid_argument("custom profile requires an evaluator");
  Profile p;
  p.family_ = ProfileFamily::custom;
  p.domain_ = domain_hint;
  p.eval_ = std::move(eval);
  p.name_ = std::move(name);
  return p;
}

double Profile::alpha() const {
  if (family_ != ProfileFamily::power) {
    throw std::logic_error("alpha() is only defined for the power family");
  }
  return alpha_;
}

ProfileEvaluation Profile::eval(double z) const {
  switch (family_) {
    case ProfileFamily::power: {
      if (!(z < 0.0)) domain_violation(name_, z);
      const double y = -z;
      const double r = std::pow(y, -alpha_);
      const double r1 = alpha_ * std::pow(y, -alpha_ - 1.0);
      const double r2 = alpha_ * (alpha_ + 1.0) * std::pow(y, -alpha_ - 2.0);
      return {z, r, r1, r2};
    }
    case ProfileFamily::exp_inverse: {
      if (!(z < 0.0)) domain_violation(name_, z);
      const double r = std::exp(-1.0 / z);
      const double z2 = z * z;
      const double r1 = r / z2;
      const double r2 = r * (1.0 - 2.0 * z) / (z2 * z2);
      return {z, r, r1, r2};
    }
    case ProfileFamily::custom: {
      if (!eval_) throw std::logic_error("profile is unset");
      if (!domain_.contains(z)) domain_violation(name_, z);
      ProfileEvaluation pe = eval_(z);
      pe.z = z;
      if (!(pe.r > 0.0)) {
        throw std::domain_error("custom profile returned r <= 0 at z = " +
                                std::to_string(z));
      }
      return pe;
    }
  }
  throw std::logic_error("unreachable profile family");
}

RsMargin setting_rs_margin(const Profile& profile, double z) {
  const ProfileEvaluation pe = profile.eval(z);
  const double q = pe.r1 * pe.r1 + 1.0;
  RsMargin m;
  m.slope_ok = pe.r1 > 0.0 && pe.r1 <= kSlopeCap;
  m.inequality_margin = pe.r * pe.r2 - 2.0 * pe.r1 * pe.r1 * q;
  return m;
}

double power_btilde(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(
        "power_btilde requires 0 < alpha < 1, got alpha = " +
        std::to_string(alpha));
  }
  const double e = 1.0 / (2.0 * (alpha + 1.0));
  const double slope_bound = -std::pow(2.0 * alpha * alpha, e);
  const double curvature_bound =
      -std::pow(2.0 * alpha * alpha * alpha / (1.0 - alpha), e);
  return std::min(slope_bound, curvature_bound);
}

namespace {

bool rs_holds(const Profile& profile, double z) {
  const RsMargin m = setting_rs_margin(profile, z);
  return m.slope_ok && m.inequality_margin > 0.0;
}

/// Smallest slack of the three scalar conditions r' > 0, r' <= 1/sqrt(2),
/// r r'' - 2 r'^2 (r'^2+1) > 0.
double rs_slack(const Profile& profile, double z) {
  const ProfileEvaluation pe = profile.eval(z);
  const double q = pe.r1 * pe.r1 + 1.0;
  const double ineq = pe.r * pe.r2 - 2.0 * pe.r1 * pe.r1 * q;
  return std::min({pe.r1, kSlopeCap - pe.r1, ineq});
}

}  // namespace

ValidityWindow validity_window(const Profile& profile, double z_lo,
                               double z_hi, int n_scan) {
  if (!(z_lo < z_hi)) throw std::invalid_argument("validity_window: z_lo must be below z_hi");
  if (n_scan < 2) throw std::invalid_argument("validity_window: n_scan must be >= 2");

  const Interval dom = profile.domain_hint();
  const double pad = 1e-9 * std::max(1.0, std::abs(z_hi));
  const double lo = std::max(z_lo, dom.lo + pad);
  const double hi = std::min(z_hi, dom.hi - pad);
  if (!(lo < hi)) {
    throw std::invalid_argument("validity_window: scan range misses the profile domain");
  }

  const double step = (hi - lo) / (n_scan - 1);
  double last_ok = lo;
  double first_bad = hi;
  bool found_bad = false;
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_scan; ++i) {
    const double z = (i == n_scan - 1) ? hi : lo + i * step;
    if (rs_holds(profile, z)) {
      last_ok = z;
      margin = std::min(margin, rs_slack(profile, z));
    } else {
      if (i == 0) {
        throw std::runtime_error("profile '" + profile.name() +
                                 "' inadmissible on range: conditions fail at z = " +
                                 std::to_string(z));
      }
      first_bad = z;
      found_bad = true;
      break;
    }
  }

  ValidityWindow win;
  win.checked_range = Interval{lo, hi};
  if (!found_bad) {
    win.b_tilde = hi;
    win.margin = margin;
    return win;
  }

  double a = last_ok, b = first_bad;
  while (b - a > kBisectTol) {
    const double mid = 0.5 * (a + b);
    if (rs_holds(profile, mid)) {
      a = mid;
    } else {
      b = mid;
    }
  }
  win.b_tilde = 0.5 * (a + b);
  win.margin = margin;
  return win;
}

}  // namespace csfrot
