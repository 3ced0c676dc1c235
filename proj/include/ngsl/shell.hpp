#ifndef NGSL_SHELL_HPP
#define NGSL_SHELL_HPP

// The shell of a black hole: the part of the near-horizon accretion disk that
// can be causally affected while a particle crosses the horizon. Applying the
// information-aware second law to the shell bounds the information change an
// outside observer can receive per transit:
//
//   dI <= -M_s d(1/T_H) = -8 pi M_s dM
//
// dI is the outside observer's change of information about the particle, so a
// loss is negative. For infall the bound is a required minimum loss, for
// emission a maximum gain.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ngsl/error.hpp"
#include "ngsl/schwarzschild.hpp"

namespace ngsl {

/// Truncated power-law surface density, Sigma(r) = sigma0 (r / r_ref)^(-p).
struct DiskProfile {
  double sigma0 = 0.0;
  double r_ref = 1.0;
  double p = 0.0;
  double r_outer_max = std::numeric_limits<double>::infinity();

  [[nodiscard]] double surface_density(double r) const { return sigma0 * std::pow(r / r_ref, -p); }
};

inline void validate(const DiskProfile& profile) {
  if (!(profile.sigma0 >= 0.0) || !std::isfinite(profile.sigma0)) {
    throw Error(Errc::validation, "disk sigma0 must be >= 0");
  }
  if (!(profile.r_ref > 0.0) || !std::isfinite(profile.r_ref)) {
    throw Error(Errc::validation, "disk r_ref must be > 0");
  }
  if (!std::isfinite(profile.p)) throw Error(Errc::validation, "disk p must be finite");
  if (!(profile.r_outer_max > profile.r_ref)) {
    throw Error(Errc::validation, "disk r_outer_max must exceed r_ref");
  }
}

struct Shell {
  double mass = 0.0;
  double r_inner = 0.0;
  double r_outer = 0.0;
  double window = 0.0;
};

/// Mass of the annulus [a, b] of a power-law disk, int Sigma(r) 2 pi r dr.
inline double annulus_mass(const DiskProfile& profile, double a, double b) {
  if (!(b > a) || profile.sigma0 == 0.0) return 0.0;
  const double k = 2.0 - profile.p;
  const double log_ratio = std::log(b / a);
  const double scale = two_pi * profile.sigma0 * profile.r_ref * profile.r_ref;
  if (k == 0.0) return scale * log_ratio;
  // r_ref^p (b^k - a^k) / k, written so that p -> 2 stays accurate.
  return scale * std::pow(a / profile.r_ref, k) * std::expm1(k * log_ratio) / k;
}

/// Shell swept by unit-speed signals during `window`: r in [2M, min(2M + window, r_outer_max)].
inline Shell build_shell(const BlackHole& bh, const DiskProfile& profile, double window) {
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw Error(Errc::invalid_window, "shell window must be positive, got " + std::to_string(window));
  }
  Shell s;
  s.window = window;
  s.r_inner = horizon_radius(bh);
  s.r_outer = std::max(s.r_inner, std::min(s.r_inner + window, profile.r_outer_max));
  s.mass = annulus_mass(profile, s.r_inner, s.r_outer);
  return s;
}

/// Exterior entropy change dM_s / T_H with dM_s = -dM.
inline double shell_entropy_change(const BlackHole& bh, double dM) noexcept {
  return eight_pi * bh.mass() * (-dM);
}

/// M_s d(1/T_H): the shell sensing the horizon-temperature change.
inline double shell_sense_term(const Shell& shell, double dM) noexcept {
  return eight_pi * shell.mass * dM;
}

/// dM_s / T_H: information carried across the horizon by the particle.
inline double shell_carry_term(const BlackHole& bh, double dM) noexcept {
  return eight_pi * bh.mass() * (-dM);
}

/// Change of the shell's gravitational information, sense plus carry.
inline double shell_info_change(const BlackHole& bh, const Shell& shell, double dM) noexcept {
  return shell_sense_term(shell, dM) + shell_carry_term(bh, dM);
}

/// Upper bound on the outside observer's information change per transit.
inline double channel_width_bound(const Shell& shell, double dM) noexcept {
  return -shell_sense_term(shell, dM);
}

/// dS_Ms - dI_gMs - dI. Nonnegative iff dI <= channel_width_bound.
inline double shell_ngsl_residual(const BlackHole& bh, const Shell& shell, double dM,
                                  double dI) noexcept {
  // The exterior entropy change and the carry term are the same quantity and
  // cancel exactly; grouping them first keeps the residual zero at saturation.
  return (shell_entropy_change(bh, dM) - shell_carry_term(bh, dM)) - shell_sense_term(shell, dM) -
         dI;
}

}  // namespace ngsl

#endif  // NGSL_SHELL_HPP
