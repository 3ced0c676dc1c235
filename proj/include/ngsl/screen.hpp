#ifndef NGSL_SCREEN_HPP
#define NGSL_SCREEN_HPP

// Holographic-screen temperature outside a Schwarzschild horizon and the
// gravitational information of a marked mass sitting on that screen.
//
// The local acceleration g and redshift factor e^phi are those of a static
// observer: g = M / (r^2 sqrt(1 - 2M/r)), e^phi = sqrt(1 - 2M/r). Their
// product is horizon-regular, so T_hs = g e^phi / (2 pi) = M / (2 pi r^2)
// and T_hs(2M) = T_H.

#include <cmath>
#include <string>

#include "ngsl/error.hpp"
#include "ngsl/schwarzschild.hpp"

namespace ngsl {

/// Selects the exact-horizon evaluation T_hs = T_H instead of a radius.
struct AtHorizon {};
inline constexpr AtHorizon at_horizon{};

/// Smallest admissible screen radius is 2M (1 + horizon_margin).
inline constexpr double horizon_margin = 1e-12;

struct ScreenGeometry {
  double r;
  double g;
  double redshift;
  double temperature;
};

inline ScreenGeometry screen_geometry(const BlackHole& bh, double r) {
  const double m = bh.mass();
  if (!(r > 2.0 * m * (1.0 + horizon_margin))) {
    throw Error(Errc::inside_horizon, "screen radius " + std::to_string(r) +
                                          " is not outside the horizon at " +
                                          std::to_string(2.0 * m));
  }
  const double lapse = std::sqrt(1.0 - 2.0 * m / r);
  ScreenGeometry s{};
  s.r = r;
  s.g = m / (r * r * lapse);
  s.redshift = lapse;
  s.temperature = s.g * s.redshift / two_pi;
  return s;
}

namespace detail {
inline void require_positive_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(Errc::invalid_mass, "marked mass must be positive, got " + std::to_string(m));
  }
}
}  // namespace detail

/// I_g = m / T_hs at radius r.
inline double gravitational_information_marked(double m, const BlackHole& bh, double r) {
  detail::require_positive_mass(m);
  return m / screen_geometry(bh, r).temperature;
}

/// I_g = m / T_H for a marked mass that has reached the horizon.
inline double gravitational_information_marked(double m, const BlackHole& bh, AtHorizon) {
  detail::require_positive_mass(m);
  return m / hawking_temperature(bh);
}

/// Entropy released when m is lowered from r_from to r_to: -(I_g(r_to) - I_g(r_from)).
/// Positive for inward motion.
inline double entropy_from_descent(double m, const BlackHole& bh, double r_from, double r_to) {
  detail::require_positive_mass(m);
  // Validate both radii through the screen constructor.
  (void)screen_geometry(bh, r_from);
  (void)screen_geometry(bh, r_to);
  return two_pi * m * (r_from - r_to) * (r_from + r_to) / bh.mass();
}

}  // namespace ngsl

#endif  // NGSL_SCREEN_HPP
