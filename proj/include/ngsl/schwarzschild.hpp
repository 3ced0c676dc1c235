#ifndef NGSL_SCHWARZSCHILD_HPP
#define NGSL_SCHWARZSCHILD_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "ngsl/error.hpp"

namespace ngsl {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double four_pi = 4.0 * pi;
inline constexpr double eight_pi = 8.0 * pi;

/// Schwarzschild hole of positive mass (natural units).
class BlackHole {
 public:
  explicit BlackHole(double mass) : mass_(mass) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw Error(Errc::invalid_mass, "black hole mass must be positive and finite, got " +
                                          std::to_string(mass));
    }
  }

  [[nodiscard]] double mass() const noexcept { return mass_; }

  friend bool operator==(const BlackHole&, const BlackHole&) = default;

 private:
  double mass_;
};

/// T_H = 1 / (8 pi M).
inline double hawking_temperature(const BlackHole& bh) noexcept {
  return 1.0 / (eight_pi * bh.mass());
}

inline double horizon_radius(const BlackHole& bh) noexcept { return 2.0 * bh.mass(); }

/// Area-law entropy 4 pi M^2, the antiderivative of dS = dM / T_H with S(0) = 0.
inline double bh_entropy(const BlackHole& bh) noexcept {
  return four_pi * bh.mass() * bh.mass();
}

/// Gravitational information of the whole hole, M / T_H = 8 pi M^2.
inline double gravitational_information_bh(const BlackHole& bh) noexcept {
  return eight_pi * bh.mass() * bh.mass();
}

}  // namespace ngsl

#endif  // NGSL_SCHWARZSCHILD_HPP
