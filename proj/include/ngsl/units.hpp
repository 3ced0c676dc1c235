#ifndef NGSL_UNITS_HPP
#define NGSL_UNITS_HPP

// Natural units (G = c = hbar = k_B = 1) are used everywhere inside the
// library. SI values only appear at the I/O boundary and are converted with
// the Planck scales derived from the constants table below.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "ngsl/error.hpp"

namespace ngsl::units {

/// CODATA 2018 recommended values (Tiesinga et al., Rev. Mod. Phys. 93, 025010).
namespace codata2018 {
inline constexpr double speed_of_light = 299792458.0;   // m s^-1, exact
inline constexpr double gravitational = 6.67430e-11;    // m^3 kg^-1 s^-2
inline constexpr double reduced_planck = 1.054571817e-34;  // J s, exact
inline constexpr double boltzmann = 1.380649e-23;       // J K^-1, exact
}  // namespace codata2018

/// IAU 2015 Resolution B3 nominal solar mass parameter.
inline constexpr double solar_mass_parameter = 1.3271244e20;  // m^3 s^-2
inline const double solar_mass_kg = solar_mass_parameter / codata2018::gravitational;

inline constexpr double julian_year_s = 365.25 * 86400.0;

struct PlanckScales {
  double mass;         // kg
  double length;       // m
  double time;         // s
  double temperature;  // K
};

inline const PlanckScales& planck() {
  using namespace codata2018;
  static const PlanckScales scales = [] {
    PlanckScales s{};
    s.mass = std::sqrt(reduced_planck * speed_of_light / gravitational);
    s.length = std::sqrt(reduced_planck * gravitational / std::pow(speed_of_light, 3));
    s.time = std::sqrt(reduced_planck * gravitational / std::pow(speed_of_light, 5));
    s.temperature = s.mass * speed_of_light * speed_of_light / boltzmann;
    return s;
  }();
  return scales;
}

struct Dimension {
  int mass_exp = 0;
  int length_exp = 0;
  int time_exp = 0;
  int temperature_exp = 0;

  friend constexpr bool operator==(const Dimension&, const Dimension&) = default;

  friend constexpr Dimension operator*(const Dimension& a, const Dimension& b) {
    return {a.mass_exp + b.mass_exp, a.length_exp + b.length_exp,
            a.time_exp + b.time_exp, a.temperature_exp + b.temperature_exp};
  }
};

namespace dim {
inline constexpr Dimension dimensionless{};
inline constexpr Dimension mass{1, 0, 0, 0};
inline constexpr Dimension length{0, 1, 0, 0};
inline constexpr Dimension time{0, 0, 1, 0};
inline constexpr Dimension temperature{0, 0, 0, 1};
}  // namespace dim

enum class System { natural, si };

/// Size of one natural unit of dimension `d` expressed in SI base units.
inline double si_per_natural(const Dimension& d) {
  const auto& p = planck();
  return std::pow(p.mass, d.mass_exp) * std::pow(p.length, d.length_exp) *
         std::pow(p.time, d.time_exp) * std::pow(p.temperature, d.temperature_exp);
}

struct Quantity {
  double value = 0.0;
  Dimension dimension{};
  System system = System::natural;

  /// Products stay in the system of the operands; mixing systems is an error.
  friend Quantity operator*(const Quantity& a, const Quantity& b) {
    if (a.system != b.system) {
      throw Error(Errc::invalid_quantity, "cannot multiply quantities from different unit systems");
    }
    return {a.value * b.value, a.dimension * b.dimension, a.system};
  }
};

inline double to_natural(const Quantity& q) {
  if (!std::isfinite(q.value)) {
    throw Error(Errc::invalid_quantity, "non-finite quantity value");
  }
  if (q.system == System::natural) return q.value;
  return q.value / si_per_natural(q.dimension);
}

inline Quantity from_natural(double x, const Dimension& d) {
  if (!std::isfinite(x)) {
    throw Error(Errc::invalid_quantity, "non-finite natural-unit value");
  }
  return {x * si_per_natural(d), d, System::si};
}

/// A named unit accepted at the input boundary, e.g. "1.0 solar_mass".
struct NamedUnit {
  std::string_view name;
  double si_factor;  // SI base-unit value of one of this unit
  Dimension dimension;
};

inline std::optional<NamedUnit> lookup_unit(std::string_view name) {
  if (name == "kg") return NamedUnit{"kg", 1.0, dim::mass};
  if (name == "g") return NamedUnit{"g", 1e-3, dim::mass};
  if (name == "solar_mass" || name == "M_sun") return NamedUnit{"solar_mass", solar_mass_kg, dim::mass};
  if (name == "s") return NamedUnit{"s", 1.0, dim::time};
  if (name == "yr") return NamedUnit{"yr", julian_year_s, dim::time};
  if (name == "m") return NamedUnit{"m", 1.0, dim::length};
  if (name == "km") return NamedUnit{"km", 1e3, dim::length};
  if (name == "K") return NamedUnit{"K", 1.0, dim::temperature};
  return std::nullopt;
}

}  // namespace ngsl::units

#endif  // NGSL_UNITS_HPP
