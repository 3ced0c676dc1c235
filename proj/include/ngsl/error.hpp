#ifndef NGSL_ERROR_HPP
#define NGSL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ngsl {

enum class Errc {
  invalid_quantity,
  inside_horizon,
  invalid_mass,
  evaporated_past_zero,
  evaporated_past_floor,
  complementarity_violation,
  invalid_window,
  evaporated,
  invalid_schedule,
  stiffness,
  invalid_distribution,
  invalid_model,
  validation,
  io,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_quantity: return "invalid-quantity";
    case Errc::inside_horizon: return "inside-horizon";
    case Errc::invalid_mass: return "invalid-mass";
    case Errc::evaporated_past_zero: return "evaporated-past-zero";
    case Errc::evaporated_past_floor: return "evaporated-past-floor";
    case Errc::complementarity_violation: return "complementarity-violation";
    case Errc::invalid_window: return "invalid-window";
    case Errc::evaporated: return "evaporated";
    case Errc::invalid_schedule: return "invalid-schedule";
    case Errc::stiffness: return "stiffness";
    case Errc::invalid_distribution: return "invalid-distribution";
    case Errc::invalid_model: return "invalid-model";
    case Errc::validation: return "validation";
    case Errc::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

  /// The message without the code prefix.
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace ngsl

#endif  // NGSL_ERROR_HPP
