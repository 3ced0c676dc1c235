#ifndef NGSL_APP_SCENARIO_HPP
#define NGSL_APP_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ngsl/demon.hpp"
#include "ngsl/evolution.hpp"
#include "ngsl/ledger.hpp"
#include "ngsl/units.hpp"

namespace ngsl::app {

struct EventSpec {
  TransitEvent event;
  /// Declared change of the outside observer's information, checked against
  /// the channel-width bound by `verify-ngsl`.
  std::optional<double> observed_dI;
};

enum class DemonProtocol { optimal, bit_credit, assumed };

struct DemonGridSpec {
  std::size_t n_states = 2;
  double bath_temperature = 1.0;
  DemonProtocol protocol = DemonProtocol::optimal;
  double assumed_error = 0.0;
  std::vector<double> error_rates;
  double tol = 1e-12;
};

struct OutputSpec {
  std::string directory = "ngsl_out";
  bool csv = true;
  bool json = true;
};

struct SweepAxis {
  std::string key;                  // dotted path, e.g. "evolution.alpha"
  std::vector<std::string> values;  // YAML scalars as written
};

struct Scenario {
  std::string name = "scenario";
  double initial_mass = 1.0;
  std::vector<EventSpec> events;
  EvolutionConfig evolution{};
  std::optional<DemonGridSpec> demon;
  std::vector<SweepAxis> sweep;
  OutputSpec output{};
  double verify_tol = 1e-12;

  std::string source;  // document text the scenario was parsed from
  std::uint64_t config_hash = 0;

  [[nodiscard]] std::vector<TransitEvent> transit_events() const;
  [[nodiscard]] std::vector<demon::FeedbackModel> demon_grid() const;
};

/// Parses and fully validates a YAML scenario document. Throws
/// ngsl::Error(Errc::validation) naming the offending key.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

/// Re-parses `base.source` with the dotted-path overrides applied.
Scenario with_overrides(const Scenario& base,
                        const std::vector<std::pair<std::string, std::string>>& overrides);

/// Parses "<number> [unit]" and converts it to natural units. The unit must
/// carry dimension `expected`; a bare number is taken as already natural.
double parse_natural(std::string_view text, const units::Dimension& expected, std::string_view key);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace ngsl::app

#endif  // NGSL_APP_SCENARIO_HPP
