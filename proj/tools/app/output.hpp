#ifndef NGSL_APP_OUTPUT_HPP
#define NGSL_APP_OUTPUT_HPP

#include <optional>
#include <string>

#include "json.hpp"
#include "ngsl/demon.hpp"
#include "ngsl/evolution.hpp"
#include "scenario.hpp"

namespace ngsl::app {

using Json = nlohmann::ordered_json;

inline constexpr int summary_schema_version = 1;
inline constexpr const char* csv_header = "t,M,T_H,S_bh,I_gM,M_s,cum_budget,event_flag";

std::string tool_version();

/// %.17g, enough digits for a lossless double round trip.
std::string format_double(double v);

std::string trajectory_csv(const Trajectory& traj);

Json demon_report_json(const demon::NgslReport& report,
                       const std::vector<demon::FeedbackModel>& grid);

Json ledger_entry_json(const LedgerEntry& entry);

/// Residual checks of every applied event: ledger balance in both channels
/// and the shell inequality with the declared (or saturating) dI.
struct VerifyResult {
  Json report;
  bool pass = true;
};
VerifyResult verify_events(const Scenario& sc, const Trajectory& traj);

Json run_summary(const Scenario& sc, const Trajectory& traj,
                 const std::optional<Json>& demon_report);

}  // namespace ngsl::app

#endif  // NGSL_APP_OUTPUT_HPP
