#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#ifndef NGSL_VERSION
#define NGSL_VERSION "0.0.0"
#endif

namespace ngsl::app {

std::string tool_version() { return NGSL_VERSION; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = csv_header;
  out += '\n';
  for (const Sample& s : traj.samples) {
    for (double v : {s.t, s.mass, s.temperature, s.entropy, s.information, s.shell_mass,
                     s.cumulative_budget}) {
      out += format_double(v);
      out += ',';
    }
    out += std::to_string(s.event_flag);
    out += '\n';
  }
  return out;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// JSON has no infinity; unbounded values are written as null.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  [[nodiscard]] Json json() const {
    if (lo > hi) return Json{{"min", nullptr}, {"max", nullptr}};
    return Json{{"min", lo}, {"max", hi}};
  }
};

}  // namespace

Json ledger_entry_json(const LedgerEntry& entry) {
  const LedgerAudit audit = entry.audit();
  return Json{
      {"pre_mass", entry.pre_mass()},
      {"dM", entry.mass_change()},
      {"dI_sense", audit.dI_sense},
      {"dI_carry", audit.dI_carry},
      {"dS_bh", entry.entropy_change()},
      {"mode", std::string(to_string(entry.mode()))},
      {"discretization_residual", entry.discretization_residual()},
      {"ngsl_balance_sense", ngsl_balance(entry, Channel::sense)},
      {"ngsl_balance_carry", ngsl_balance(entry, Channel::carry)},
      {"channel_state", std::string(to_string(entry.channel_state()))},
  };
}

Json demon_report_json(const demon::NgslReport& report,
                       const std::vector<demon::FeedbackModel>& grid) {
  Json saturated = Json::array();
  for (std::size_t i : report.saturated) saturated.push_back(grid[i].error_rate);
  Json models = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    models.push_back(Json{{"error_rate", grid[i].error_rate},
                          {"dS", demon::entropy_production(grid[i])},
                          {"dI", demon::information_change(grid[i])},
                          {"margin", report.margins[i]}});
  }
  return Json{{"pass", report.pass},
              {"tol", report.tol},
              {"min_margin", report.min_margin},
              {"argmin", report.argmin},
              {"argmin_label", grid[report.argmin].label},
              {"saturated_error_rates", saturated},
              {"models", models}};
}

VerifyResult verify_events(const Scenario& sc, const Trajectory& traj) {
  VerifyResult result;
  const double tol = sc.verify_tol;
  Range ledger_range;
  Range shell_range;
  std::size_t violations = 0;
  Json events = Json::array();
  for (std::size_t i = 0; i < traj.events.size(); ++i) {
    const EventRecord& rec = traj.events[i];
    const BlackHole pre(rec.entry.pre_mass());
    const double dM = rec.entry.mass_change();
    const double balance_sense = ngsl_balance(rec.entry, Channel::sense);
    const double balance_carry = ngsl_balance(rec.entry, Channel::carry);
    const bool declared = i < sc.events.size() && sc.events[i].observed_dI.has_value();
    const double dI = declared ? *sc.events[i].observed_dI : rec.bound;
    const double residual = shell_ngsl_residual(pre, rec.shell, dM, dI);
    ledger_range.add(balance_sense);
    ledger_range.add(balance_carry);
    shell_range.add(residual);
    const bool ok = balance_sense >= -tol && balance_carry >= -tol && residual >= -tol;
    if (!ok) ++violations;
    events.push_back(Json{{"index", i},
                          {"time", rec.event.time},
                          {"dM", dM},
                          {"ledger_balance_sense", balance_sense},
                          {"ledger_balance_carry", balance_carry},
                          {"shell_mass", rec.shell.mass},
                          {"channel_width_bound", rec.bound},
                          {"observed_dI", dI},
                          {"observed_dI_declared", declared},
                          {"shell_residual", residual},
                          {"ok", ok}});
  }
  result.pass = violations == 0;
  result.report = Json{{"tol", tol},
                       {"events_checked", traj.events.size()},
                       {"violations", violations},
                       {"ledger_balance", ledger_range.json()},
                       {"shell_residual", shell_range.json()},
                       {"verdict", result.pass ? "pass" : "violation"},
                       {"events", events}};
  return result;
}

Json run_summary(const Scenario& sc, const Trajectory& traj, const std::optional<Json>& demon_report) {
  double ledger_dS = 0.0;
  double shell_dS = 0.0;
  double shell_dI = 0.0;
  double net_sense = 0.0;
  double net_carry = 0.0;
  for (const EventRecord& rec : traj.events) {
    ledger_dS += rec.entry.entropy_change();
    shell_dS += rec.shell_entropy;
    shell_dI += rec.shell_information;
    net_sense += rec.entry.audit().dI_sense;
    net_carry += rec.entry.audit().dI_carry;
  }
  const Sample& first = traj.samples.front();
  const Sample& last = traj.samples.back();
  const VerifyResult verify = verify_events(sc, traj);
  const auto& cfg = sc.evolution;
  const auto& profile = cfg.shell_policy.profile;

  Json ngsl{{"verdict", verify.report["verdict"]},
            {"violations", verify.report["violations"]},
            {"ledger_balance", verify.report["ledger_balance"]},
            {"shell_residual", verify.report["shell_residual"]},
            {"demon", demon_report ? *demon_report : Json(nullptr)}};

  return Json{
      {"schema_version", summary_schema_version},
      {"tool_version", tool_version()},
      {"scenario", sc.name},
      {"config_hash", hex64(sc.config_hash)},
      {"mode", std::string(to_string(cfg.mode))},
      {"stop_reason", std::string(to_string(traj.stop_reason))},
      {"final_time", last.t},
      {"final_mass", last.mass},
      {"samples", traj.samples.size()},
      {"events_applied", traj.events.size()},
      {"totals",
       Json{{"delta_S_bh", last.entropy - first.entropy},
            {"ledger_dS_bh", ledger_dS},
            {"delta_S_shell", shell_dS},
            {"delta_I_shell", shell_dI},
            {"net_dI_sense", net_sense},
            {"net_dI_carry", net_carry},
            {"cumulative_channel_budget", last.cumulative_budget},
            {"budget_events", traj.budget_events},
            {"budget_continuous", traj.budget_continuous}}},
      {"ngsl", ngsl},
      {"parameters",
       Json{{"initial_mass", sc.initial_mass},
            {"alpha", cfg.alpha},
            {"mass_floor", cfg.mass_floor},
            {"t_end", cfg.t_end},
            {"rel_tol", cfg.step_control.rel_tol},
            {"abs_tol", cfg.step_control.abs_tol},
            {"max_step", finite_or_null(cfg.step_control.max_step)},
            {"shell",
             Json{{"sigma0", profile.sigma0},
                  {"r_ref", profile.r_ref},
                  {"p", profile.p},
                  {"r_outer_max", finite_or_null(profile.r_outer_max)},
                  {"window", cfg.shell_policy.window}}}}},
      {"metadata",
       Json{{"units", "natural (G = c = hbar = k_B = 1)"},
            {"continuous_budget_is_extension", true},
            {"continuous_budget_note",
             "budget_continuous integrates -M_s d(1/T_H) over evaporation segments; only "
             "budget_events comes from discrete horizon transits"}}},
  };
}

}  // namespace ngsl::app
