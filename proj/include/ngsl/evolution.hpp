#ifndef NGSL_EVOLUTION_HPP
#define NGSL_EVOLUTION_HPP

// Mass evolution under Hawking evaporation dM/dt = -alpha / M^2, interrupted
// by discrete horizon transits. Between transits the mass is advanced with
// step-doubling RK4; a transit is applied atomically at its scheduled time
// through the ledger, and the shell bound is accumulated into the channel
// budget. The continuous contribution -M_s d(1/T_H) along evaporation
// segments is accumulated separately.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ngsl/error.hpp"
#include "ngsl/ledger.hpp"
#include "ngsl/schwarzschild.hpp"
#include "ngsl/shell.hpp"

namespace ngsl {

/// Photon-only geometric-units emission coefficient, 1 / (15360 pi).
inline constexpr double default_evaporation_alpha = 1.0 / (15360.0 * pi);

/// Remaining time to the floor, relative to the elapsed time, below which the
/// integrator finishes the descent by quadrature in M.
inline constexpr double terminal_descent_fraction = 1e-9;

inline constexpr double default_mass_floor(double initial_mass) { return 1e-6 * initial_mass; }

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  double max_step = std::numeric_limits<double>::infinity();
};

struct ShellPolicy {
  DiskProfile profile{};
  double window = 1.0;
};

struct EvolutionConfig {
  double alpha = default_evaporation_alpha;
  double mass_floor = 1e-6;
  double t_end = 1.0;
  StepControl step_control{};
  ShellPolicy shell_policy{};
  LedgerMode mode = LedgerMode::differential;
};

inline void validate(const EvolutionConfig& cfg) {
  if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) {
    throw Error(Errc::validation, "alpha must be finite and >= 0");
  }
  if (!(cfg.mass_floor > 0.0) || !std::isfinite(cfg.mass_floor)) {
    throw Error(Errc::validation, "mass_floor must be > 0");
  }
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) {
    throw Error(Errc::validation, "t_end must be finite and > 0");
  }
  const auto& sc = cfg.step_control;
  if (!(sc.rel_tol > 0.0)) throw Error(Errc::validation, "rel_tol must be > 0");
  if (!(sc.abs_tol > 0.0)) throw Error(Errc::validation, "abs_tol must be > 0");
  if (!(sc.max_step > 0.0)) throw Error(Errc::validation, "max_step must be > 0");
  validate(cfg.shell_policy.profile);
  if (!(cfg.shell_policy.window > 0.0)) throw Error(Errc::validation, "shell window must be > 0");
}

inline double evaporation_rate(double mass, double alpha, double mass_floor = 0.0) {
  if (!(mass >= mass_floor) || !(mass > 0.0)) {
    throw Error(Errc::evaporated,
                "mass " + std::to_string(mass) + " is below floor " + std::to_string(mass_floor));
  }
  return -alpha / (mass * mass);
}

/// Extinction time M0^3 / (3 alpha) of the inverse-square law.
inline double analytic_lifetime(double initial_mass, double alpha) {
  return initial_mass * initial_mass * initial_mass / (3.0 * alpha);
}

/// Closed-form time for the inverse-square law to carry M0 down to `floor`.
inline double analytic_time_to_floor(double initial_mass, double floor, double alpha) {
  const double ratio = floor / initial_mass;
  return analytic_lifetime(initial_mass, alpha) * (1.0 - ratio * ratio * ratio);
}

struct Sample {
  double t;
  double mass;
  double temperature;
  double entropy;
  double information;
  double shell_mass;
  double cumulative_budget;
  int event_flag;
};

struct EventRecord {
  std::size_t sample_index;
  TransitEvent event;
  LedgerEntry entry;
  Shell shell;
  double bound;
  double shell_entropy;
  double shell_information;
};

enum class StopReason { end_time, mass_floor, emission_below_floor };

constexpr std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::end_time: return "end_time";
    case StopReason::mass_floor: return "mass_floor";
    case StopReason::emission_below_floor: return "emission_below_floor";
  }
  return "unknown";
}

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<EventRecord> events;
  StopReason stop_reason = StopReason::end_time;
  double budget_events = 0.0;
  double budget_continuous = 0.0;
  std::size_t rejected_steps = 0;
};

namespace detail {

/// -M_s d(1/T_H) over one evaporation segment, trapezoidal in shell mass.
inline double continuous_budget(double shell_from, double shell_to, double mass_from,
                                double mass_to) noexcept {
  return -eight_pi * (0.5 * (shell_from + shell_to)) * (mass_to - mass_from);
}

inline Sample make_sample(double t, double mass, double shell_mass, double budget, int flag) {
  const BlackHole bh(mass);
  return {t, mass, hawking_temperature(bh), bh_entropy(bh), gravitational_information_bh(bh),
          shell_mass, budget, flag};
}

struct Rk4Result {
  double mass;
  bool ok;
};

// One classical RK4 step of dM/dt = -alpha/M^2. Fails unless every stage keeps M > 0.
inline Rk4Result rk4_step(double mass, double h, double alpha) noexcept {
  auto rate = [alpha](double m) { return -alpha / (m * m); };
  auto positive = [](double m) { return m > 0.0 && std::isfinite(m); };
  const double k1 = rate(mass);
  const double m2 = mass + 0.5 * h * k1;
  if (!positive(m2)) return {0.0, false};
  const double k2 = rate(m2);
  const double m3 = mass + 0.5 * h * k2;
  if (!positive(m3)) return {0.0, false};
  const double k3 = rate(m3);
  const double m4 = mass + h * k3;
  if (!positive(m4)) return {0.0, false};
  const double k4 = rate(m4);
  const double next = mass + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return {next, positive(next)};
}

// Time for the autonomous flow to carry `from` down to `to`, from the inverted
// equation dt/dM = -M^2/alpha. Simpson's rule is exact for this integrand.
inline double descent_time(double from, double to, double alpha) noexcept {
  auto dt_dm = [alpha](double m) { return -m * m / alpha; };
  const double mid = 0.5 * (from + to);
  return (to - from) / 6.0 * (dt_dm(from) + 4.0 * dt_dm(mid) + dt_dm(to));
}

}  // namespace detail

/// Integrates the hole from t = 0 to cfg.t_end, applying `events` in order.
inline Trajectory integrate(const BlackHole& bh0, std::span<const TransitEvent> events,
                            const EvolutionConfig& cfg) {
  validate(cfg);
  if (bh0.mass() < cfg.mass_floor) {
    throw Error(Errc::validation, "initial mass lies below the mass floor");
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (!(ev.time >= 0.0) || !(ev.time < cfg.t_end)) {
      throw Error(Errc::invalid_schedule,
                  "event " + std::to_string(i) + " time must lie in [0, t_end)");
    }
    if (i > 0 && ev.time < events[i - 1].time) {
      throw Error(Errc::invalid_schedule, "event " + std::to_string(i) + " is out of order");
    }
    if (!(ev.particle_mass > 0.0)) {
      throw Error(Errc::invalid_mass, "event " + std::to_string(i) + " has non-positive mass");
    }
  }

  const auto& sc = cfg.step_control;
  const auto& policy = cfg.shell_policy;
  auto shell_at = [&](double mass) { return build_shell(BlackHole(mass), policy.profile, policy.window); };

  Trajectory traj;
  double t = 0.0;
  double mass = bh0.mass();
  double shell_mass = shell_at(mass).mass;
  std::size_t next_event = 0;

  // Applies every event scheduled at the current time; returns false if an
  // emission would cross the floor.
  auto apply_due_events = [&]() -> bool {
    bool applied = false;
    while (next_event < events.size() && events[next_event].time == t) {
      const TransitEvent& ev = events[next_event];
      const BlackHole pre(mass);
      if (ev.direction == Direction::emission && mass - ev.particle_mass < cfg.mass_floor) {
        traj.samples.push_back(detail::make_sample(t, mass, shell_mass,
                                                   traj.budget_events + traj.budget_continuous, 0));
        traj.stop_reason = StopReason::emission_below_floor;
        return false;
      }
      const Shell shell = shell_at(mass);
      auto [post, entry] = apply_event(pre, ev, cfg.mode, cfg.mass_floor);
      const double dM = entry.mass_change();
      const double bound = channel_width_bound(shell, dM);
      traj.budget_events += bound;
      traj.events.push_back({traj.samples.size(), ev, entry, shell, bound,
                             shell_entropy_change(pre, dM), shell_info_change(pre, shell, dM)});
      mass = post.mass();
      ++next_event;
      applied = true;
    }
    if (applied) {
      shell_mass = shell_at(mass).mass;
    }
    traj.samples.push_back(detail::make_sample(t, mass, shell_mass,
                                               traj.budget_events + traj.budget_continuous,
                                               applied ? 1 : 0));
    return true;
  };

  auto land_on_floor = [&](double dt_floor) {
    traj.budget_continuous += detail::continuous_budget(shell_mass, shell_at(cfg.mass_floor).mass,
                                                        mass, cfg.mass_floor);
    t += dt_floor;
    mass = cfg.mass_floor;
    shell_mass = shell_at(mass).mass;
    traj.samples.push_back(
        detail::make_sample(t, mass, shell_mass, traj.budget_events + traj.budget_continuous, 0));
    traj.stop_reason = StopReason::mass_floor;
  };

  if (!apply_due_events()) return traj;

  const double span = cfg.t_end;
  double h = std::min(sc.max_step, span);
  if (cfg.alpha > 0.0) {
    // Start from a step that changes M by roughly rel_tol^(1/4) of itself.
    h = std::min(h, std::pow(sc.rel_tol, 0.25) * mass * mass * mass / cfg.alpha);
  }

  while (t < cfg.t_end) {
    const double target = next_event < events.size() ? events[next_event].time : cfg.t_end;

    while (t < target) {
      const double remaining = target - t;
      const bool lands_on_target = h >= remaining;
      const double step = lands_on_target ? remaining : h;

      if (cfg.alpha > 0.0) {
        // Close to extinction the time axis can no longer resolve the descent;
        // finish it by quadrature in M once the floor is that close.
        const double dt_floor = detail::descent_time(mass, cfg.mass_floor, cfg.alpha);
        if (t + dt_floor <= target && dt_floor <= terminal_descent_fraction * (t + dt_floor)) {
          land_on_floor(dt_floor);
          return traj;
        }
      }

      const double min_step = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
      if (step < min_step && !lands_on_target) {
        std::ostringstream msg;
        msg << "step size underflow at t=" << t << " M=" << mass << " h=" << step;
        throw Error(Errc::stiffness, msg.str());
      }

      double next_mass = mass;
      bool ok = true;
      double err = 0.0;
      if (cfg.alpha > 0.0) {
        const auto full = detail::rk4_step(mass, step, cfg.alpha);
        const auto half = detail::rk4_step(mass, 0.5 * step, cfg.alpha);
        const auto two = half.ok ? detail::rk4_step(half.mass, 0.5 * step, cfg.alpha)
                                 : detail::Rk4Result{0.0, false};
        ok = full.ok && two.ok;
        if (ok) {
          next_mass = two.mass;
          err = std::abs(two.mass - full.mass) / 15.0;
        }
      }

      if (!ok || next_mass < cfg.mass_floor) {
        // The floor lies within reach: land on it exactly if that happens
        // before the target, otherwise retry with a smaller step.
        const double dt_floor = detail::descent_time(mass, cfg.mass_floor, cfg.alpha);
        if (t + dt_floor <= target) {
          land_on_floor(dt_floor);
          return traj;
        }
        h = 0.5 * step;
        ++traj.rejected_steps;
        continue;
      }

      const double tol = sc.abs_tol + sc.rel_tol * std::abs(mass);
      if (err > tol) {
        h = step * std::max(0.2, 0.9 * std::pow(tol / err, 0.2));
        ++traj.rejected_steps;
        continue;
      }

      const double next_shell = shell_at(next_mass).mass;
      traj.budget_continuous += detail::continuous_budget(shell_mass, next_shell, mass, next_mass);
      t = lands_on_target ? target : t + step;
      mass = next_mass;
      shell_mass = next_shell;

      const double growth = err > 0.0 ? std::min(5.0, 0.9 * std::pow(tol / err, 0.2)) : 5.0;
      if (!lands_on_target) h = std::min(step * growth, sc.max_step);

      if (t < target || target == cfg.t_end) {
        traj.samples.push_back(detail::make_sample(
            t, mass, shell_mass, traj.budget_events + traj.budget_continuous, 0));
      }
    }

    if (target < cfg.t_end) {
      if (!apply_due_events()) return traj;
    }
  }

  traj.stop_reason = StopReason::end_time;
  return traj;
}

inline Trajectory integrate(const BlackHole& bh0, const std::vector<TransitEvent>& events,
                            const EvolutionConfig& cfg) {
  return integrate(bh0, std::span<const TransitEvent>(events), cfg);
}

/// Channel budget recomputed from the trajectory alone: the event bounds plus
/// -M_s d(1/T_H) integrated (trapezoidally in M_s) over evaporation segments.
inline double cumulative_channel_budget(const Trajectory& traj) {
  double events_total = 0.0;
  double continuous_total = 0.0;
  std::size_t ev = 0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    if (i > 0) {
      const Sample& prev = traj.samples[i - 1];
      if (ev < traj.events.size() && traj.events[ev].sample_index == i) {
        const EventRecord& first = traj.events[ev];
        continuous_total += detail::continuous_budget(prev.shell_mass, first.shell.mass, prev.mass,
                                                      first.entry.pre_mass());
      } else {
        continuous_total += detail::continuous_budget(prev.shell_mass, s.shell_mass, prev.mass, s.mass);
      }
    }
    while (ev < traj.events.size() && traj.events[ev].sample_index == i) {
      events_total += channel_width_bound(traj.events[ev].shell, traj.events[ev].entry.mass_change());
      ++ev;
    }
  }
  return events_total + continuous_total;
}

}  // namespace ngsl

#endif  // NGSL_EVOLUTION_HPP
