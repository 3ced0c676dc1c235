#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "ngsl/evolution.hpp"

namespace {

using namespace ngsl;

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

EvolutionConfig decay_config(double m0, double alpha, double rel_tol = 1e-10) {
  EvolutionConfig cfg;
  cfg.alpha = alpha;
  cfg.mass_floor = default_mass_floor(m0);
  cfg.t_end = 2.0 * analytic_lifetime(m0, alpha);
  cfg.step_control.rel_tol = rel_tol;
  return cfg;
}

double time_to_floor(double m0, double alpha, double rel_tol = 1e-10) {
  const Trajectory traj = integrate(BlackHole(m0), std::vector<TransitEvent>{}, decay_config(m0, alpha, rel_tol));
  EXPECT_EQ(traj.stop_reason, StopReason::mass_floor);
  return traj.samples.back().t;
}

void expect_closed_forms(const Trajectory& traj, double floor) {
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    const BlackHole bh(s.mass);
    ASSERT_LE(rel_err(s.temperature, 1.0 / (8.0 * pi * s.mass)), 1e-12);
    ASSERT_LE(rel_err(s.entropy, 4.0 * pi * s.mass * s.mass), 1e-12);
    ASSERT_LE(rel_err(s.information, 8.0 * pi * s.mass * s.mass), 1e-12);
    ASSERT_GE(s.mass, floor);
    if (i > 0) {
      ASSERT_GT(s.t, traj.samples[i - 1].t);
    }
  }
}

TEST(EvaporationRate, Examples) {
  EXPECT_EQ(evaporation_rate(1.0, 1.0), -1.0);
  EXPECT_EQ(evaporation_rate(2.0, 1.0), -0.25);
  EXPECT_EQ(evaporation_rate(3.0, 2.0), 2.0 * evaporation_rate(3.0, 1.0));
  try {
    (void)evaporation_rate(0.5, 1.0, 0.6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::evaporated);
  }
}

TEST(AnalyticLifetime, Examples) {
  EXPECT_LT(rel_err(analytic_lifetime(1.0, 1.0), 1.0 / 3.0), 1e-15);
  EXPECT_LT(rel_err(analytic_lifetime(2.0, 1.0), 8.0 / 3.0), 1e-15);
  EXPECT_EQ(analytic_lifetime(2.0, 1.0), 8.0 * analytic_lifetime(1.0, 1.0));
  EXPECT_EQ(analytic_lifetime(3.0, 2.0), 0.5 * analytic_lifetime(3.0, 1.0));
}

TEST(Integrate, NoDynamicsKeepsMassConstant) {
  EvolutionConfig cfg;
  cfg.alpha = 0.0;
  cfg.mass_floor = 1e-6;
  cfg.t_end = 10.0;
  cfg.step_control.max_step = 0.5;
  const Trajectory traj = integrate(BlackHole(1.0), std::vector<TransitEvent>{}, cfg);
  EXPECT_EQ(traj.stop_reason, StopReason::end_time);
  EXPECT_GE(traj.samples.size(), 21u);
  for (const Sample& s : traj.samples) EXPECT_EQ(s.mass, 1.0);
  EXPECT_EQ(traj.samples.back().t, 10.0);
  EXPECT_EQ(cumulative_channel_budget(traj), 0.0);
  expect_closed_forms(traj, cfg.mass_floor);
}

TEST(Integrate, SingleInfallWithoutEvaporation) {
  EvolutionConfig cfg;
  cfg.alpha = 0.0;
  cfg.mass_floor = 1e-6;
  cfg.t_end = 4.0;
  cfg.shell_policy.profile = DiskProfile{0.01, 2.0, 0.0};
  const std::vector<TransitEvent> events{{1.5, 0.001, Direction::infall}};
  const Trajectory traj = integrate(BlackHole(1.0), events, cfg);
  ASSERT_EQ(traj.events.size(), 1u);
  const auto& rec = traj.events.front();
  const Sample& at = traj.samples[rec.sample_index];
  EXPECT_EQ(at.t, 1.5);
  EXPECT_EQ(at.event_flag, 1);
  EXPECT_EQ(at.mass, 1.001);
  EXPECT_EQ(traj.samples[rec.sample_index - 1].mass, 1.0);
  const double ms = 0.01 * pi * 5.0;
  EXPECT_LT(rel_err(rec.shell.mass, ms), 1e-14);
  const double expected = -8.0 * pi * ms * 0.001;
  EXPECT_LT(rel_err(traj.budget_events + traj.budget_continuous, expected), 1e-14);
  EXPECT_LT(rel_err(cumulative_channel_budget(traj), expected), 1e-14);
  EXPECT_EQ(traj.samples.back().cumulative_budget, traj.budget_events);
}

TEST(Integrate, TimeToFloorMatchesClosedForm) {
  for (double alpha : {1.0, default_evaporation_alpha}) {
    for (double m0 : {1.0, 2.0, 4.0}) {
      const double expected = analytic_time_to_floor(m0, default_mass_floor(m0), alpha);
      EXPECT_LT(rel_err(time_to_floor(m0, alpha), expected), 1e-6) << "M0=" << m0 << " alpha=" << alpha;
    }
  }
}

TEST(Integrate, LifetimeScalesAsCube) {
  const double ratio = time_to_floor(2.0, 1.0) / time_to_floor(1.0, 1.0);
  EXPECT_LT(rel_err(ratio, 8.0), 1e-4);
}

TEST(Integrate, TighterToleranceNeverHurts) {
  for (double alpha : {1.0, default_evaporation_alpha}) {
    for (double m0 : {1.0, 2.0, 4.0}) {
      const double expected = analytic_time_to_floor(m0, default_mass_floor(m0), alpha);
      double prev = INFINITY;
      for (double tol = 1e-6; tol >= 1e-11; tol /= 2.0) {
        const double err = rel_err(time_to_floor(m0, alpha, tol), expected);
        EXPECT_LE(err, prev) << "M0=" << m0 << " alpha=" << alpha << " rel_tol=" << tol;
        prev = err;
      }
    }
  }
}

TEST(Integrate, SamplesSatisfyClosedForms) {
  const EvolutionConfig cfg = decay_config(3.0, 0.5);
  const Trajectory traj = integrate(BlackHole(3.0), std::vector<TransitEvent>{}, cfg);
  expect_closed_forms(traj, cfg.mass_floor);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    EXPECT_LT(traj.samples[i].mass, traj.samples[i - 1].mass);
  }
}

TEST(Integrate, ConstantShellBudgetOverPureEvaporation) {
  // A p = 1 disk has annulus mass 2 pi sigma0 r_ref window at every M.
  EvolutionConfig cfg = decay_config(1.0, 1.0);
  cfg.mass_floor = 0.25;
  cfg.shell_policy.profile = DiskProfile{0.01, 1.0, 1.0};
  cfg.shell_policy.window = 0.5;
  const Trajectory traj = integrate(BlackHole(1.0), std::vector<TransitEvent>{}, cfg);
  ASSERT_EQ(traj.stop_reason, StopReason::mass_floor);
  const double ms = 2.0 * pi * 0.01 * 0.5;
  for (const Sample& s : traj.samples) EXPECT_LT(rel_err(s.shell_mass, ms), 1e-12);
  const double expected = 8.0 * pi * ms * (1.0 - 0.25);
  EXPECT_LT(rel_err(cumulative_channel_budget(traj), expected), 1e-12);
  EXPECT_LT(rel_err(traj.samples.back().cumulative_budget, expected), 1e-12);
  EXPECT_GT(traj.budget_continuous, 0.0);
}

TEST(Integrate, SymmetricTransitsCancelBudget) {
  EvolutionConfig cfg;
  cfg.alpha = 0.0;
  cfg.t_end = 3.0;
  cfg.shell_policy.profile = DiskProfile{0.02, 1.0, 1.0};
  const std::vector<TransitEvent> events{{1.0, 0.01, Direction::infall}, {2.0, 0.01, Direction::emission}};
  const Trajectory traj = integrate(BlackHole(1.0), events, cfg);
  ASSERT_EQ(traj.events.size(), 2u);
  EXPECT_NEAR(cumulative_channel_budget(traj), 0.0, 1e-18);
  EXPECT_EQ(traj.samples.back().mass, 1.0);
}

TEST(Integrate, EventsAtSameTimeShareOneSample) {
  EvolutionConfig cfg;
  cfg.alpha = 0.0;
  cfg.t_end = 2.0;
  const std::vector<TransitEvent> events{{1.0, 0.1, Direction::infall}, {1.0, 0.2, Direction::infall}};
  const Trajectory traj = integrate(BlackHole(1.0), events, cfg);
  ASSERT_EQ(traj.events.size(), 2u);
  EXPECT_EQ(traj.events[0].sample_index, traj.events[1].sample_index);
  EXPECT_EQ(traj.events[1].entry.pre_mass(), 1.1);
  EXPECT_LT(rel_err(traj.samples[traj.events[0].sample_index].mass, 1.3), 1e-15);
}

TEST(Integrate, EventsAppliedAtPreEventMass) {
  EvolutionConfig cfg = decay_config(1.0, 0.01);
  cfg.t_end = 5.0;
  const std::vector<TransitEvent> events{{2.0, 0.01, Direction::infall}};
  const Trajectory traj = integrate(BlackHole(1.0), events, cfg);
  const auto& rec = traj.events.front();
  const Sample& at = traj.samples[rec.sample_index];
  EXPECT_EQ(at.t, 2.0);
  EXPECT_LT(traj.samples[rec.sample_index - 1].t, 2.0);
  EXPECT_LT(rel_err(rec.entry.pre_mass(), std::cbrt(1.0 - 3.0 * 0.01 * 2.0)), 1e-9);
  EXPECT_EQ(at.mass, rec.entry.pre_mass() + 0.01);
}

TEST(Integrate, EmissionBelowFloorStops) {
  EvolutionConfig cfg;
  cfg.alpha = 0.0;
  cfg.mass_floor = 0.5;
  cfg.t_end = 2.0;
  const std::vector<TransitEvent> events{{1.0, 0.6, Direction::emission}};
  const Trajectory traj = integrate(BlackHole(1.0), events, cfg);
  EXPECT_EQ(traj.stop_reason, StopReason::emission_below_floor);
  EXPECT_TRUE(traj.events.empty());
  EXPECT_EQ(traj.samples.back().mass, 1.0);
}

TEST(Integrate, RejectsBadSchedules) {
  EvolutionConfig cfg;
  cfg.alpha = 0.0;
  cfg.t_end = 2.0;
  const std::vector<std::vector<TransitEvent>> bad = {
      {{1.0, 0.1, Direction::infall}, {0.5, 0.1, Direction::infall}},
      {{2.0, 0.1, Direction::infall}},
      {{-1.0, 0.1, Direction::infall}},
  };
  for (const auto& events : bad) {
    try {
      (void)integrate(BlackHole(1.0), events, cfg);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::invalid_schedule);
    }
  }
}

TEST(Integrate, ReportsStepUnderflow) {
  // An unreachable tolerance forces the step below the time resolution.
  EvolutionConfig cfg = decay_config(1.0, 1.0);
  cfg.step_control.rel_tol = 1e-300;
  cfg.step_control.abs_tol = 1e-300;
  try {
    (void)integrate(BlackHole(1.0), std::vector<TransitEvent>{}, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::stiffness);
    EXPECT_NE(std::strstr(e.what(), "step size underflow"), nullptr);
  }
}

TEST(Integrate, RejectsInvalidConfig) {
  EvolutionConfig cfg;
  cfg.mass_floor = 0.0;
  EXPECT_THROW((void)integrate(BlackHole(1.0), std::vector<TransitEvent>{}, cfg), Error);
  cfg = EvolutionConfig{};
  cfg.step_control.rel_tol = 0.0;
  EXPECT_THROW((void)integrate(BlackHole(1.0), std::vector<TransitEvent>{}, cfg), Error);
  cfg = EvolutionConfig{};
  cfg.t_end = -1.0;
  EXPECT_THROW((void)integrate(BlackHole(1.0), std::vector<TransitEvent>{}, cfg), Error);
}

TEST(Integrate, IsBitDeterministic) {
  EvolutionConfig cfg = decay_config(1.0, 0.05);
  cfg.t_end = 6.0;
  cfg.shell_policy.profile = DiskProfile{1e-3, 2.0, 1.0, 100.0};
  const std::vector<TransitEvent> events{{0.5, 0.001, Direction::infall}, {2.5, 0.0015, Direction::emission}};
  const Trajectory a = integrate(BlackHole(1.0), events, cfg);
  const Trajectory b = integrate(BlackHole(1.0), events, cfg);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const Sample& x = a.samples[i];
    const Sample& y = b.samples[i];
    const double xs[] = {x.t, x.mass, x.temperature, x.entropy, x.information, x.shell_mass, x.cumulative_budget};
    const double ys[] = {y.t, y.mass, y.temperature, y.entropy, y.information, y.shell_mass, y.cumulative_budget};
    ASSERT_EQ(std::memcmp(xs, ys, sizeof xs), 0) << "sample " << i;
    ASSERT_EQ(x.event_flag, y.event_flag);
  }
  EXPECT_EQ(a.budget_continuous, b.budget_continuous);
}

}  // namespace
