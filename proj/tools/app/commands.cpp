#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ngsl/error.hpp"

namespace fs = std::filesystem;

namespace ngsl::app {
namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::io, "failed writing " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create directory " + dir.string() + ": " + ec.message());
}

std::size_t thread_cap() {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NGSL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) cap = static_cast<std::size_t>(v);
  }
  return cap;
}

std::string point_directory(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%04zu", index);
  return buf;
}

}  // namespace

SimulationOutput simulate(const Scenario& sc) {
  SimulationOutput result;
  result.trajectory = integrate(BlackHole(sc.initial_mass), sc.transit_events(), sc.evolution);
  std::optional<Json> demon;
  if (sc.demon) {
    bool pass = false;
    demon = demon_report(sc, &pass);
  }
  result.summary = run_summary(sc, result.trajectory, demon);
  result.csv = trajectory_csv(result.trajectory);
  result.summary_text = result.summary.dump(2) + "\n";
  return result;
}

void write_outputs(const Scenario& sc, const SimulationOutput& result, const fs::path& dir) {
  make_dir(dir);
  if (sc.output.csv) write_file(dir / "trajectory.csv", result.csv);
  if (sc.output.json) write_file(dir / "summary.json", result.summary_text);
}

Json event_report(const Scenario& sc) {
  if (sc.events.empty()) {
    throw Error(Errc::validation, "events: the event subcommand needs at least one event");
  }
  const auto& cfg = sc.evolution;
  BlackHole bh(sc.initial_mass);
  Json entries = Json::array();
  for (std::size_t i = 0; i < sc.events.size(); ++i) {
    const TransitEvent& ev = sc.events[i].event;
    const Shell shell = build_shell(bh, cfg.shell_policy.profile, cfg.shell_policy.window);
    auto [post, entry] = apply_event(bh, ev, cfg.mode, cfg.mass_floor);
    const double dM = entry.mass_change();
    entries.push_back(Json{
        {"index", i},
        {"event",
         Json{{"time", ev.time},
              {"particle_mass", ev.particle_mass},
              {"direction", std::string(to_string(ev.direction))}}},
        {"ledger", ledger_entry_json(entry)},
        {"post_mass", post.mass()},
        {"shell_mass", shell.mass},
        {"shell_entropy_change", shell_entropy_change(bh, dM)},
        {"shell_info_change", shell_info_change(bh, shell, dM)},
        {"channel_width_bound", channel_width_bound(shell, dM)},
    });
    bh = post;
  }
  return Json{{"scenario", sc.name},
              {"mode", std::string(to_string(cfg.mode))},
              {"initial_mass", sc.initial_mass},
              {"entries", entries}};
}

Json demon_report(const Scenario& sc, bool* pass) {
  Scenario with_grid = sc;
  if (!with_grid.demon) {
    DemonGridSpec spec;
    spec.error_rates = demon::error_rate_grid(0.0, 0.5, 0.01);
    with_grid.demon = spec;
  }
  const auto grid = with_grid.demon_grid();
  const auto report = demon::verify_ngsl(grid, with_grid.demon->tol);
  if (pass) *pass = report.pass;
  return demon_report_json(report, grid);
}

Json run_sweep(const Scenario& sc, const fs::path& dir, std::optional<LedgerMode> mode) {
  if (sc.sweep.empty()) throw Error(Errc::validation, "sweep: the scenario declares no sweep axes");

  // Cartesian product, last axis varying fastest.
  std::vector<std::vector<std::pair<std::string, std::string>>> points{{}};
  for (const SweepAxis& axis : sc.sweep) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& prefix : points) {
      for (const auto& value : axis.values) {
        auto p = prefix;
        p.emplace_back(axis.key, value);
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }

  // Validate every point before running any of them.
  std::vector<Scenario> scenarios;
  scenarios.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      Scenario point = with_overrides(sc, points[i]);
      if (mode) point.evolution.mode = *mode;
      scenarios.push_back(std::move(point));
    } catch (const Error& e) {
      throw Error(e.code(), "sweep point " + std::to_string(i) + ": " + e.detail());
    }
  }

  make_dir(dir);
  std::vector<Json> results(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        const SimulationOutput out = simulate(scenarios[i]);
        write_outputs(scenarios[i], out, dir / point_directory(i));
        Json params = Json::object();
        for (const auto& [k, v] : points[i]) params[k] = v;
        results[i] = Json{{"directory", point_directory(i)},
                          {"parameters", params},
                          {"config_hash", out.summary["config_hash"]},
                          {"stop_reason", out.summary["stop_reason"]},
                          {"final_mass", out.summary["final_mass"]}};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(thread_cap(), points.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  Json axes = Json::array();
  for (const SweepAxis& axis : sc.sweep) axes.push_back(Json{{"key", axis.key}, {"values", axis.values}});
  Json index{{"schema_version", summary_schema_version},
             {"tool_version", tool_version()},
             {"scenario", sc.name},
             {"axes", axes},
             {"points", results}};
  write_file(dir / "sweep_index.json", index.dump(2) + "\n");
  return index;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Black-hole information ledger and channel-width simulator", "ngsl"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::string mode_text;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Integrate the scenario and write trajectory.csv and summary.json"},
      {"event", "Apply the scenario's transit events to the initial hole and print the ledger"},
      {"sweep", "Run the cartesian parameter grid declared under 'sweep'"},
      {"verify-ngsl", "Check ledger balances and the shell inequality for every event"},
      {"demon", "Verify dS - dI >= 0 over the scenario's feedback-model grid"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", scenario_path, "Scenario file (YAML)")->required();
    sub->add_option("--out", out_dir, "Output directory (defaults to output.directory)");
    sub->add_option("--mode", mode_text, "Ledger mode")
        ->check(CLI::IsMember({"differential", "exact"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_validation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Scenario sc = load_scenario(scenario_path);
    std::optional<LedgerMode> mode;
    if (!mode_text.empty()) {
      mode = mode_text == "exact" ? LedgerMode::exact : LedgerMode::differential;
      sc.evolution.mode = *mode;
    }
    const fs::path dir = out_dir.empty() ? fs::path(sc.output.directory) : fs::path(out_dir);

    if (command == "simulate") {
      const SimulationOutput result = simulate(sc);
      write_outputs(sc, result, dir);
      out << "scenario '" << sc.name << "': " << result.trajectory.samples.size() << " samples, "
          << result.trajectory.events.size() << " events, stop reason "
          << to_string(result.trajectory.stop_reason) << "; outputs in " << dir.string() << "\n";
      return exit_ok;
    }
    if (command == "event") {
      out << event_report(sc).dump(2) << "\n";
      return exit_ok;
    }
    if (command == "sweep") {
      const Json index = run_sweep(sc, dir, mode);
      out << "sweep '" << sc.name << "': " << index["points"].size() << " points; index in "
          << (dir / "sweep_index.json").string() << "\n";
      return exit_ok;
    }
    if (command == "verify-ngsl") {
      const Trajectory traj = integrate(BlackHole(sc.initial_mass), sc.transit_events(), sc.evolution);
      const VerifyResult result = verify_events(sc, traj);
      out << result.report.dump(2) << "\n";
      return result.pass ? exit_ok : exit_violation;
    }
    bool pass = false;
    out << demon_report(sc, &pass).dump(2) << "\n";
    return pass ? exit_ok : exit_violation;
  } catch (const Error& e) {
    err << "ngsl " << command << ": " << e.what() << "\n";
    return e.code() == Errc::io ? exit_io : exit_validation;
  } catch (const fs::filesystem_error& e) {
    err << "ngsl " << command << ": " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    err << "ngsl " << command << ": " << e.what() << "\n";
    return exit_validation;
  }
}

}  // namespace ngsl::app
