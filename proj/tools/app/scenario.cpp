#include "scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "ngsl/error.hpp"
#include "ngsl/units.hpp"

namespace ngsl::app {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(Errc::validation, what); }

std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

// Map view that rejects keys outside `allowed`.
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string path, std::set<std::string> allowed)
      : node_(node), path_(std::move(path)) {
    if (!node_ || node_.IsNull()) return;
    if (!node_.IsMap()) fail((path_.empty() ? "document" : path_) + ": expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) fail("unknown key '" + join(path_, key) + "'");
    }
  }

  [[nodiscard]] YAML::Node get(const std::string& key) const {
    if (!node_ || node_.IsNull()) return YAML::Node();
    return node_[key];
  }

  [[nodiscard]] bool has(const std::string& key) const {
    const YAML::Node n = get(key);
    return n.IsDefined() && !n.IsNull();
  }

  [[nodiscard]] std::string path(const std::string& key) const { return join(path_, key); }

 private:
  YAML::Node node_;
  std::string path_;
};

std::string scalar(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) fail(path + ": expected a scalar value");
  return n.Scalar();
}

double parse_double(std::string_view text, const std::string& path) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    fail(path + ": '" + std::string(text) + "' is not a finite number");
  }
  return v;
}

double number(const MapReader& map, const std::string& key, double fallback,
              const units::Dimension& dim = units::dim::dimensionless) {
  if (!map.has(key)) return fallback;
  return parse_natural(scalar(map.get(key), map.path(key)), dim, map.path(key));
}

double required_number(const MapReader& map, const std::string& key, const units::Dimension& dim) {
  if (!map.has(key)) fail("missing required key '" + map.path(key) + "'");
  return parse_natural(scalar(map.get(key), map.path(key)), dim, map.path(key));
}

void require(bool ok, const std::string& path, const std::string& constraint) {
  if (!ok) fail(path + ": must be " + constraint);
}

LedgerMode parse_mode(const std::string& text, const std::string& path) {
  if (text == "differential") return LedgerMode::differential;
  if (text == "exact") return LedgerMode::exact;
  fail(path + ": expected 'differential' or 'exact', got '" + text + "'");
}

EventSpec parse_event(const YAML::Node& node, const std::string& path) {
  MapReader map(node, path, {"time", "mass", "direction", "observed_dI"});
  EventSpec spec;
  spec.event.time = required_number(map, "time", units::dim::time);
  spec.event.particle_mass = required_number(map, "mass", units::dim::mass);
  require(spec.event.time >= 0.0, map.path("time"), ">= 0");
  require(spec.event.particle_mass > 0.0, map.path("mass"), "> 0");
  const std::string dir = map.has("direction") ? scalar(map.get("direction"), map.path("direction"))
                                               : std::string("infall");
  if (dir == "infall") {
    spec.event.direction = Direction::infall;
  } else if (dir == "emission") {
    spec.event.direction = Direction::emission;
  } else {
    fail(map.path("direction") + ": expected 'infall' or 'emission', got '" + dir + "'");
  }
  if (map.has("observed_dI")) spec.observed_dI = number(map, "observed_dI", 0.0);
  return spec;
}

DemonGridSpec parse_demon(const YAML::Node& node) {
  MapReader map(node, "demon",
                {"n_states", "bath_temperature", "protocol", "assumed_error", "error_rates", "tol"});
  DemonGridSpec spec;
  const double n = number(map, "n_states", 2.0);
  require(n >= 2.0 && n <= static_cast<double>(demon::max_states) && n == std::floor(n),
          map.path("n_states"), "an integer in [2, 8]");
  spec.n_states = static_cast<std::size_t>(n);
  spec.bath_temperature = number(map, "bath_temperature", 1.0, units::dim::temperature);
  require(spec.bath_temperature > 0.0, map.path("bath_temperature"), "> 0");
  spec.tol = number(map, "tol", 1e-12);
  require(spec.tol >= 0.0, map.path("tol"), ">= 0");

  const std::string protocol =
      map.has("protocol") ? scalar(map.get("protocol"), map.path("protocol")) : "optimal";
  if (protocol == "optimal") {
    spec.protocol = DemonProtocol::optimal;
  } else if (protocol == "bit_credit") {
    spec.protocol = DemonProtocol::bit_credit;
  } else if (protocol == "assumed") {
    spec.protocol = DemonProtocol::assumed;
    if (!map.has("assumed_error")) fail("missing required key 'demon.assumed_error'");
  } else {
    fail(map.path("protocol") + ": expected 'optimal', 'bit_credit' or 'assumed', got '" + protocol + "'");
  }
  spec.assumed_error = number(map, "assumed_error", 0.0);
  require(spec.assumed_error >= 0.0 && spec.assumed_error <= 0.5, map.path("assumed_error"),
          "in [0, 0.5]");

  const YAML::Node rates = map.get("error_rates");
  const std::string rates_path = map.path("error_rates");
  if (!rates || rates.IsNull()) {
    spec.error_rates = demon::error_rate_grid(0.0, 0.5, 0.01);
  } else if (rates.IsSequence()) {
    for (std::size_t i = 0; i < rates.size(); ++i) {
      spec.error_rates.push_back(
          parse_double(scalar(rates[i], rates_path + "[" + std::to_string(i) + "]"), rates_path));
    }
  } else {
    MapReader range(rates, rates_path, {"start", "stop", "step"});
    const double start = number(range, "start", 0.0);
    const double stop = number(range, "stop", 0.5);
    const double step = number(range, "step", 0.01);
    require(step > 0.0 && stop >= start, rates_path, "a range with step > 0 and stop >= start");
    spec.error_rates = demon::error_rate_grid(start, stop, step);
  }
  require(!spec.error_rates.empty(), rates_path, "nonempty");
  for (std::size_t i = 0; i < spec.error_rates.size(); ++i) {
    const double e = spec.error_rates[i];
    require(e >= 0.0 && e <= 0.5, rates_path + "[" + std::to_string(i) + "]", "in [0, 0.5]");
  }
  return spec;
}

const std::set<std::string> kTopLevelKeys = {"name",  "initial_mass", "mode",   "events", "evolution",
                                             "shell", "demon",        "verify", "sweep",  "output"};

Scenario parse_document(const YAML::Node& root, std::string_view text) {
  MapReader top(root, "", kTopLevelKeys);
  Scenario sc;
  sc.source = std::string(text);
  sc.config_hash = fnv1a64(text);

  if (top.has("name")) sc.name = scalar(top.get("name"), "name");
  sc.initial_mass = required_number(top, "initial_mass", units::dim::mass);
  require(sc.initial_mass > 0.0, "initial_mass", "> 0");

  LedgerMode mode = LedgerMode::differential;
  if (top.has("mode")) mode = parse_mode(scalar(top.get("mode"), "mode"), "mode");

  // Events.
  const YAML::Node events = top.get("events");
  if (events && !events.IsNull()) {
    if (!events.IsSequence()) fail("events: expected a sequence");
    for (std::size_t i = 0; i < events.size(); ++i) {
      sc.events.push_back(parse_event(events[i], "events[" + std::to_string(i) + "]"));
    }
  }
  for (std::size_t i = 1; i < sc.events.size(); ++i) {
    require(sc.events[i].event.time >= sc.events[i - 1].event.time,
            "events[" + std::to_string(i) + "].time", "not earlier than the preceding event");
  }

  // Evolution.
  MapReader evo(top.get("evolution"), "evolution",
                {"alpha", "mass_floor", "t_end", "rel_tol", "abs_tol", "max_step"});
  EvolutionConfig& cfg = sc.evolution;
  cfg.mode = mode;
  cfg.alpha = number(evo, "alpha", default_evaporation_alpha);
  require(cfg.alpha >= 0.0, evo.path("alpha"), ">= 0");
  cfg.mass_floor = number(evo, "mass_floor", default_mass_floor(sc.initial_mass), units::dim::mass);
  require(cfg.mass_floor > 0.0, evo.path("mass_floor"), "> 0");
  require(cfg.mass_floor <= sc.initial_mass, evo.path("mass_floor"), "<= initial_mass");
  if (evo.has("t_end")) {
    cfg.t_end = number(evo, "t_end", 0.0, units::dim::time);
  } else if (cfg.alpha > 0.0) {
    cfg.t_end = 1.5 * analytic_lifetime(sc.initial_mass, cfg.alpha);
  } else {
    fail("missing required key 'evolution.t_end' (no default when alpha is 0)");
  }
  require(cfg.t_end > 0.0 && std::isfinite(cfg.t_end), evo.path("t_end"), "finite and > 0");
  cfg.step_control.rel_tol = number(evo, "rel_tol", 1e-10);
  require(cfg.step_control.rel_tol > 0.0, evo.path("rel_tol"), "> 0");
  cfg.step_control.abs_tol = number(evo, "abs_tol", 1e-300, units::dim::mass);
  require(cfg.step_control.abs_tol > 0.0, evo.path("abs_tol"), "> 0");
  cfg.step_control.max_step = number(evo, "max_step", cfg.t_end / 1000.0, units::dim::time);
  require(cfg.step_control.max_step > 0.0, evo.path("max_step"), "> 0");
  for (std::size_t i = 0; i < sc.events.size(); ++i) {
    require(sc.events[i].event.time < cfg.t_end, "events[" + std::to_string(i) + "].time",
            "< evolution.t_end");
  }

  // Shell.
  MapReader shell(top.get("shell"), "shell", {"sigma0", "r_ref", "p", "r_outer_max", "window"});
  DiskProfile& profile = cfg.shell_policy.profile;
  profile.sigma0 = number(shell, "sigma0", 0.0);
  require(profile.sigma0 >= 0.0, shell.path("sigma0"), ">= 0");
  profile.r_ref = number(shell, "r_ref", 2.0 * sc.initial_mass, units::dim::length);
  require(profile.r_ref > 0.0, shell.path("r_ref"), "> 0");
  profile.p = number(shell, "p", 0.0);
  profile.r_outer_max =
      number(shell, "r_outer_max", std::numeric_limits<double>::infinity(), units::dim::length);
  require(profile.r_outer_max > profile.r_ref, shell.path("r_outer_max"), "> shell.r_ref");
  cfg.shell_policy.window = number(shell, "window", 1.0, units::dim::time);
  require(cfg.shell_policy.window > 0.0, shell.path("window"), "> 0");

  // Demon grid.
  if (top.has("demon")) sc.demon = parse_demon(top.get("demon"));

  MapReader verify(top.get("verify"), "verify", {"tol"});
  sc.verify_tol = number(verify, "tol", 1e-12);
  require(sc.verify_tol >= 0.0, verify.path("tol"), ">= 0");

  // Sweep axes.
  const YAML::Node sweep = top.get("sweep");
  if (sweep && !sweep.IsNull()) {
    if (!sweep.IsMap()) fail("sweep: expected a mapping of dotted keys to value lists");
    for (const auto& kv : sweep) {
      SweepAxis axis;
      axis.key = kv.first.as<std::string>();
      const std::string path = "sweep." + axis.key;
      const auto head = axis.key.substr(0, axis.key.find('.'));
      if (!kTopLevelKeys.contains(head) || head == "sweep" || head == "events") {
        fail("unknown key '" + path + "'");
      }
      if (!kv.second.IsSequence() || kv.second.size() == 0) fail(path + ": expected a nonempty list");
      for (std::size_t i = 0; i < kv.second.size(); ++i) {
        axis.values.push_back(scalar(kv.second[i], path + "[" + std::to_string(i) + "]"));
      }
      sc.sweep.push_back(std::move(axis));
    }
  }

  // Output.
  MapReader out(top.get("output"), "output", {"directory", "formats"});
  if (out.has("directory")) sc.output.directory = scalar(out.get("directory"), out.path("directory"));
  if (out.has("formats")) {
    const YAML::Node formats = out.get("formats");
    if (!formats.IsSequence()) fail(out.path("formats") + ": expected a list");
    sc.output.csv = false;
    sc.output.json = false;
    for (std::size_t i = 0; i < formats.size(); ++i) {
      const std::string f = scalar(formats[i], out.path("formats"));
      if (f == "csv") {
        sc.output.csv = true;
      } else if (f == "json") {
        sc.output.json = true;
      } else {
        fail(out.path("formats") + ": unknown format '" + f + "'");
      }
    }
  }

  // Cross-module invariants, checked before any computation starts.
  validate(sc.evolution);
  if (sc.demon) (void)sc.demon_grid();
  return sc;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

double parse_natural(std::string_view text, const units::Dimension& expected, std::string_view key) {
  const std::string path(key);
  const auto space = text.find_first_of(" \t");
  if (space == std::string_view::npos) return parse_double(text, path);
  const double value = parse_double(text.substr(0, space), path);
  std::string_view unit = text.substr(space);
  while (!unit.empty() && (unit.front() == ' ' || unit.front() == '\t')) unit.remove_prefix(1);
  while (!unit.empty() && (unit.back() == ' ' || unit.back() == '\t')) unit.remove_suffix(1);
  if (unit.empty() || unit == "natural") return value;
  const auto named = units::lookup_unit(unit);
  if (!named) fail(path + ": unknown unit '" + std::string(unit) + "'");
  if (!(named->dimension == expected)) {
    fail(path + ": unit '" + std::string(unit) + "' has the wrong dimension for this key");
  }
  return units::to_natural({value * named->si_factor, named->dimension, units::System::si});
}

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    fail(std::string("malformed scenario document: ") + e.what());
  }
  Scenario sc;
  try {
    sc = parse_document(root, text);
  } catch (const YAML::Exception& e) {
    fail(std::string("malformed scenario document: ") + e.what());
  }
  // Each sweep value must yield a valid scenario on its own.
  for (const SweepAxis& axis : sc.sweep) {
    for (std::size_t i = 0; i < axis.values.size(); ++i) {
      try {
        (void)with_overrides(sc, {{axis.key, axis.values[i]}});
      } catch (const Error& e) {
        fail("sweep." + axis.key + "[" + std::to_string(i) + "]: " + e.detail());
      }
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Scenario with_overrides(const Scenario& base,
                        const std::vector<std::pair<std::string, std::string>>& overrides) {
  YAML::Node root = YAML::Load(base.source);
  root.remove("sweep");
  for (const auto& [key, value] : overrides) {
    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
    // Walk with fresh handles; assigning through a reused YAML::Node rebinds it.
    std::vector<YAML::Node> chain{root};
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      YAML::Node child = chain.back()[parts[i]];
      if (!child.IsDefined() || child.IsNull()) {
        chain.back()[parts[i]] = YAML::Node(YAML::NodeType::Map);
        child = chain.back()[parts[i]];
      }
      chain.push_back(child);
    }
    chain.back()[parts.back()] = YAML::Load(value);
  }
  YAML::Emitter emitter;
  emitter << root;
  return parse_scenario(emitter.c_str());
}

std::vector<TransitEvent> Scenario::transit_events() const {
  std::vector<TransitEvent> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(e.event);
  return out;
}

std::vector<demon::FeedbackModel> Scenario::demon_grid() const {
  std::vector<demon::FeedbackModel> grid;
  if (!demon) return grid;
  for (double eps : demon->error_rates) {
    demon::FeedbackModel m;
    switch (demon->protocol) {
      case DemonProtocol::optimal:
        m = demon::optimal_szilard(eps, demon->bath_temperature, demon->n_states);
        break;
      case DemonProtocol::bit_credit:
        m = demon::bit_credit_szilard(eps, demon->bath_temperature, demon->n_states);
        break;
      case DemonProtocol::assumed:
        m = demon::szilard_model(
            std::vector<double>(demon->n_states, 1.0 / static_cast<double>(demon->n_states)), eps,
            demon->bath_temperature, demon->assumed_error);
        break;
    }
    demon::validate(m);
    grid.push_back(std::move(m));
  }
  return grid;
}

}  // namespace ngsl::app
