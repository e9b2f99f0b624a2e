#include "atomgate/config.hpp"

#include <yaml-cpp/yaml.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "atomgate/errors.hpp"

namespace atomgate {

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return "";
  return " (line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ")";
}

[[noreturn]] void fail(const std::string& key, const YAML::Node& node, const std::string& why) {
  throw ConfigError("config key '" + key + "'" + where(node) + ": " + why);
}

template <typename T>
T scalar(const std::string& key, const YAML::Node& node) {
  if (!node.IsScalar()) fail(key, node, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, node, "cannot convert '" + node.Scalar() + "'");
  }
}

bool is_null(const YAML::Node& node) {
  return node.IsNull() || (node.IsScalar() && (node.Scalar() == "~" || node.Scalar() == "null"));
}

/// One section's keys with their handlers. Keys not listed are rejected.
class Section {
 public:
  Section(std::string name, YAML::Node node) : name_(std::move(name)), node_(std::move(node)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) fail(name_, node_, "expected a mapping");
  }

  void on(const std::string& key, const std::function<void(const YAML::Node&)>& handler) {
    handlers_[key] = handler;
  }

  template <typename T>
  void bind(const std::string& key, T& target) {
    on(key, [this, key, &target](const YAML::Node& n) { target = scalar<T>(full(key), n); });
  }

  /// Exactly one of `<stem>_tau` / `<stem>_ms`.
  void time(const std::string& stem, TimeSpec& target) {
    exclusive_.push_back({stem + "_tau", stem + "_ms"});
    on(stem + "_tau", [this, stem, &target](const YAML::Node& n) {
      target = TimeSpec::tau(scalar<double>(full(stem + "_tau"), n));
    });
    on(stem + "_ms", [this, stem, &target](const YAML::Node& n) {
      target = TimeSpec::ms(scalar<double>(full(stem + "_ms"), n));
    });
  }

  /// Exactly one of `<stem>_Er` / `<stem>_Hz`.
  void energy(const std::string& stem, EnergySpec& target) {
    exclusive_.push_back({stem + "_Er", stem + "_Hz"});
    on(stem + "_Er", [this, stem, &target](const YAML::Node& n) {
      target = EnergySpec::recoil(scalar<double>(full(stem + "_Er"), n));
    });
    on(stem + "_Hz", [this, stem, &target](const YAML::Node& n) {
      target = EnergySpec::hertz(scalar<double>(full(stem + "_Hz"), n));
    });
  }

  std::string full(const std::string& key) const { return name_ + "." + key; }

  void apply() const {
    if (!node_ || node_.IsNull()) return;
    for (const auto& [a, b] : exclusive_) {
      if (node_[a] && node_[b]) fail(full(a), node_[a], "give only one of '" + a + "' and '" + b + "'");
    }
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      const std::string key = it->first.as<std::string>();
      const auto h = handlers_.find(key);
      if (h == handlers_.end()) fail(full(key), it->first, "unknown key");
      h->second(it->second);
    }
  }

 private:
  std::string name_;
  YAML::Node node_;
  std::map<std::string, std::function<void(const YAML::Node&)>> handlers_;
  std::vector<std::pair<std::string, std::string>> exclusive_;
};

void bind_optional(Section& s, const std::string& key, std::optional<double>& target,
                   const char* unset_word) {
  s.on(key, [&s, key, &target, unset_word](const YAML::Node& n) {
    if (is_null(n) || (n.IsScalar() && n.Scalar() == unset_word)) {
      target.reset();
    } else {
      target = scalar<double>(s.full(key), n);
    }
  });
}

// Shortest text that parses back to the same double.
std::string number(double v) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

std::string time_line(const std::string& stem, const TimeSpec& t) {
  return "  " + stem + (t.unit == TimeSpec::Unit::tau ? "_tau: " : "_ms: ") + number(t.value) + "\n";
}

std::string energy_line(const std::string& stem, const EnergySpec& e) {
  return "  " + stem + (e.unit == EnergySpec::Unit::recoil ? "_Er: " : "_Hz: ") + number(e.value) +
         "\n";
}

std::string quoted(const std::string& v) {
  YAML::Emitter e;
  e << YAML::DoubleQuoted << v;
  return e.c_str();
}

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError("config key '" + key + "': " + why);
}

const std::set<std::string>& sweepable() {
  static const std::set<std::string> names{"T_F", "T_OL", "n", "V_0", "U_0"};
  return names;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("config parse error at line " + std::to_string(e.mark.line + 1) +
                      ", column " + std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  ScenarioConfig cfg;
  if (!root || root.IsNull()) {
    validate(cfg);
    return cfg;
  }
  if (!root.IsMap()) fail("<root>", root, "expected a mapping of sections");

  std::vector<Section> sections;
  std::set<std::string> known;
  auto section = [&](const std::string& name) -> Section& {
    known.insert(name);
    sections.emplace_back(name, root[name]);
    return sections.back();
  };
  sections.reserve(11);

  PhysicalParams& p = cfg.physical;
  {
    Section& s = section("trap");
    s.bind("aperture_radius_m", p.aperture_radius);
    s.bind("wavelength_m", p.trap_wavelength);
    s.on("intensity_W_cm2", [&s, &p](const YAML::Node& n) {
      p.trap_intensity = scalar<double>(s.full("intensity_W_cm2"), n) * 1e4;
    });
    s.bind("atomic_line_m", p.atomic_line);
    bind_optional(s, "minimum_m", p.trap_minimum, "auto");
    s.energy("depth", p.trap_depth);
  }
  {
    Section& s = section("lattice");
    s.bind("wavelength_m", p.lattice_wavelength);
    s.energy("depth", p.lattice_depth);
    s.bind("waist_m", p.waist);
  }
  {
    Section& s = section("atom");
    s.bind("scattering_length_m", p.scattering_length);
    s.bind("mass_kg", p.atomic_mass);
    bind_optional(s, "half_linewidth_rad_s", p.half_linewidth, "none");
  }
  {
    Section& s = section("grid");
    s.bind("step1_dim", cfg.grid.step1_dim);
    s.bind("step1_points", cfg.grid.step1_points);
    s.bind("transport_dim", cfg.grid.transport_dim);
    s.bind("transport_points", cfg.grid.transport_points);
    s.bind("quadrature_order", cfg.grid.quadrature_order);
  }
  {
    Section& s = section("propagator");
    s.bind("dt_tau", cfg.propagator.dt);
    s.bind("trace_stride", cfg.propagator.trace_stride);
    s.bind("absorber_fraction", cfg.propagator.absorber_fraction);
    s.bind("instability_threshold", cfg.propagator.instability_threshold);
  }
  {
    Section& s = section("ground_state");
    s.bind("dt_tau", cfg.ground_state.dt);
    s.bind("energy_tol", cfg.ground_state.energy_tol);
    s.bind("max_iters", cfg.ground_state.max_iters);
    s.bind("check_interval", cfg.ground_state.check_interval);
    s.bind("warmup_factor", cfg.ground_state.warmup_factor);
  }
  {
    ScheduleSettings& sc = cfg.schedule;
    Section& s = section("schedule");
    s.time("T_F", sc.ramp);
    s.time("T_OL", sc.transport);
    s.time("t_hold", sc.hold);
    s.bind("n", sc.n);
    s.bind("phase", sc.phase);
    s.on("state", [&s, &sc](const YAML::Node& n) {
      const int v = scalar<int>(s.full("state"), n);
      if (v != 0 && v != 1) fail(s.full("state"), n, "must be 0 or 1");
      sc.state = v == 0 ? HyperfineState::zero : HyperfineState::one;
    });
    s.bind("step_fidelity", sc.step_fidelity);
    s.bind("site_pitch_m", sc.site_pitch);
  }
  {
    Section& s = section("interaction");
    s.on("method", [&s, &cfg](const YAML::Node& n) {
      const auto v = scalar<std::string>(s.full("method"), n);
      if (v == "separable") {
        cfg.interaction.method = InteractionSettings::Method::separable;
      } else if (v == "grid") {
        cfg.interaction.method = InteractionSettings::Method::grid;
      } else {
        fail(s.full("method"), n, "expected 'separable' or 'grid'");
      }
    });
    s.bind("points", cfg.interaction.points);
    bind_optional(s, "frequency_hz", cfg.interaction.frequency_hz, "none");
  }
  {
    Section& s = section("search");
    s.bind("enabled", cfg.search.enabled);
    s.bind("target", cfg.search.target);
    s.bind("lo_tau", cfg.search.lo);
    s.bind("hi_tau", cfg.search.hi);
    s.bind("scan_step_tau", cfg.search.scan_step);
    s.bind("tolerance_tau", cfg.search.tolerance);
  }
  {
    Section& s = section("sweep");
    s.bind("parameter", cfg.sweep.parameter);
    s.on("values", [&s, &cfg](const YAML::Node& n) {
      if (!n.IsSequence()) fail(s.full("values"), n, "expected a list");
      cfg.sweep.values.clear();
      for (const auto& v : n) cfg.sweep.values.push_back(scalar<double>(s.full("values"), v));
    });
    // [start, stop, step], inclusive of stop within rounding.
    s.on("range", [&s, &cfg](const YAML::Node& n) {
      if (!n.IsSequence() || n.size() != 3) fail(s.full("range"), n, "expected [start, stop, step]");
      const double a = scalar<double>(s.full("range"), n[0]);
      const double b = scalar<double>(s.full("range"), n[1]);
      const double h = scalar<double>(s.full("range"), n[2]);
      if (!(h > 0.0) || b < a) fail(s.full("range"), n, "needs step > 0 and stop >= start");
      cfg.sweep.values.clear();
      const long count = std::lround(std::floor((b - a) / h + 1e-9));
      for (long i = 0; i <= count; ++i) cfg.sweep.values.push_back(a + static_cast<double>(i) * h);
    });
  }
  {
    Section& s = section("output");
    s.bind("directory", cfg.output.directory);
    s.bind("plot", cfg.output.plot);
  }

  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string name = it->first.as<std::string>();
    if (!known.count(name)) fail(name, it->first, "unknown section");
  }
  if (root["sweep"] && root["sweep"]["values"] && root["sweep"]["range"]) {
    fail("sweep.range", root["sweep"]["range"], "give only one of 'values' and 'range'");
  }
  for (const Section& s : sections) s.apply();
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string emit_config(const ScenarioConfig& cfg) {
  const PhysicalParams& p = cfg.physical;
  std::ostringstream o;
  o << "trap:\n"
    << "  aperture_radius_m: " << number(p.aperture_radius) << "\n"
    << "  wavelength_m: " << number(p.trap_wavelength) << "\n"
    << "  intensity_W_cm2: " << number(p.trap_intensity * 1e-4) << "\n"
    << "  atomic_line_m: " << number(p.atomic_line) << "\n"
    << "  minimum_m: " << (p.trap_minimum ? number(*p.trap_minimum) : "auto") << "\n"
    << energy_line("depth", p.trap_depth);
  o << "lattice:\n"
    << "  wavelength_m: " << number(p.lattice_wavelength) << "\n"
    << energy_line("depth", p.lattice_depth)
    << "  waist_m: " << number(p.waist) << "\n";
  o << "atom:\n"
    << "  scattering_length_m: " << number(p.scattering_length) << "\n"
    << "  mass_kg: " << number(p.atomic_mass) << "\n"
    << "  half_linewidth_rad_s: " << (p.half_linewidth ? number(*p.half_linewidth) : "none") << "\n";
  o << "grid:\n"
    << "  step1_dim: " << cfg.grid.step1_dim << "\n"
    << "  step1_points: " << cfg.grid.step1_points << "\n"
    << "  transport_dim: " << cfg.grid.transport_dim << "\n"
    << "  transport_points: " << cfg.grid.transport_points << "\n"
    << "  quadrature_order: " << cfg.grid.quadrature_order << "\n";
  o << "propagator:\n"
    << "  dt_tau: " << number(cfg.propagator.dt) << "\n"
    << "  trace_stride: " << cfg.propagator.trace_stride << "\n"
    << "  absorber_fraction: " << number(cfg.propagator.absorber_fraction) << "\n"
    << "  instability_threshold: " << number(cfg.propagator.instability_threshold) << "\n";
  o << "ground_state:\n"
    << "  dt_tau: " << number(cfg.ground_state.dt) << "\n"
    << "  energy_tol: " << number(cfg.ground_state.energy_tol) << "\n"
    << "  max_iters: " << cfg.ground_state.max_iters << "\n"
    << "  check_interval: " << cfg.ground_state.check_interval << "\n"
    << "  warmup_factor: " << number(cfg.ground_state.warmup_factor) << "\n";
  const ScheduleSettings& sc = cfg.schedule;
  o << "schedule:\n"
    << time_line("T_F", sc.ramp) << time_line("T_OL", sc.transport) << time_line("t_hold", sc.hold)
    << "  n: " << sc.n << "\n"
    << "  phase: " << number(sc.phase) << "\n"
    << "  state: " << (sc.state == HyperfineState::zero ? 0 : 1) << "\n"
    << "  step_fidelity: " << number(sc.step_fidelity) << "\n"
    << "  site_pitch_m: " << number(sc.site_pitch) << "\n";
  o << "interaction:\n"
    << "  method: "
    << (cfg.interaction.method == InteractionSettings::Method::separable ? "separable" : "grid")
    << "\n"
    << "  points: " << cfg.interaction.points << "\n"
    << "  frequency_hz: "
    << (cfg.interaction.frequency_hz ? number(*cfg.interaction.frequency_hz) : "none") << "\n";
  o << "search:\n"
    << "  enabled: " << (cfg.search.enabled ? "true" : "false") << "\n"
    << "  target: " << number(cfg.search.target) << "\n"
    << "  lo_tau: " << number(cfg.search.lo) << "\n"
    << "  hi_tau: " << number(cfg.search.hi) << "\n"
    << "  scan_step_tau: " << number(cfg.search.scan_step) << "\n"
    << "  tolerance_tau: " << number(cfg.search.tolerance) << "\n";
  o << "sweep:\n"
    << "  parameter: " << quoted(cfg.sweep.parameter) << "\n"
    << "  values: [";
  for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
    o << (i ? ", " : "") << number(cfg.sweep.values[i]);
  }
  o << "]\n";
  o << "output:\n"
    << "  directory: " << quoted(cfg.output.directory) << "\n"
    << "  plot: " << (cfg.output.plot ? "true" : "false") << "\n";
  return o.str();
}

void validate(const ScenarioConfig& cfg) {
  try {
    validate(cfg.physical);
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("config sections 'trap'/'lattice'/'atom': ") + e.what());
  }
  const GridSettings& g = cfg.grid;
  require(g.step1_dim >= 1 && g.step1_dim <= 3, "grid.step1_dim", "must be 1, 2 or 3");
  require(g.transport_dim >= 1 && g.transport_dim <= 3, "grid.transport_dim", "must be 1, 2 or 3");
  require(g.step1_points == 0 || g.step1_points >= 2, "grid.step1_points", "must be 0 or >= 2");
  require(g.transport_points == 0 || g.transport_points >= 2, "grid.transport_points",
          "must be 0 or >= 2");
  require(g.quadrature_order >= 16, "grid.quadrature_order", "must be >= 16");
  require(cfg.propagator.dt > 0.0, "propagator.dt_tau", "must be positive");
  require(cfg.propagator.trace_stride >= 1, "propagator.trace_stride", "must be >= 1");
  require(cfg.propagator.absorber_fraction >= 0.0 && cfg.propagator.absorber_fraction < 0.5,
          "propagator.absorber_fraction", "must be in [0, 0.5)");
  require(cfg.propagator.instability_threshold > 0.0, "propagator.instability_threshold",
          "must be positive");
  require(cfg.ground_state.dt > 0.0, "ground_state.dt_tau", "must be positive");
  require(cfg.ground_state.energy_tol > 0.0, "ground_state.energy_tol", "must be positive");
  require(cfg.ground_state.max_iters > 0, "ground_state.max_iters", "must be positive");
  require(cfg.ground_state.check_interval >= 1, "ground_state.check_interval", "must be >= 1");
  require(cfg.ground_state.warmup_factor >= 1.0, "ground_state.warmup_factor", "must be >= 1");
  const ScheduleSettings& sc = cfg.schedule;
  require(sc.ramp.value > 0.0, "schedule.T_F", "must be positive");
  require(sc.transport.value > 0.0, "schedule.T_OL", "must be positive");
  require(sc.hold.value >= 0.0, "schedule.t_hold", "must be non-negative");
  require(sc.n >= 0, "schedule.n", "must be non-negative");
  require(sc.step_fidelity >= 0.0 && sc.step_fidelity <= 1.0, "schedule.step_fidelity",
          "must be in [0, 1]");
  require(sc.site_pitch > 0.0, "schedule.site_pitch_m", "must be positive");
  require(cfg.interaction.points >= 16, "interaction.points", "must be >= 16");
  if (cfg.interaction.frequency_hz) {
    require(*cfg.interaction.frequency_hz > 0.0, "interaction.frequency_hz", "must be positive");
  }
  const SearchSettings& s = cfg.search;
  require(s.target > 0.0 && s.target <= 1.0, "search.target", "must be in (0, 1]");
  require(s.lo >= 0.0 && s.hi > s.lo, "search.hi_tau", "needs 0 <= lo_tau < hi_tau");
  require(s.scan_step > 0.0, "search.scan_step_tau", "must be positive");
  require(s.tolerance > 0.0, "search.tolerance_tau", "must be positive");
  if (!cfg.sweep.parameter.empty()) {
    require(sweepable().count(cfg.sweep.parameter) == 1, "sweep.parameter",
            "must be one of T_F, T_OL, n, V_0, U_0");
  }
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : emit_config(cfg)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

}  // namespace atomgate
