#include "nhscat/config.hpp"

#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace nhscat {

ConfigError::ConfigError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + message
                                  : message),
      line_(line),
      column_(column) {}

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) throw ConfigError(message, 0, 0);
  throw ConfigError(message, mark.line + 1, mark.column + 1);
}

void require_map(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) fail(node, where + " must be a mapping");
}

void reject_unknown(const YAML::Node& map, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key)) fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

double as_double(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) fail(node, name + " must be a number");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail(node, name + " must be a number, got '" + node.Scalar() + "'");
  }
}

double as_angle(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) fail(node, name + " must be a number or a multiple of pi");
  if (auto v = parse_angle(node.Scalar())) return *v;
  fail(node, name + " must be a number or a multiple of pi, got '" + node.Scalar() + "'");
}

int as_int(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) fail(node, name + " must be an integer");
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    fail(node, name + " must be an integer, got '" + node.Scalar() + "'");
  }
}

bool as_bool(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) fail(node, name + " must be true or false");
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    fail(node, name + " must be true or false, got '" + node.Scalar() + "'");
  }
}

std::string as_string(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) fail(node, name + " must be a string");
  return node.Scalar();
}

CenterModel parse_model(const YAML::Node& node) {
  require_map(node, "model");
  if (!node["family"]) fail(node, "model.family is required");
  const std::string name = as_string(node["family"], "model.family");
  const auto family = parse_family(name);
  if (!family) {
    fail(node["family"],
         "unknown model family '" + name +
             "' (expected imaginary_onsite, unequal_hopping, complex_hopping, "
             "anti_hermitian_hopping or imaginary_coupling)");
  }
  auto get = [&](const char* key, double fallback) {
    return node[key] ? as_double(node[key], std::string("model.") + key) : fallback;
  };
  switch (*family) {
    case Family::ImaginaryOnsite:
      reject_unknown(node, {"family", "gamma0", "gamma1"}, "model");
      return ImaginaryOnsite{get("gamma0", 0.0), get("gamma1", 0.0)};
    case Family::UnequalHopping:
      reject_unknown(node, {"family", "kappa", "gamma"}, "model");
      return UnequalHopping{get("kappa", -1.0), get("gamma", 0.0)};
    case Family::ComplexHopping:
      reject_unknown(node, {"family", "kappa", "gamma"}, "model");
      return ComplexHopping{get("kappa", -1.0), get("gamma", 0.0)};
    case Family::AntiHermitianHopping:
      reject_unknown(node, {"family", "kappa", "gamma"}, "model");
      return AntiHermitianHopping{get("kappa", -1.0), get("gamma", 0.0)};
    case Family::ImaginaryCoupling:
      reject_unknown(node, {"family", "gamma"}, "model");
      return ImaginaryCoupling{get("gamma", 0.0)};
  }
  fail(node, "unreachable model family");
}

void check_finite(const YAML::Node& node, double v, const std::string& name) {
  if (!std::isfinite(v)) fail(node, name + " must be finite");
}

}  // namespace

std::optional<double> parse_angle(const std::string& text) {
  {
    std::istringstream is(text);
    double v = 0.0;
    if (is >> v && (is >> std::ws).eof()) return v;
  }
  static const std::regex pattern(
      R"(^\s*(?:([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*\*?\s*)?(-?)pi\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return std::nullopt;
  double value = std::numbers::pi;
  if (m[1].matched) value *= std::stod(m[1].str());
  if (m[2].length() > 0) value = -value;
  if (m[3].matched) {
    const double d = std::stod(m[3].str());
    if (d == 0.0) return std::nullopt;
    value /= d;
  }
  return value;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root.IsMap()) throw ConfigError("configuration must be a mapping", 1, 1);
  reject_unknown(root,
                 {"model", "lattice", "packet", "time", "k_grid", "sweep", "spectrum", "output",
                  "seed"},
                 "configuration");

  RunConfig cfg;
  if (!root["model"]) throw ConfigError("'model' section is required", 1, 1);
  cfg.model = parse_model(root["model"]);

  if (const YAML::Node lat = root["lattice"]) {
    require_map(lat, "lattice");
    reject_unknown(lat, {"L"}, "lattice");
    if (lat["L"]) {
      cfg.sites = as_int(lat["L"], "lattice.L");
      if (cfg.sites < 4 || cfg.sites % 2 != 0) fail(lat["L"], "lattice.L must be even and >= 4");
    }
  }

  if (const YAML::Node p = root["packet"]) {
    require_map(p, "packet");
    reject_unknown(p, {"j0", "sigma", "k"}, "packet");
    if (p["j0"]) cfg.packet.center = as_int(p["j0"], "packet.j0");
    if (p["sigma"]) {
      cfg.packet.width = as_double(p["sigma"], "packet.sigma");
      if (!(cfg.packet.width > 0.0)) fail(p["sigma"], "packet.sigma must be positive");
    }
    if (p["k"]) {
      cfg.packet.k = as_angle(p["k"], "packet.k");
      if (!(cfg.packet.k > 0.0 && cfg.packet.k < std::numbers::pi)) {
        fail(p["k"], "packet.k must lie in (0, pi)");
      }
    }
  }
  if (!LatticeSpec(cfg.sites).contains(cfg.packet.center)) {
    const YAML::Node where = root["packet"] && root["packet"]["j0"] ? root["packet"]["j0"] : root;
    fail(where, "packet.j0 lies outside the lattice");
  }

  if (const YAML::Node t = root["time"]) {
    require_map(t, "time");
    reject_unknown(t,
                   {"dt", "t_end", "record_every", "propagator", "auto_refine", "extract_at",
                    "growth_window", "snapshots"},
                   "time");
    if (t["dt"]) cfg.time.dt = as_double(t["dt"], "time.dt");
    if (t["t_end"]) cfg.time.t_end = as_double(t["t_end"], "time.t_end");
    if (t["record_every"]) cfg.time.record_every = as_double(t["record_every"], "time.record_every");
    if (!(cfg.time.dt > 0.0)) fail(t["dt"] ? t["dt"] : t, "time.dt must be positive");
    if (!(cfg.time.t_end >= 0.0)) fail(t["t_end"] ? t["t_end"] : t, "time.t_end must be >= 0");
    if (!(cfg.time.record_every > 0.0)) {
      fail(t["record_every"] ? t["record_every"] : t, "time.record_every must be positive");
    }
    if (t["propagator"]) {
      const std::string name = as_string(t["propagator"], "time.propagator");
      if (name == "stepper") {
        cfg.time.propagator = Propagator::Stepper;
      } else if (name == "eigen") {
        cfg.time.propagator = Propagator::Eigen;
      } else {
        fail(t["propagator"], "time.propagator must be 'stepper' or 'eigen'");
      }
    }
    if (t["auto_refine"]) cfg.time.auto_refine = as_bool(t["auto_refine"], "time.auto_refine");
    const std::vector<double> recorded = recording_times(cfg.time.t_end, cfg.time.record_every);
    auto on_cadence = [&](double v) {
      for (double r : recorded) {
        if (std::abs(r - v) <= 1e-9) return true;
      }
      return false;
    };
    if (t["extract_at"]) {
      const double v = as_double(t["extract_at"], "time.extract_at");
      if (!on_cadence(v)) fail(t["extract_at"], "time.extract_at is not a recorded time");
      cfg.time.extract_at = v;
    }
    if (const YAML::Node w = t["growth_window"]) {
      if (!w.IsSequence() || w.size() != 2) fail(w, "time.growth_window must be [from, to]");
      const double a = as_double(w[0], "time.growth_window[0]");
      const double b = as_double(w[1], "time.growth_window[1]");
      if (!(b > a)) fail(w, "time.growth_window must satisfy from < to");
      cfg.time.growth_window = std::make_pair(a, b);
    }
    if (const YAML::Node s = t["snapshots"]) {
      if (!s.IsSequence()) fail(s, "time.snapshots must be a list of times");
      for (const auto& item : s) {
        const double v = as_double(item, "time.snapshots[]");
        if (!on_cadence(v)) fail(item, "snapshot time is not a recorded time");
        cfg.time.snapshots.push_back(v);
      }
    }
  }

  if (const YAML::Node g = root["k_grid"]) {
    require_map(g, "k_grid");
    reject_unknown(g, {"start", "stop", "count"}, "k_grid");
    if (g["start"]) cfg.k_grid.start = as_angle(g["start"], "k_grid.start");
    if (g["stop"]) cfg.k_grid.stop = as_angle(g["stop"], "k_grid.stop");
    if (g["count"]) cfg.k_grid.count = as_int(g["count"], "k_grid.count");
    if (!(cfg.k_grid.start >= 0.0 && cfg.k_grid.stop <= std::numbers::pi &&
          cfg.k_grid.start <= cfg.k_grid.stop)) {
      fail(g, "k_grid must satisfy 0 <= start <= stop <= pi");
    }
    if (cfg.k_grid.count < 1) fail(g, "k_grid.count must be >= 1");
  }

  if (const YAML::Node s = root["sweep"]) {
    require_map(s, "sweep");
    reject_unknown(s, {"parameter", "start", "stop", "step"}, "sweep");
    SweepSpec sweep;
    const std::string expected(swept_parameter_name(family_of(cfg.model)));
    sweep.parameter = s["parameter"] ? as_string(s["parameter"], "sweep.parameter") : expected;
    if (sweep.parameter != expected) {
      fail(s["parameter"], "sweep.parameter must be '" + expected + "' for this model");
    }
    for (const char* key : {"start", "stop", "step"}) {
      if (!s[key]) fail(s, std::string("sweep.") + key + " is required");
    }
    sweep.start = as_double(s["start"], "sweep.start");
    sweep.stop = as_double(s["stop"], "sweep.stop");
    sweep.step = as_double(s["step"], "sweep.step");
    check_finite(s, sweep.start + sweep.stop + sweep.step, "sweep bounds");
    try {
      (void)sweep.grid();
    } catch (const std::invalid_argument& e) {
      fail(s, e.what());
    }
    cfg.sweep = sweep;
  }

  if (const YAML::Node sp = root["spectrum"]) {
    require_map(sp, "spectrum");
    reject_unknown(sp, {"threshold", "max_L", "profiles", "eigenvectors"}, "spectrum");
    if (sp["threshold"]) {
      cfg.spectrum.threshold = as_double(sp["threshold"], "spectrum.threshold");
      if (!(cfg.spectrum.threshold > 0.0)) fail(sp["threshold"], "spectrum.threshold must be > 0");
    }
    if (sp["max_L"]) cfg.spectrum.max_sites = as_int(sp["max_L"], "spectrum.max_L");
    if (sp["profiles"]) cfg.spectrum.profiles = as_bool(sp["profiles"], "spectrum.profiles");
    if (sp["eigenvectors"]) {
      cfg.spectrum.eigenvectors = as_bool(sp["eigenvectors"], "spectrum.eigenvectors");
    }
  }

  if (root["output"]) cfg.output = as_string(root["output"], "output");
  if (root["seed"]) {
    const int seed = as_int(root["seed"], "seed");
    if (seed < 0) fail(root["seed"], "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path.string(), 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace nhscat
