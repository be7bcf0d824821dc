#pragma once
// Experiment configuration: INI-style "key = value" sections with
// line-numbered schema errors, and a canonical re-serialization.

#include "bouss/bathymetry.hpp"
#include "bouss/params.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bouss::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { identity_suite, decay_run, region_map, hypothesis_audit };

inline const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::identity_suite: return "identity-suite";
    case ExperimentKind::decay_run: return "decay-run";
    case ExperimentKind::region_map: return "region-map";
    case ExperimentKind::hypothesis_audit: return "hypothesis-audit";
  }
  return "?";
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::identity_suite;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  // [model]
  bool physical = false;
  double a = -1.0, c = -1.0, a1 = 0.0, c1 = 0.0;
  double theta = 0.0, lambda_p = 0.0, mu_p = 0.0, b = 1.0;

  // [bathymetry]
  Bathymetry bottom;

  // [grid]
  double L = 64.0 * std::numbers::pi;
  int N = 1024;

  // [initial]
  std::string initial = "gaussian";  // gaussian | mode | random | localized | zero
  double init_eps = 1e-2;
  double init_width = 2.0;
  double init_beta = 1.0;
  double init_x0 = 0.0;
  int init_mode = 1;
  int init_modes = 16;

  // [time]
  double t0 = 0.0;
  double dt = 1e-3;
  double t_end = 1.0;
  double cfl = 0.5;

  // [diagnostics]
  int every = 10;
  std::optional<double> alpha;  // empty: admissible-alpha search, 0 if none
  std::string weight = "auto";  // auto | schedule | fixed | none
  double fixed_lambda = 10.0;
  int fd_points = 5;
  int trajectory_every = 0;     // 0: no trajectory dump
  double tolerance = 1e-6;

  // [region_map]
  double a_min = -1.0, a_max = -0.01, c_min = -1.0, c_max = -0.01, map_step = 0.01, map_b = 1.0;

  // [audit]
  double audit_t_max = 10.0, audit_C = 10.0, audit_eps = 1e-2;

  AbcdParams params() const {
    if (physical) return params_from_physical(theta, lambda_p, mu_p, b);
    return AbcdParams::direct(a, c, a1, c1);
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

using Table = std::map<std::string, std::map<std::string, Entry>>;

inline Table tokenize(std::istream& in, const std::string& source) {
  Table t;
  std::string line, section;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto where = [&] { return source + ":" + std::to_string(no) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where() + "empty section name");
      t[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value'");
    if (section.empty()) throw ConfigError(where() + "key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where() + "empty key");
    if (t[section].count(key)) throw ConfigError(where() + "duplicate key '" + key + "' in [" + section + "]");
    t[section][key] = {value, no};
  }
  return t;
}

inline std::string fmt_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Parses a real, accepting "pi", "<x>*pi" and "<x>pi".
inline std::optional<double> parse_real(std::string s) {
  s = trim(s);
  double mult = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    mult = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) return mult;
    if (s == "-") return -mult;
  }
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) return std::nullopt;
  return v * mult;
}

class Reader {
 public:
  Reader(Table t, std::string source) : t_(std::move(t)), source_(std::move(source)) {}

  bool has(const std::string& sec, const std::string& key) const {
    const auto s = t_.find(sec);
    return s != t_.end() && s->second.count(key);
  }

  std::string str(const std::string& sec, const std::string& key, const std::optional<std::string>& fallback) {
    mark(sec, key);
    if (!has(sec, key)) {
      if (fallback) return *fallback;
      throw ConfigError(source_ + ": missing required key '" + key + "' in [" + sec + "]");
    }
    return t_.at(sec).at(key).value;
  }

  double real(const std::string& sec, const std::string& key, std::optional<double> fallback) {
    mark(sec, key);
    if (!has(sec, key)) {
      if (fallback) return *fallback;
      throw ConfigError(source_ + ": missing required key '" + key + "' in [" + sec + "]");
    }
    const Entry& e = t_.at(sec).at(key);
    const auto v = parse_real(e.value);
    if (!v || !std::isfinite(*v)) throw bad(e, key, "a real number");
    return *v;
  }

  long long integer(const std::string& sec, const std::string& key, std::optional<long long> fallback) {
    mark(sec, key);
    if (!has(sec, key)) {
      if (fallback) return *fallback;
      throw ConfigError(source_ + ": missing required key '" + key + "' in [" + sec + "]");
    }
    const Entry& e = t_.at(sec).at(key);
    long long v = 0;
    const auto r = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (r.ec != std::errc() || r.ptr != e.value.data() + e.value.size()) throw bad(e, key, "an integer");
    return v;
  }

  ConfigError bad(const Entry& e, const std::string& key, const std::string& what) const {
    return ConfigError(source_ + ":" + std::to_string(e.line) + ": key '" + key + "' must be " + what + ", got '" +
                       e.value + "'");
  }
  ConfigError invalid(const std::string& sec, const std::string& key, const std::string& why) const {
    const int line = has(sec, key) ? t_.at(sec).at(key).line : 0;
    return ConfigError(source_ + ":" + std::to_string(line) + ": key '" + key + "' in [" + sec + "] " + why);
  }

  /// Rejects any key that was never asked for.
  void finish() const {
    for (const auto& [sec, keys] : t_)
      for (const auto& [key, e] : keys)
        if (!used_.count(sec + "." + key))
          throw ConfigError(source_ + ":" + std::to_string(e.line) + ": unknown key '" + key + "' in [" + sec + "]");
  }

 private:
  void mark(const std::string& sec, const std::string& key) { used_.insert(sec + "." + key); }
  Table t_;
  std::string source_;
  std::set<std::string> used_;
};

}  // namespace detail

inline ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::identity_suite, ExperimentKind::decay_run, ExperimentKind::region_map,
                 ExperimentKind::hypothesis_audit})
    if (s == kind_name(k)) return k;
  throw ConfigError("unknown experiment kind '" + s + "'");
}

inline ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>") {
  detail::Reader r(detail::tokenize(in, source), source);
  ExperimentConfig c;
  const std::string kind = r.str("experiment", "kind", std::nullopt);
  try {
    c.kind = parse_kind(kind);
  } catch (const ConfigError& e) {
    throw r.invalid("experiment", "kind", e.what());
  }
  c.output_dir = r.str("experiment", "output_dir", std::string("out"));
  const long long seed = r.integer("experiment", "seed", 1);
  if (seed < 0) throw r.invalid("experiment", "seed", "must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);

  const bool needs_sim = c.kind == ExperimentKind::identity_suite || c.kind == ExperimentKind::decay_run;
  const bool needs_grid = needs_sim || c.kind == ExperimentKind::hypothesis_audit;

  if (needs_sim || r.has("model", "mode")) {
    const std::string mode = r.str("model", "mode", std::string("direct"));
    if (mode == "direct") {
      c.physical = false;
      c.a = r.real("model", "a", std::nullopt);
      c.c = r.real("model", "c", std::nullopt);
      c.a1 = r.real("model", "a1", 0.0);
      c.c1 = r.real("model", "c1", 0.0);
    } else if (mode == "physical") {
      c.physical = true;
      c.theta = r.real("model", "theta", std::nullopt);
      c.lambda_p = r.real("model", "lambda", std::nullopt);
      c.mu_p = r.real("model", "mu", std::nullopt);
      c.b = r.real("model", "b", std::nullopt);
    } else {
      throw r.invalid("model", "mode", "must be 'direct' or 'physical'");
    }
  }

  if (needs_grid) {
    c.L = r.real("grid", "L", std::nullopt);
    const long long n = r.integer("grid", "N", std::nullopt);
    if (n < 16 || n % 2 != 0 || n > (1 << 24)) throw r.invalid("grid", "N", "must be even and >= 16");
    c.N = static_cast<int>(n);
    if (!(c.L > 0.0)) throw r.invalid("grid", "L", "must be positive");

    const std::string preset = r.str("bathymetry", "preset", std::string("flat"));
    try {
      c.bottom.preset = parse_preset(preset);
    } catch (const std::invalid_argument& e) {
      throw r.invalid("bathymetry", "preset", e.what());
    }
    c.bottom.epsilon = r.real("bathymetry", "epsilon", 0.0);
    c.bottom.x0 = r.real("bathymetry", "x0", 0.0);
    c.bottom.width = r.real("bathymetry", "width", 1.0);
    c.bottom.t_ref = r.real("bathymetry", "t_ref", 0.0);
    c.bottom.t1 = r.real("bathymetry", "t1", 1.0);
    c.bottom.t2 = r.real("bathymetry", "t2", 2.0);
    c.bottom.k0 = r.real("bathymetry", "k0", 1.0);
    try {
      c.bottom.validated();
    } catch (const std::invalid_argument& e) {
      throw r.invalid("bathymetry", "preset", e.what());
    }
  }

  if (needs_sim) {
    c.initial = r.str("initial", "preset", std::string("gaussian"));
    if (c.initial != "gaussian" && c.initial != "mode" && c.initial != "random" && c.initial != "localized" &&
        c.initial != "zero")
      throw r.invalid("initial", "preset", "must be gaussian, mode, random, localized or zero");
    c.init_eps = r.real("initial", "epsilon", 1e-2);
    c.init_width = r.real("initial", "width", 2.0);
    c.init_beta = r.real("initial", "beta", 1.0);
    c.init_x0 = r.real("initial", "x0", 0.0);
    c.init_mode = static_cast<int>(r.integer("initial", "mode", 1));
    c.init_modes = static_cast<int>(r.integer("initial", "modes", 16));
    if (!(c.init_width > 0.0)) throw r.invalid("initial", "width", "must be positive");

    c.t0 = r.real("time", "t0", 0.0);
    c.dt = r.real("time", "dt", std::nullopt);
    c.t_end = r.real("time", "t_end", std::nullopt);
    c.cfl = r.real("time", "cfl", 0.5);
    if (!(c.dt > 0.0)) throw r.invalid("time", "dt", "must be positive");
    if (!(c.t_end > c.t0)) throw r.invalid("time", "t_end", "must exceed t0");
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw r.invalid("time", "cfl", "must lie in (0,1]");

    const long long every = r.integer("diagnostics", "every", 10);
    if (every < 1) throw r.invalid("diagnostics", "every", "must be >= 1");
    c.every = static_cast<int>(every);
    const std::string alpha = r.str("diagnostics", "alpha", std::string("auto"));
    if (alpha == "auto") {
      c.alpha.reset();
    } else {
      c.alpha = r.real("diagnostics", "alpha", std::nullopt);
    }
    c.weight = r.str("diagnostics", "weight", std::string("auto"));
    if (c.weight != "auto" && c.weight != "schedule" && c.weight != "fixed" && c.weight != "none")
      throw r.invalid("diagnostics", "weight", "must be auto, schedule, fixed or none");
    c.fixed_lambda = r.real("diagnostics", "lambda", 10.0);
    if (!(c.fixed_lambda > 0.0)) throw r.invalid("diagnostics", "lambda", "must be positive");
    const long long fd = r.integer("diagnostics", "fd_stencil", 5);
    if (fd != 3 && fd != 5) throw r.invalid("diagnostics", "fd_stencil", "must be 3 or 5");
    c.fd_points = static_cast<int>(fd);
    const long long te = r.integer("diagnostics", "trajectory_every", 0);
    if (te < 0) throw r.invalid("diagnostics", "trajectory_every", "must be >= 0");
    c.trajectory_every = static_cast<int>(te);
    c.tolerance = r.real("diagnostics", "tolerance", 1e-6);
    if (c.kind == ExperimentKind::decay_run && c.t0 < 11.0) throw r.invalid("time", "t0", "must be >= 11 for a decay run");
  }

  if (c.kind == ExperimentKind::region_map) {
    c.a_min = r.real("region_map", "a_min", -1.0);
    c.a_max = r.real("region_map", "a_max", -0.01);
    c.c_min = r.real("region_map", "c_min", -1.0);
    c.c_max = r.real("region_map", "c_max", -0.01);
    c.map_step = r.real("region_map", "step", 0.01);
    c.map_b = r.real("region_map", "b", 1.0);
    if (!(c.map_step > 0.0)) throw r.invalid("region_map", "step", "must be positive");
    if (!(c.a_max < 0.0 && c.c_max < 0.0 && c.a_min <= c.a_max && c.c_min <= c.c_max && c.c_min >= -1.0))
      throw r.invalid("region_map", "a_min", "ranges must satisfy a_min <= a_max < 0 and -1 <= c_min <= c_max < 0");
    if (!(c.map_b > 0.0)) throw r.invalid("region_map", "b", "must be positive");
  }

  if (c.kind == ExperimentKind::hypothesis_audit) {
    c.audit_t_max = r.real("audit", "t_max", std::nullopt);
    c.audit_C = r.real("audit", "C", std::nullopt);
    c.audit_eps = r.real("audit", "epsilon", std::nullopt);
    if (!(c.audit_t_max > 0.0)) throw r.invalid("audit", "t_max", "must be positive");
  }

  r.finish();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

/// Canonical normal form: every section relevant to the kind, every key, in a
/// fixed order, reals in shortest round-trip form.
inline std::string serialize_config(const ExperimentConfig& c) {
  using detail::fmt_double;
  std::ostringstream o;
  o << "[experiment]\nkind = " << kind_name(c.kind) << "\noutput_dir = " << c.output_dir << "\nseed = " << c.seed
    << "\n";
  const bool sim = c.kind == ExperimentKind::identity_suite || c.kind == ExperimentKind::decay_run;
  const bool grid = sim || c.kind == ExperimentKind::hypothesis_audit;
  if (sim) {
    o << "\n[model]\n";
    if (c.physical)
      o << "mode = physical\ntheta = " << fmt_double(c.theta) << "\nlambda = " << fmt_double(c.lambda_p)
        << "\nmu = " << fmt_double(c.mu_p) << "\nb = " << fmt_double(c.b) << "\n";
    else
      o << "mode = direct\na = " << fmt_double(c.a) << "\nc = " << fmt_double(c.c) << "\na1 = " << fmt_double(c.a1)
        << "\nc1 = " << fmt_double(c.c1) << "\n";
  }
  if (grid) {
    o << "\n[grid]\nL = " << fmt_double(c.L) << "\nN = " << c.N << "\n";
    const Bathymetry& b = c.bottom;
    o << "\n[bathymetry]\npreset = " << preset_name(b.preset) << "\nepsilon = " << fmt_double(b.epsilon)
      << "\nx0 = " << fmt_double(b.x0) << "\nwidth = " << fmt_double(b.width) << "\nt_ref = " << fmt_double(b.t_ref)
      << "\nt1 = " << fmt_double(b.t1) << "\nt2 = " << fmt_double(b.t2) << "\nk0 = " << fmt_double(b.k0) << "\n";
  }
  if (sim) {
    o << "\n[initial]\npreset = " << c.initial << "\nepsilon = " << fmt_double(c.init_eps)
      << "\nwidth = " << fmt_double(c.init_width) << "\nbeta = " << fmt_double(c.init_beta)
      << "\nx0 = " << fmt_double(c.init_x0) << "\nmode = " << c.init_mode << "\nmodes = " << c.init_modes << "\n";
    o << "\n[time]\nt0 = " << fmt_double(c.t0) << "\ndt = " << fmt_double(c.dt) << "\nt_end = " << fmt_double(c.t_end)
      << "\ncfl = " << fmt_double(c.cfl) << "\n";
    o << "\n[diagnostics]\nevery = " << c.every << "\nalpha = " << (c.alpha ? fmt_double(*c.alpha) : "auto")
      << "\nweight = " << c.weight << "\nlambda = " << fmt_double(c.fixed_lambda) << "\nfd_stencil = " << c.fd_points
      << "\ntrajectory_every = " << c.trajectory_every << "\ntolerance = " << fmt_double(c.tolerance) << "\n";
  }
  if (c.kind == ExperimentKind::region_map)
    o << "\n[region_map]\na_min = " << fmt_double(c.a_min) << "\na_max = " << fmt_double(c.a_max)
      << "\nc_min = " << fmt_double(c.c_min) << "\nc_max = " << fmt_double(c.c_max)
      << "\nstep = " << fmt_double(c.map_step) << "\nb = " << fmt_double(c.map_b) << "\n";
  if (c.kind == ExperimentKind::hypothesis_audit)
    o << "\n[audit]\nt_max = " << fmt_double(c.audit_t_max) << "\nC = " << fmt_double(c.audit_C)
      << "\nepsilon = " << fmt_double(c.audit_eps) << "\n";
  return o.str();
}

}  // namespace bouss::harness
