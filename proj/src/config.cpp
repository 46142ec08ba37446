#include "atomwalk/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "atomwalk/error.hpp"
#include "atomwalk/parallel.hpp"

namespace atomwalk {

namespace {

constexpr std::string_view kCommandNames[] = {"trajectory", "bloch", "lyapunov-map", "scan", "zoom", "pdf"};

// Raised by the value parsers, rewrapped with file position by parse_config.
struct BadValue {
  std::string what;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw BadValue{"expected a number, got '" + std::string(s) + "'"};
  return v;
}

std::size_t to_size(std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw BadValue{"expected a non-negative integer, got '" + std::string(s) + "'"};
  return v;
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw BadValue{"expected true or false, got '" + std::string(s) + "'"};
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto num = [&t](std::string key, auto field) {
      t[std::move(key)] = [field](RunConfig& c, std::string_view v) { field(c) = to_double(v); };
    };
    auto count = [&t](std::string key, auto field) {
      t[std::move(key)] = [field](RunConfig& c, std::string_view v) { field(c) = to_size(v); };
    };

    num("params.omega_r", [](RunConfig& c) -> double& { return c.params.omega_r; });
    num("params.delta", [](RunConfig& c) -> double& { return c.params.delta; });
    num("params.kappa", [](RunConfig& c) -> double& { return c.params.kappa; });

    num("initial.x0", [](RunConfig& c) -> double& { return c.initial.x; });
    num("initial.p0", [](RunConfig& c) -> double& { return c.initial.p; });
    num("initial.u0", [](RunConfig& c) -> double& { return c.initial.u; });
    num("initial.v0", [](RunConfig& c) -> double& { return c.initial.v; });
    num("initial.z0", [](RunConfig& c) -> double& { return c.initial.z; });

    num("integrator.rel_tol", [](RunConfig& c) -> double& { return c.integrator.rel_tol; });
    num("integrator.abs_tol", [](RunConfig& c) -> double& { return c.integrator.abs_tol; });
    num("integrator.max_step", [](RunConfig& c) -> double& { return c.integrator.max_step; });
    num("integrator.invariant_abort_threshold",
        [](RunConfig& c) -> double& { return c.integrator.invariant_abort_threshold; });
    t["integrator.t_max"] = [](RunConfig& c, std::string_view v) { c.t_max = to_double(v); };

    num("trajectory.sample_interval", [](RunConfig& c) -> double& { return c.trajectory.sample_interval; });
    t["trajectory.stop_on_exit"] = [](RunConfig& c, std::string_view v) { c.trajectory.stop_on_exit = to_bool(v); };

    num("lyapunov.delta_lo", [](RunConfig& c) -> double& { return c.map.delta_axis.lo; });
    num("lyapunov.delta_hi", [](RunConfig& c) -> double& { return c.map.delta_axis.hi; });
    count("lyapunov.delta_n", [](RunConfig& c) -> std::size_t& { return c.map.delta_axis.n; });
    num("lyapunov.kappa_lo", [](RunConfig& c) -> double& { return c.map.kappa_axis.lo; });
    num("lyapunov.kappa_hi", [](RunConfig& c) -> double& { return c.map.kappa_axis.hi; });
    count("lyapunov.kappa_n", [](RunConfig& c) -> std::size_t& { return c.map.kappa_axis.n; });
    num("lyapunov.renorm_interval", [](RunConfig& c) -> double& { return c.map.renorm_interval; });
    count("lyapunov.calibration_runs", [](RunConfig& c) -> std::size_t& { return c.map.calibration_runs; });
    num("lyapunov.reference_delta", [](RunConfig& c) -> double& { return c.map.reference_delta; });

    t["scan.axis"] = [](RunConfig& c, std::string_view v) {
      try {
        c.scan.axis = parse_scan_axis(trim(v));
      } catch (const Error& e) {
        throw BadValue{e.what()};
      }
    };
    t["scan.lo"] = [](RunConfig& c, std::string_view v) { c.scan.lo = to_double(v); };
    t["scan.hi"] = [](RunConfig& c, std::string_view v) { c.scan.hi = to_double(v); };
    count("scan.n", [](RunConfig& c) -> std::size_t& { return c.scan.n; });

    num("zoom.magnification", [](RunConfig& c) -> double& { return c.zoom.magnification; });
    count("zoom.levels", [](RunConfig& c) -> std::size_t& { return c.zoom.levels; });
    t["zoom.center"] = [](RunConfig& c, std::string_view v) { c.zoom.center = to_double(v); };
    num("zoom.regular_lo", [](RunConfig& c) -> double& { return c.zoom.regular_lo; });
    num("zoom.regular_hi", [](RunConfig& c) -> double& { return c.zoom.regular_hi; });
    t["zoom.uncertainty"] = [](RunConfig& c, std::string_view v) { c.zoom.uncertainty = to_bool(v); };
    t["zoom.eps_list"] = [](RunConfig& c, std::string_view v) {
      try {
        c.zoom.epsilons = parse_double_list(v, "zoom.eps_list");
      } catch (const Error& e) {
        throw BadValue{e.what()};
      }
    };

    count("pdf.linear_bins", [](RunConfig& c) -> std::size_t& { return c.pdf.linear_bins; });
    count("pdf.log_bins", [](RunConfig& c) -> std::size_t& { return c.pdf.log_bins; });
    auto window_end = [&t](std::string key, auto which, bool hi) {
      t[std::move(key)] = [which, hi](RunConfig& c, std::string_view v) {
        auto& w = which(c);
        if (!w) w = FitWindow{std::nan(""), std::nan("")};
        (hi ? w->hi : w->lo) = to_double(v);
      };
    };
    window_end("pdf.middle_lo", [](RunConfig& c) -> std::optional<FitWindow>& { return c.pdf.middle_window; }, false);
    window_end("pdf.middle_hi", [](RunConfig& c) -> std::optional<FitWindow>& { return c.pdf.middle_window; }, true);
    window_end("pdf.tail_lo", [](RunConfig& c) -> std::optional<FitWindow>& { return c.pdf.tail_window; }, false);
    window_end("pdf.tail_hi", [](RunConfig& c) -> std::optional<FitWindow>& { return c.pdf.tail_window; }, true);
    count("pdf.min_tail_count", [](RunConfig& c) -> std::size_t& { return c.pdf.min_tail_count; });

    t["run.workers"] = [](RunConfig& c, std::string_view v) {
      const std::size_t w = to_size(v);
      if (w < 1 || w > 4096) throw BadValue{"workers must be between 1 and 4096"};
      c.workers = static_cast<int>(w);
    };
    t["run.out"] = [](RunConfig& c, std::string_view v) { c.out_dir = std::string(trim(v)); };
    return t;
  }();
  return table;
}

// Line of every "section.key" and "[section]" in the text; the INI parser
// does not keep them.
struct SourceLines {
  std::map<std::string, std::size_t> keys;
  std::map<std::string, std::size_t> sections;
};

SourceLines source_lines(std::string_view text) {
  SourceLines lines;
  std::string section;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == ';' || line.front() == '#') continue;
    if (line.front() == '[') {
      section = std::string(trim(line.substr(1, line.find(']') - 1)));
      lines.sections.emplace(section, lineno);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string key(trim(line.substr(0, eq)));
    lines.keys.emplace(section.empty() ? key : section + "." + key, lineno);
  }
  return lines;
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, std::string_view field, std::string_view what) {
  std::ostringstream msg;
  msg << source;
  if (line > 0) msg << ':' << line;
  if (!field.empty()) msg << ": field '" << field << "'";
  msg << ": " << what;
  throw Error("config-parse-error", msg.str());
}

[[noreturn]] void invalid(std::string_view field, std::string_view what) {
  throw Error("invalid-config", std::string(field) + " " + std::string(what));
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string_view to_string(Command c) { return kCommandNames[static_cast<std::size_t>(c)]; }

Command parse_command(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kCommandNames); ++i)
    if (kCommandNames[i] == name) return static_cast<Command>(i);
  throw Error("config-parse-error", "unknown command '" + std::string(name) +
                                        "' (expected trajectory, bloch, lyapunov-map, scan, zoom or pdf)");
}

double RunConfig::effective_t_max() const {
  if (t_max) return *t_max;
  switch (command) {
    case Command::Scan:
    case Command::Zoom:
    case Command::Pdf:
      return 2e5;
    default:
      return 1e4;
  }
}

std::size_t RunConfig::effective_n() const {
  if (scan.n != 0) return scan.n;
  switch (command) {
    case Command::Zoom:
      return 2048;
    case Command::Pdf:
      return 50000;
    default:
      return 512;
  }
}

double RunConfig::effective_lo() const { return scan.lo.value_or(command == Command::Pdf ? 0.05 : 0.1); }

double RunConfig::effective_hi() const { return scan.hi.value_or(command == Command::Pdf ? 0.5 : 0.2); }

ScanSpec RunConfig::scan_spec() const {
  ScanSpec s;
  s.axis = scan.axis;
  s.lo = effective_lo();
  s.hi = effective_hi();
  s.n = effective_n();
  s.params = params;
  s.initial = initial;
  s.integrator = integrator;
  s.integrator.t_max = effective_t_max();
  s.integrator.record_nodes = false;
  s.integrator.sample_interval = 0.0;
  s.integrator.backward = false;
  return s;
}

void RunConfig::validate() const {
  if (workers < 1) invalid("run.workers", "must be >= 1");
  if (out_dir.empty()) invalid("run.out", "must not be empty");

  if (!positive(params.omega_r)) invalid("params.omega_r", "must be finite and > 0");
  if (!std::isfinite(params.delta)) invalid("params.delta", "must be finite");
  if (!std::isfinite(params.kappa)) invalid("params.kappa", "must be finite");

  if (!std::isfinite(initial.x)) invalid("initial.x0", "must be finite");
  if (!std::isfinite(initial.p)) invalid("initial.p0", "must be finite");
  const double norm = initial.u * initial.u + initial.v * initial.v + initial.z * initial.z;
  if (!(std::abs(norm - 1.0) <= 1e-12)) invalid("initial.u0/v0/z0", "must lie on the unit Bloch sphere");

  if (!positive(integrator.rel_tol)) invalid("integrator.rel_tol", "must be finite and > 0");
  if (!positive(integrator.abs_tol)) invalid("integrator.abs_tol", "must be finite and > 0");
  if (!positive(integrator.max_step)) invalid("integrator.max_step", "must be finite and > 0");
  if (!positive(integrator.invariant_abort_threshold))
    invalid("integrator.invariant_abort_threshold", "must be finite and > 0");
  if (!positive(effective_t_max())) invalid("integrator.t_max", "must be finite and > 0");

  if (!(std::isfinite(trajectory.sample_interval) && trajectory.sample_interval >= 0.0))
    invalid("trajectory.sample_interval", "must be finite and >= 0");

  auto axis = [](const GridAxis& a, const char* prefix) {
    const std::string p(prefix);
    if (a.n < 1) invalid("lyapunov." + p + "_n", "must be >= 1");
    if (!std::isfinite(a.lo)) invalid("lyapunov." + p + "_lo", "must be finite");
    if (!std::isfinite(a.hi) || (a.n > 1 && !(a.lo < a.hi))) invalid("lyapunov." + p + "_hi", "must exceed the lower end");
  };
  axis(map.delta_axis, "delta");
  axis(map.kappa_axis, "kappa");
  if (!positive(map.renorm_interval)) invalid("lyapunov.renorm_interval", "must be finite and > 0");
  if (command == Command::LyapunovMap && !(effective_t_max() >= 100.0 * map.renorm_interval))
    invalid("integrator.t_max", "must be at least 100 renormalization intervals for lyapunov-map");
  if (map.calibration_runs < 2) invalid("lyapunov.calibration_runs", "must be >= 2");
  if (!std::isfinite(map.reference_delta)) invalid("lyapunov.reference_delta", "must be finite");

  const double lo = effective_lo(), hi = effective_hi();
  if (!std::isfinite(lo)) invalid("scan.lo", "must be finite");
  if (!std::isfinite(hi) || !(lo < hi)) invalid("scan.hi", "must exceed scan.lo");
  if (effective_n() < 2) invalid("scan.n", "must be >= 2");

  if (!(std::isfinite(zoom.magnification) && zoom.magnification > 1.0)) invalid("zoom.magnification", "must be > 1");
  if (zoom.levels < 1) invalid("zoom.levels", "must be >= 1");
  if (zoom.center && !(*zoom.center >= lo && *zoom.center <= hi))
    invalid("zoom.center", "must lie inside the scan interval");
  if (!std::isfinite(zoom.regular_lo)) invalid("zoom.regular_lo", "must be finite");
  if (!std::isfinite(zoom.regular_hi) || !(zoom.regular_lo < zoom.regular_hi))
    invalid("zoom.regular_hi", "must exceed zoom.regular_lo");
  if (zoom.uncertainty) {
    if (zoom.epsilons.size() < 4) invalid("zoom.eps_list", "needs at least 4 values");
    for (double e : zoom.epsilons)
      if (!positive(e)) invalid("zoom.eps_list", "values must be finite and > 0");
    const auto [lo, hi] = std::minmax_element(zoom.epsilons.begin(), zoom.epsilons.end());
    if (*hi / *lo < 100.0 * (1.0 - 1e-12)) invalid("zoom.eps_list", "must span at least two decades");
  }

  auto window = [](const std::optional<FitWindow>& w, const char* prefix) {
    if (!w) return;
    const std::string p(prefix);
    if (!std::isfinite(w->lo)) invalid("pdf." + p + "_lo", "must be set and finite");
    if (!std::isfinite(w->hi) || !(w->lo < w->hi)) invalid("pdf." + p + "_hi", "must be set and exceed the lower end");
  };
  window(pdf.middle_window, "middle");
  window(pdf.tail_window, "tail");
  if (pdf.min_tail_count < 1) invalid("pdf.min_tail_count", "must be >= 1");
}

RunConfig default_config(Command c) {
  RunConfig cfg;
  cfg.command = c;
  cfg.integrator.sample_interval = 0.0;
  return cfg;
}

RunConfig parse_config(std::string_view text, const RunConfig& base, std::string_view source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    parse_fail(source, e.line(), "", e.message());
  }

  const SourceLines lines = source_lines(text);
  auto line_of = [](const std::map<std::string, std::size_t>& m, const std::string& key) {
    const auto it = m.find(key);
    return it == m.end() ? std::size_t{0} : it->second;
  };
  const auto& table = setters();
  auto known_section = [&table](const std::string& section) {
    return std::any_of(table.begin(), table.end(), [&](const auto& kv) { return kv.first.rfind(section + ".", 0) == 0; });
  };
  RunConfig cfg = base;

  for (const auto& [section, body] : tree) {
    if (lines.sections.count(section) == 0)
      parse_fail(source, line_of(lines.keys, section), section, "keys must live inside a [section]");
    if (!known_section(section)) parse_fail(source, line_of(lines.sections, section), section, "unknown section");
    for (const auto& [key, value] : body) {
      const std::string field = section + "." + key;
      const auto it = table.find(field);
      if (it == table.end()) parse_fail(source, line_of(lines.keys, field), field, "unknown key");
      try {
        it->second(cfg, value.data());
      } catch (const BadValue& b) {
        parse_fail(source, line_of(lines.keys, field), field, b.what);
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const RunConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base, path.string());
}

int default_workers() {
  const char* env = std::getenv("ATOMWALK_WORKERS");
  if (env == nullptr || *env == '\0') return resolve_workers(0);
  try {
    const std::size_t w = to_size(env);
    if (w < 1 || w > 4096) throw BadValue{};
    return static_cast<int>(w);
  } catch (const BadValue&) {
    throw Error("config-parse-error",
                "ATOMWALK_WORKERS must be an integer between 1 and 4096, got '" + std::string(env) + "'");
  }
}

std::vector<double> parse_double_list(std::string_view text, std::string_view field) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    try {
      out.push_back(to_double(item));
    } catch (const BadValue& b) {
      throw Error("config-parse-error", std::string(field) + ": " + b.what);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace atomwalk
