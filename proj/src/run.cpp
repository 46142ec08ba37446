#include "atomwalk/run.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "json.hpp"

#include "atomwalk/error.hpp"
#include "atomwalk/io.hpp"

#ifndef ATOMWALK_VERSION
#define ATOMWALK_VERSION "0.0.0"
#endif

namespace atomwalk {

using nlohmann::ordered_json;

namespace {

std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json state_json(const AtomState& s) {
  return {{"x", s.x}, {"p", s.p}, {"u", s.u}, {"v", s.v}, {"z", s.z}};
}

ordered_json window_json(const std::optional<FitWindow>& w) {
  if (!w) return nullptr;
  return {w->lo, w->hi};
}

ordered_json uncertainty_json(const UncertaintyResult& r) {
  return {{"exponent", r.exponent},
          {"correlation", r.correlation},
          {"epsilons", r.epsilons},
          {"fractions", r.fractions},
          {"uncertain_counts", r.uncertain_counts}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Writes data files and keeps the inventory for the manifest.
class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void emit(const std::string& name, const std::string& content) {
    write_text_file(dir_ / name, content);
    files_.push_back({name, sha256_hex(content), content.size()});
  }

  template <class Writer>
  void emit_stream(const std::string& name, Writer&& w) {
    std::ostringstream os;
    w(os);
    emit(name, os.str());
  }

  std::vector<OutputFile>& files() { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<OutputFile> files_;
};

ordered_json record_summary(const TrajectoryRecord& rec, const RunConfig& cfg) {
  ordered_json j;
  j["termination"] = to_string(rec.termination);
  j["final_tau"] = rec.final_tau;
  j["final_state"] = state_json(rec.final_state);
  j["initial_energy"] = energy(cfg.initial, cfg.params);
  j["final_energy"] = energy(rec.final_state, cfg.params);
  j["max_relative_energy_drift"] = rec.stats.max_energy_drift;
  j["max_bloch_norm_drift"] = rec.stats.max_norm_drift;
  j["accepted_steps"] = rec.stats.accepted_steps;
  j["rejected_steps"] = rec.stats.rejected_steps;
  j["rhs_evaluations"] = rec.stats.rhs_evaluations;
  std::size_t nodes = 0;
  for (const auto& e : rec.events) nodes += e.kind == EventKind::NodeCrossing ? 1 : 0;
  j["node_crossings"] = nodes;
  return j;
}

TrajectoryRecord run_integration(const RunConfig& cfg) {
  IntegratorSettings s = cfg.integrator;
  s.t_max = cfg.effective_t_max();
  s.sample_interval = cfg.trajectory.sample_interval;
  s.record_nodes = true;
  s.backward = false;
  return integrate(cfg.initial, cfg.params, s, cfg.trajectory.stop_on_exit);
}

void run_trajectory(const RunConfig& cfg, Outputs& out) {
  const TrajectoryRecord rec = run_integration(cfg);
  out.emit_stream("trajectory.csv", [&](std::ostream& os) { write_samples_csv(os, rec); });
  out.emit_stream("events.csv", [&](std::ostream& os) { write_events_csv(os, rec); });
  out.emit("trajectory_summary.json", dump(record_summary(rec, cfg)));
}

void run_bloch(const RunConfig& cfg, Outputs& out) {
  const TrajectoryRecord rec = run_integration(cfg);
  out.emit_stream("bloch.csv", [&](std::ostream& os) {
    os << "tau,u,v,z,norm_sq\n";
    for (const auto& s : rec.samples)
      os << format_double(s.tau) << ',' << format_double(s.state.u) << ',' << format_double(s.state.v) << ','
         << format_double(s.state.z) << ',' << format_double(bloch_norm_sq(s.state)) << '\n';
  });
  out.emit("bloch_summary.json", dump(record_summary(rec, cfg)));
}

void run_lyapunov_map(const RunConfig& cfg, Outputs& out) {
  FtleMapSettings s;
  s.delta_axis = cfg.map.delta_axis;
  s.kappa_axis = cfg.map.kappa_axis;
  s.initial = cfg.initial;
  s.omega_r = cfg.params.omega_r;
  s.horizon = cfg.effective_t_max();
  s.renorm_interval = cfg.map.renorm_interval;
  s.integrator = cfg.integrator;

  const FtleMap map = ftle_map(s, cfg.workers);
  const PositiveThreshold th =
      calibrate_positive_threshold(cfg.initial, cfg.params, s.horizon, s.renorm_interval, cfg.map.calibration_runs,
                                   cfg.map.reference_delta, cfg.integrator, cfg.workers);
  out.emit_stream("ftle_map.csv", [&](std::ostream& os) { write_ftle_map_csv(os, map); });
  out.emit("ftle_summary.json", ftle_map_summary_json(map, s, th));
}

ordered_json scan_summary(const ScanResult& r) {
  ordered_json j;
  j["axis"] = to_string(r.spec.axis);
  j["lo"] = r.spec.lo;
  j["hi"] = r.spec.hi;
  j["n"] = r.spec.n;
  j["t_max"] = r.spec.integrator.t_max;
  std::size_t counts[4] = {0, 0, 0, 0};
  ordered_json failures = ordered_json::array();
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& o = r.samples[i].outcome;
    ++counts[static_cast<std::size_t>(o.kind)];
    if (o.kind == OutcomeKind::Failed)
      failures.push_back({{"index", i}, {"axis_value", r.samples[i].axis_value}, {"error", o.error}});
  }
  j["counts"] = {{"exit", counts[0]}, {"timeout", counts[1]}, {"immediate", counts[2]}, {"failed", counts[3]}};
  j["failures"] = std::move(failures);
  return j;
}

void run_scan(const RunConfig& cfg, Outputs& out) {
  const ScanResult r = scan(cfg.scan_spec(), cfg.workers);
  out.emit_stream("scan.csv", [&](std::ostream& os) { write_scan_csv(os, r); });
  out.emit("scan_summary.json", dump(scan_summary(r)));
}

void run_zoom(const RunConfig& cfg, Outputs& out) {
  const ScanSpec spec = cfg.scan_spec();
  const ScanResult regular = scan(spec.with_interval(cfg.zoom.regular_lo, cfg.zoom.regular_hi), cfg.workers);
  out.emit_stream("regular_reference.csv", [&](std::ostream& os) { write_scan_csv(os, regular); });

  ZoomOptions opts;
  opts.magnification = cfg.zoom.magnification;
  opts.levels = cfg.zoom.levels;
  opts.center = cfg.zoom.center;
  opts.threshold = unresolved_threshold(regular);

  ZoomLadder ladder;
  std::optional<ZoomResolved> resolved;
  try {
    ladder = zoom(spec, opts, cfg.workers);
  } catch (const ZoomResolved& e) {
    resolved = e;
    ladder = e.ladder();
  }
  for (std::size_t i = 0; i < ladder.levels.size(); ++i)
    out.emit_stream("zoom_level_" + std::to_string(i) + ".csv",
                    [&](std::ostream& os) { write_scan_csv(os, ladder.levels[i]); });
  out.emit_stream("zoom_manifest.json", [&](std::ostream& os) { write_zoom_manifest_json(os, ladder); });
  if (resolved) throw *resolved;

  if (cfg.zoom.uncertainty) {
    UncertaintyOptions uo;
    uo.epsilons = cfg.zoom.epsilons;
    ordered_json j;
    auto window = [&](const char* key, const ScanSpec& s) {
      try {
        j[key] = uncertainty_json(uncertainty_exponent(s, uo, cfg.workers));
      } catch (const Error& e) {
        j[key] = {{"error", e.code() + ": " + e.what()}};
      }
      j[key]["lo"] = s.lo;
      j[key]["hi"] = s.hi;
    };
    window("scan_window", spec);
    window("regular_window", regular.spec);
    out.emit("uncertainty.json", dump(j));
  }
}

void run_pdf(const RunConfig& cfg, Outputs& out) {
  const ScanResult ens = scan(cfg.scan_spec(), cfg.workers);
  out.emit_stream("ensemble.csv", [&](std::ostream& os) { write_scan_csv(os, ens); });
  ordered_json summary = scan_summary(ens);

  std::vector<double> times;
  std::size_t timeouts = 0;
  for (const auto& s : ens.samples) {
    if (s.outcome.kind == OutcomeKind::ExitTime) times.push_back(s.outcome.T);
    if (s.outcome.kind == OutcomeKind::Timeout) ++timeouts;
  }
  summary["finite_exit_times"] = times.size();
  out.emit("pdf_summary.json", dump(summary));

  const ExitTimePDF linear = build_pdf(times, timeouts, {BinScale::Linear, cfg.pdf.linear_bins});
  const ExitTimePDF logarithmic = build_pdf(times, timeouts, {BinScale::Log, cfg.pdf.log_bins});
  out.emit_stream("pdf_linear.csv", [&](std::ostream& os) { write_pdf_csv(os, linear); });
  out.emit_stream("pdf_log.csv", [&](std::ostream& os) { write_pdf_csv(os, logarithmic); });

  const FitWindow middle = cfg.pdf.middle_window.value_or(default_middle_window(times));
  const FitWindow tail = cfg.pdf.tail_window.value_or(default_tail_window(times));
  out.emit("fit_exponential.json", fit_report_json(fit_exponential_middle(linear, middle)));
  out.emit("fit_powerlaw.json", fit_report_json(fit_powerlaw_tail(logarithmic, tail, cfg.pdf.min_tail_count)));
}

}  // namespace

std::string artifact_version() { return ATOMWALK_VERSION; }

std::string config_json(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = to_string(cfg.command);
  j["params"] = {{"omega_r", cfg.params.omega_r}, {"delta", cfg.params.delta}, {"kappa", cfg.params.kappa}};
  j["initial"] = state_json(cfg.initial);
  j["integrator"] = {{"rel_tol", cfg.integrator.rel_tol},
                     {"abs_tol", cfg.integrator.abs_tol},
                     {"max_step", cfg.integrator.max_step},
                     {"invariant_abort_threshold", cfg.integrator.invariant_abort_threshold},
                     {"t_max", cfg.effective_t_max()}};
  j["trajectory"] = {{"sample_interval", cfg.trajectory.sample_interval},
                     {"stop_on_exit", cfg.trajectory.stop_on_exit}};
  j["lyapunov"] = {{"delta", {cfg.map.delta_axis.lo, cfg.map.delta_axis.hi, cfg.map.delta_axis.n}},
                   {"kappa", {cfg.map.kappa_axis.lo, cfg.map.kappa_axis.hi, cfg.map.kappa_axis.n}},
                   {"renorm_interval", cfg.map.renorm_interval},
                   {"calibration_runs", cfg.map.calibration_runs},
                   {"reference_delta", cfg.map.reference_delta}};
  j["scan"] = {{"axis", to_string(cfg.scan.axis)}, {"lo", cfg.effective_lo()}, {"hi", cfg.effective_hi()}, {"n", cfg.effective_n()}};
  j["zoom"] = {{"magnification", cfg.zoom.magnification},
               {"levels", cfg.zoom.levels},
               {"center", cfg.zoom.center ? ordered_json(*cfg.zoom.center) : ordered_json(nullptr)},
               {"regular", {cfg.zoom.regular_lo, cfg.zoom.regular_hi}},
               {"uncertainty", cfg.zoom.uncertainty},
               {"eps_list", cfg.zoom.epsilons}};
  j["pdf"] = {{"linear_bins", cfg.pdf.linear_bins},
              {"log_bins", cfg.pdf.log_bins},
              {"middle_window", window_json(cfg.pdf.middle_window)},
              {"tail_window", window_json(cfg.pdf.tail_window)},
              {"min_tail_count", cfg.pdf.min_tail_count}};
  j["workers"] = cfg.workers;
  j["out"] = cfg.out_dir.string();
  return j.dump(2);
}

std::string manifest_json(const RunManifest& m) {
  ordered_json j;
  j["version"] = m.version;
  j["config"] = ordered_json::parse(m.config_json);
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["wall_seconds"] = m.wall_seconds;
  j["outputs"] = ordered_json::array();
  for (const auto& f : m.outputs) j["outputs"].push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return dump(j);
}

RunManifest run(const RunConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw Error("io-error", "cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());

  RunManifest m;
  m.config_json = config_json(cfg);
  m.version = artifact_version();
  const auto wall_start = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  m.started_at = utc_timestamp(wall_start);

  Outputs out(cfg.out_dir);
  auto finish = [&] {
    m.finished_at = utc_timestamp(std::chrono::system_clock::now());
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.outputs = out.files();
    write_text_file(cfg.out_dir / "manifest.json", manifest_json(m));
  };

  try {
    switch (cfg.command) {
      case Command::Trajectory: run_trajectory(cfg, out); break;
      case Command::Bloch: run_bloch(cfg, out); break;
      case Command::LyapunovMap: run_lyapunov_map(cfg, out); break;
      case Command::Scan: run_scan(cfg, out); break;
      case Command::Zoom: run_zoom(cfg, out); break;
      case Command::Pdf: run_pdf(cfg, out); break;
    }
  } catch (const Error&) {
    // Keep the inventory of whatever was written before the failure.
    finish();
    throw;
  }
  finish();
  return m;
}

}  // namespace atomwalk
