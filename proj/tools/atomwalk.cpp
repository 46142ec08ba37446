// atomwalk command-line driver. Flags override the config file, which
// overrides the built-in defaults.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "atomwalk/config.hpp"
#include "atomwalk/error.hpp"
#include "atomwalk/run.hpp"

namespace {

int fail(const std::string& code, const std::string& message, int status = 1) {
  nlohmann::ordered_json j{{"error", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
  return status;
}

// "NDxNK" sets both grid sizes; "dlo,dhi,nd,klo,khi,nk" sets everything.
void apply_grid(atomwalk::RunConfig& cfg, const std::string& text) {
  using atomwalk::Error;
  const auto x = text.find('x');
  if (x != std::string::npos && text.find(',') == std::string::npos) {
    const auto n = atomwalk::parse_double_list(text.substr(0, x) + "," + text.substr(x + 1), "--grid");
    if (n.size() != 2 || n[0] < 1 || n[1] < 1 || n[0] != static_cast<double>(static_cast<std::size_t>(n[0])) ||
        n[1] != static_cast<double>(static_cast<std::size_t>(n[1])))
      throw Error("config-parse-error", "--grid expects NDxNK with positive integers");
    cfg.map.delta_axis.n = static_cast<std::size_t>(n[0]);
    cfg.map.kappa_axis.n = static_cast<std::size_t>(n[1]);
    return;
  }
  const auto v = atomwalk::parse_double_list(text, "--grid");
  if (v.size() != 6 || v[2] < 1 || v[5] < 1 || v[2] != static_cast<double>(static_cast<std::size_t>(v[2])) ||
      v[5] != static_cast<double>(static_cast<std::size_t>(v[5])))
    throw Error("config-parse-error", "--grid expects NDxNK or dlo,dhi,nd,klo,khi,nk");
  cfg.map.delta_axis = {v[0], v[1], static_cast<std::size_t>(v[2])};
  cfg.map.kappa_axis = {v[3], v[4], static_cast<std::size_t>(v[5])};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical two-level atom in a tilted optical lattice: trajectories, Lyapunov maps, "
               "exit-time scans, zooms and exit-time statistics."};
  app.set_version_flag("--version", atomwalk::artifact_version());

  std::string command;
  std::optional<std::string> config_path, out_dir, grid, interval, eps_list, axis;
  std::optional<double> delta, kappa, omega_r, p0, x0, t_max, mag, center, sample_interval;
  std::optional<std::size_t> n, levels, bins, log_bins;
  std::optional<int> workers;
  bool stop_on_exit = false, no_uncertainty = false;

  app.add_option("command", command, "trajectory | bloch | lyapunov-map | scan | zoom | pdf")
      ->required()
      ->check(CLI::IsMember({"trajectory", "bloch", "lyapunov-map", "scan", "zoom", "pdf"}));
  app.add_option("--config", config_path, "INI config file");
  app.add_option("--delta", delta, "detuning");
  app.add_option("--kappa", kappa, "external force");
  app.add_option("--omega-r", omega_r, "recoil frequency (> 0)");
  app.add_option("--p0", p0, "initial momentum");
  app.add_option("--x0", x0, "initial position");
  app.add_option("--t-max", t_max, "horizon (FTLE horizon for lyapunov-map)");
  app.add_option("--workers", workers, "worker threads (default: ATOMWALK_WORKERS or all cores)")
      ->check(CLI::Range(1, 4096));
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--sample-interval", sample_interval, "trajectory/bloch: output cadence in tau");
  app.add_flag("--stop-on-exit", stop_on_exit, "trajectory/bloch: stop at the first exit crossing");
  app.add_option("--grid", grid, "lyapunov-map: NDxNK or dlo,dhi,nd,klo,khi,nk");
  app.add_option("--axis", axis, "scan/zoom/pdf: detuning | position | momentum");
  app.add_option("--interval", interval, "scan/zoom/pdf: lo,hi");
  app.add_option("--n", n, "scan/zoom/pdf: samples per scan");
  app.add_option("--mag", mag, "zoom: magnification per level");
  app.add_option("--levels", levels, "zoom: number of levels including level 0");
  app.add_option("--center", center, "zoom: fixed center instead of automatic selection");
  app.add_option("--eps-list", eps_list, "zoom: comma-separated uncertainty offsets");
  app.add_flag("--no-uncertainty", no_uncertainty, "zoom: skip the uncertainty exponent");
  app.add_option("--bins", bins, "pdf: linear bins (0 = automatic)");
  app.add_option("--log-bins", log_bins, "pdf: logarithmic bins (0 = automatic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage-error", e.what(), 2);
  }

  try {
    atomwalk::RunConfig cfg = atomwalk::default_config(atomwalk::parse_command(command));
    cfg.workers = 0;  // unset marker; resolved after file and flags
    if (config_path) cfg = atomwalk::load_config(*config_path, cfg);

    if (delta) cfg.params.delta = *delta;
    if (kappa) cfg.params.kappa = *kappa;
    if (omega_r) cfg.params.omega_r = *omega_r;
    if (p0) cfg.initial.p = *p0;
    if (x0) cfg.initial.x = *x0;
    if (t_max) cfg.t_max = *t_max;
    if (workers) cfg.workers = *workers;
    if (out_dir) cfg.out_dir = *out_dir;
    if (sample_interval) cfg.trajectory.sample_interval = *sample_interval;
    if (stop_on_exit) cfg.trajectory.stop_on_exit = true;
    if (grid) apply_grid(cfg, *grid);
    if (axis) cfg.scan.axis = atomwalk::parse_scan_axis(*axis);
    if (interval) {
      const auto v = atomwalk::parse_double_list(*interval, "--interval");
      if (v.size() != 2) throw atomwalk::Error("config-parse-error", "--interval expects lo,hi");
      cfg.scan.lo = v[0];
      cfg.scan.hi = v[1];
    }
    if (n) cfg.scan.n = *n;
    if (mag) cfg.zoom.magnification = *mag;
    if (levels) cfg.zoom.levels = *levels;
    if (center) cfg.zoom.center = *center;
    if (eps_list) cfg.zoom.epsilons = atomwalk::parse_double_list(*eps_list, "--eps-list");
    if (no_uncertainty) cfg.zoom.uncertainty = false;
    if (bins) cfg.pdf.linear_bins = *bins;
    if (log_bins) cfg.pdf.log_bins = *log_bins;
    if (cfg.workers == 0) cfg.workers = atomwalk::default_workers();

    const atomwalk::RunManifest m = atomwalk::run(cfg);
    std::cout << "wrote " << m.outputs.size() << " data files and manifest.json to " << cfg.out_dir.string() << " in "
              << m.wall_seconds << " s\n";
    return 0;
  } catch (const atomwalk::Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail("internal-error", e.what());
  }
}
