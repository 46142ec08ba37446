#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atomwalk/dynamics.hpp"
#include "atomwalk/integrator.hpp"
#include "atomwalk/lyapunov.hpp"
#include "atomwalk/scattering.hpp"
#include "atomwalk/statistics.hpp"

namespace atomwalk {

enum class Command { Trajectory, Bloch, LyapunovMap, Scan, Zoom, Pdf };

std::string_view to_string(Command c);
/// Throws Error("config-parse-error") for an unknown command name.
Command parse_command(std::string_view name);

struct TrajectoryOptions {
  double sample_interval = 1.0;
  bool stop_on_exit = false;
};

struct MapOptions {
  GridAxis delta_axis{-0.6, 0.6, 11};
  GridAxis kappa_axis{-0.3, 0.65, 11};
  double renorm_interval = 1.0;
  std::size_t calibration_runs = 10;
  double reference_delta = 1.0;
};

struct ScanOptions {
  ScanAxis axis = ScanAxis::Detuning;
  /// Unset ends pick the per-command default: [0.05, 0.5] (the chaotic
  /// detuning band) for pdf, [0.1, 0.2] otherwise.
  std::optional<double> lo;
  std::optional<double> hi;
  /// 0 picks the per-command default (512 for scan, 2048 for zoom, 50000
  /// for pdf).
  std::size_t n = 0;
};

struct ZoomRunOptions {
  double magnification = 50.0;
  /// Scans in the ladder, the input interval included.
  std::size_t levels = 3;
  std::optional<double> center;
  /// Regular-regime reference window that calibrates the unresolved threshold.
  double regular_lo = 0.9;
  double regular_hi = 1.1;
  bool uncertainty = true;
  std::vector<double> epsilons{1e-7, 1e-6, 1e-5, 1e-4};
};

struct PdfOptions {
  std::size_t linear_bins = 0;  // 0 = automatic
  std::size_t log_bins = 0;
  std::optional<FitWindow> middle_window;
  std::optional<FitWindow> tail_window;
  std::size_t min_tail_count = 10;
};

/// Everything one `atomwalk` invocation needs. Defaults reproduce the
/// reference configuration: omega_r = 1e-3, kappa = 0.01, delta = 0.15 and a
/// ground-state atom at x = 0 with p = 10.
struct RunConfig {
  Command command = Command::Trajectory;
  ControlParams params;
  AtomState initial = AtomState::ground(0.0, 10.0);
  IntegratorSettings integrator;
  /// Horizon; when unset the command default applies (1e4 for trajectory,
  /// bloch and lyapunov-map, 2e5 for the exit-time commands).
  std::optional<double> t_max;
  TrajectoryOptions trajectory;
  MapOptions map;
  ScanOptions scan;
  ZoomRunOptions zoom;
  PdfOptions pdf;
  int workers = 1;
  std::filesystem::path out_dir = "atomwalk-out";

  double effective_t_max() const;
  std::size_t effective_n() const;
  double effective_lo() const;
  double effective_hi() const;
  ScanSpec scan_spec() const;

  /// Throws Error("invalid-config") naming the offending field.
  void validate() const;
};

RunConfig default_config(Command c);

/// Parses INI text ([section] / key = value). Unknown sections or keys, bad
/// numbers and malformed lines throw Error("config-parse-error") with the
/// source name, line number and field. `base` supplies the values the file
/// does not mention.
RunConfig parse_config(std::string_view text, const RunConfig& base, std::string_view source = "<config>");

/// Reads and parses a config file; Error("io-error") when it cannot be read.
RunConfig load_config(const std::filesystem::path& path, const RunConfig& base);

/// ATOMWALK_WORKERS when set to a positive integer, otherwise every core.
/// Throws Error("config-parse-error") on a malformed value.
int default_workers();

/// Parses "a,b,c" into doubles; Error("config-parse-error") naming `field`.
std::vector<double> parse_double_list(std::string_view text, std::string_view field);

}  // namespace atomwalk
