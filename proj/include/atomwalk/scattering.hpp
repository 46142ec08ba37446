#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atomwalk/dynamics.hpp"
#include "atomwalk/error.hpp"
#include "atomwalk/integrator.hpp"

namespace atomwalk {

enum class ScanAxis { Detuning, InitialPosition, InitialMomentum };

std::string_view to_string(ScanAxis axis);
/// Accepts "detuning"/"delta", "position"/"x0", "momentum"/"p0".
ScanAxis parse_scan_axis(std::string_view name);

/// Exit-time scattering scan settings. Integrator defaults differ from the
/// plain trajectory defaults: 2e5 horizon, no node bookkeeping.
struct ScanSpec {
  ScanAxis axis = ScanAxis::Detuning;
  double lo = 0.1;
  double hi = 0.2;
  std::size_t n = 512;
  ControlParams params;
  AtomState initial = AtomState::ground(0.0, 10.0);
  IntegratorSettings integrator = default_integrator();

  static IntegratorSettings default_integrator() {
    IntegratorSettings s;
    s.t_max = 2e5;
    s.record_nodes = false;
    return s;
  }

  /// Throws Error("invalid-scan-spec").
  void validate() const;
  /// i-th of n uniformly spaced axis values; the last one is exactly hi.
  double value_at(std::size_t i) const;
  /// Same spec restricted to [lo, hi] (other settings kept).
  ScanSpec with_interval(double new_lo, double new_hi) const;
};

enum class OutcomeKind { ExitTime, Timeout, ImmediateExit, Failed };

std::string_view to_string(OutcomeKind kind);

struct Outcome {
  OutcomeKind kind = OutcomeKind::Failed;
  /// Exit time for ExitTime, 0 for ImmediateExit, the horizon for Timeout,
  /// the abandonment time for Failed.
  double T = 0.0;
  std::string error;  // Failed only: "<code>: <message>"

  bool operator==(const Outcome&) const = default;
};

struct ScanSample {
  double axis_value = 0.0;
  Outcome outcome;
};

struct ScanResult {
  ScanSpec spec;
  std::vector<ScanSample> samples;
};

/// Exit time for `spec` with the scanned quantity set to
/// `axis_value`. Integrator errors are reported as a Failed outcome.
Outcome exit_time(double axis_value, const ScanSpec& spec);

/// OpenMP kernel; samples are assembled by index. `workers` < 1 uses every core.
ScanResult scan(const ScanSpec& spec, int workers);
/// Serial reference for scan.
ScanResult scan_serial(const ScanSpec& spec);

/// CSV "axis_value,outcome_kind,T".
void write_scan_csv(std::ostream& os, const ScanResult& r);

/// Value used when measuring variation: T for ExitTime/ImmediateExit, the
/// horizon for Timeout, nullopt for Failed.
std::optional<double> variation_value(const Outcome& o);

/// Ten times the median adjacent |Delta T| of a (regular-regime) scan: the
/// jump size above which an adjacent pair counts as unresolved.
double unresolved_threshold(const ScanResult& regular);

struct LevelSummary {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t unresolved_pairs = 0;
  double max_adjacent_jump = 0.0;
  double mean_exit_time = 0.0;  // over ExitTime outcomes
  std::size_t exit_count = 0;
};

LevelSummary summarize_level(const ScanResult& r, double threshold);

struct ZoomLadder {
  std::vector<ScanResult> levels;  // level 0 is the input scan itself
  std::vector<LevelSummary> summaries;
  double magnification = 50.0;
  double threshold = 0.0;
};

/// Raised by zoom when a level has no adjacent pair above the threshold. The
/// ladder up to and including the resolved level is attached.
class ZoomResolved : public Error {
 public:
  ZoomResolved(std::size_t level, ZoomLadder ladder);
  std::size_t level() const { return level_; }
  const ZoomLadder& ladder() const { return ladder_; }

 private:
  std::size_t level_;
  ZoomLadder ladder_;
};

struct ZoomOptions {
  double magnification = 50.0;
  std::size_t levels = 3;  // including level 0, the input interval
  /// Fixed center for every level; when empty each level is centered on the
  /// longest exit time of the previous level.
  std::optional<double> center;
  double threshold = 0.0;  // see unresolved_threshold
};

/// Successive magnifications of a scan. Each level spans 1/magnification of
/// the previous interval and lies inside it.
ZoomLadder zoom(const ScanSpec& spec, const ZoomOptions& opts, int workers);

/// Sub-interval of width (hi - lo) / magnification, inside [lo, hi], centered
/// on the sample with the longest exit time (timeouts count as the horizon,
/// failed samples are skipped).
std::pair<double, double> select_zoom_window(const ScanResult& r, double magnification);

void write_zoom_manifest_json(std::ostream& os, const ZoomLadder& ladder);

struct UncertaintyOptions {
  std::vector<double> epsilons{1e-7, 1e-6, 1e-5, 1e-4};
  /// Exit-time discrepancy that makes a point fully uncertain.
  double discrepancy = 1.0;
  /// Discrepancies below this are treated as numerical noise.
  double noise_floor = 1e-6;
  std::size_t min_uncertain = 100;
};

struct UncertaintyResult {
  double exponent = 0.0;
  double correlation = 0.0;
  std::vector<double> epsilons;
  std::vector<double> fractions;
  std::vector<std::size_t> uncertain_counts;
};

/// Uncertainty exponent from an outcome function sampled at `points`.
///
/// For each eps a point's discrepancy is 1 when the outcome category differs
/// at x - eps or x + eps, and otherwise min(1, max |T(x +- eps) - T(x)| /
/// discrepancy). f(eps) is the mean discrepancy; the exponent is the slope of
/// log f against log eps. A smooth function gives 1, a fractal one less.
/// Throws Error("insufficient-statistics") when fewer than min_uncertain
/// points have a discrepancy above the noise floor at the largest eps.
UncertaintyResult uncertainty_exponent(std::span<const double> points,
                                       const std::function<Outcome(double)>& outcome_at,
                                       const UncertaintyOptions& opts, int workers = 1);

/// Same, over the axis values of `spec` with exit_time as the outcome.
UncertaintyResult uncertainty_exponent(const ScanSpec& spec, const UncertaintyOptions& opts, int workers);

}  // namespace atomwalk
