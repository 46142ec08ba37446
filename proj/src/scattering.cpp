#include "atomwalk/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "atomwalk/io.hpp"
#include "atomwalk/parallel.hpp"
#include "atomwalk/statistics.hpp"

namespace atomwalk {

std::string_view to_string(ScanAxis axis) {
  switch (axis) {
    case ScanAxis::Detuning: return "detuning";
    case ScanAxis::InitialPosition: return "position";
    case ScanAxis::InitialMomentum: return "momentum";
  }
  return "unknown";
}

ScanAxis parse_scan_axis(std::string_view name) {
  if (name == "detuning" || name == "delta") return ScanAxis::Detuning;
  if (name == "position" || name == "x0") return ScanAxis::InitialPosition;
  if (name == "momentum" || name == "p0") return ScanAxis::InitialMomentum;
  throw Error("invalid-scan-spec", "unknown scan axis '" + std::string(name) + "'");
}

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::ExitTime: return "exit";
    case OutcomeKind::Timeout: return "timeout";
    case OutcomeKind::ImmediateExit: return "immediate";
    case OutcomeKind::Failed: return "failed";
  }
  return "unknown";
}

void ScanSpec::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw Error("invalid-scan-spec", "scan interval needs finite lo < hi");
  if (n < 2) throw Error("invalid-scan-spec", "scan needs n >= 2 samples");
  params.validate();
  integrator.validate();
}

double ScanSpec::value_at(std::size_t i) const {
  if (i + 1 >= n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

ScanSpec ScanSpec::with_interval(double new_lo, double new_hi) const {
  ScanSpec s = *this;
  s.lo = new_lo;
  s.hi = new_hi;
  return s;
}

Outcome exit_time(double axis_value, const ScanSpec& spec) {
  ControlParams c = spec.params;
  AtomState s0 = spec.initial;
  switch (spec.axis) {
    case ScanAxis::Detuning: c.delta = axis_value; break;
    case ScanAxis::InitialPosition: s0.x = axis_value; break;
    case ScanAxis::InitialMomentum: s0.p = axis_value; break;
  }
  IntegratorSettings cfg = spec.integrator;
  cfg.backward = false;
  cfg.sample_interval = 0.0;
  cfg.record_nodes = false;

  Outcome o;
  try {
    const TrajectoryRecord rec = integrate(s0, c, cfg, true);
    o.T = rec.final_tau;
    switch (rec.termination) {
      case EventKind::ExitCrossing:
        o.kind = rec.final_tau == 0.0 ? OutcomeKind::ImmediateExit : OutcomeKind::ExitTime;
        break;
      case EventKind::HorizonReached:
        o.kind = OutcomeKind::Timeout;
        o.T = cfg.t_max;
        break;
      case EventKind::InvariantDrift:
        o.kind = OutcomeKind::Failed;
        o.error = "invariant-drift-abort: conserved quantities drifted past the abort threshold";
        break;
      case EventKind::NodeCrossing:
        o.kind = OutcomeKind::Failed;
        o.error = "internal: unexpected termination";
        break;
    }
  } catch (const Error& e) {
    o.kind = OutcomeKind::Failed;
    o.T = 0.0;
    o.error = e.code() + ": " + e.what();
  }
  return o;
}

namespace {

template <class MapFn>
ScanResult scan_impl(const ScanSpec& spec, MapFn&& map_fn) {
  spec.validate();
  auto one = [&spec](std::size_t i) {
    const double a = spec.value_at(i);
    return ScanSample{a, exit_time(a, spec)};
  };
  ScanResult r;
  r.spec = spec;
  r.samples = map_fn(spec.n, one);
  return r;
}

}  // namespace

ScanResult scan(const ScanSpec& spec, int workers) {
  return scan_impl(spec, [workers](std::size_t n, auto& fn) { return parallel_indexed(n, workers, fn); });
}

ScanResult scan_serial(const ScanSpec& spec) {
  return scan_impl(spec, [](std::size_t n, auto& fn) { return serial_indexed(n, fn); });
}

void write_scan_csv(std::ostream& os, const ScanResult& r) {
  os << "axis_value,outcome_kind,T\n";
  for (const auto& s : r.samples)
    os << format_double(s.axis_value) << ',' << to_string(s.outcome.kind) << ',' << format_double(s.outcome.T) << '\n';
}

std::optional<double> variation_value(const Outcome& o) {
  if (o.kind == OutcomeKind::Failed) return std::nullopt;
  return o.T;
}

namespace {

// |Delta T| between samples i and i+1 (0 when either failed).
std::vector<double> adjacent_jumps(const ScanResult& r) {
  std::vector<double> jumps;
  if (r.samples.size() < 2) return jumps;
  jumps.reserve(r.samples.size() - 1);
  for (std::size_t i = 0; i + 1 < r.samples.size(); ++i) {
    const auto a = variation_value(r.samples[i].outcome);
    const auto b = variation_value(r.samples[i + 1].outcome);
    jumps.push_back(a && b ? std::abs(*b - *a) : 0.0);
  }
  return jumps;
}

}  // namespace

double unresolved_threshold(const ScanResult& regular) {
  std::vector<double> jumps = adjacent_jumps(regular);
  if (jumps.empty()) throw Error("invalid-scan-spec", "threshold calibration needs at least two samples");
  const auto mid = jumps.begin() + static_cast<std::ptrdiff_t>(jumps.size() / 2);
  std::nth_element(jumps.begin(), mid, jumps.end());
  double median = *mid;
  if (jumps.size() % 2 == 0) {
    const double lower = *std::max_element(jumps.begin(), mid);
    median = 0.5 * (median + lower);
  }
  return 10.0 * median;
}

LevelSummary summarize_level(const ScanResult& r, double threshold) {
  LevelSummary s;
  s.lo = r.spec.lo;
  s.hi = r.spec.hi;
  for (double j : adjacent_jumps(r)) {
    s.max_adjacent_jump = std::max(s.max_adjacent_jump, j);
    if (j > threshold) ++s.unresolved_pairs;
  }
  // Category changes between neighbours are unresolved regardless of |Delta T|.
  for (std::size_t i = 0; i + 1 < r.samples.size(); ++i) {
    const auto ka = r.samples[i].outcome.kind, kb = r.samples[i + 1].outcome.kind;
    const auto a = variation_value(r.samples[i].outcome), b = variation_value(r.samples[i + 1].outcome);
    if (ka != kb && a && b && !(std::abs(*b - *a) > threshold)) ++s.unresolved_pairs;
  }
  double sum = 0.0;
  for (const auto& smp : r.samples) {
    if (smp.outcome.kind != OutcomeKind::ExitTime) continue;
    sum += smp.outcome.T;
    ++s.exit_count;
  }
  s.mean_exit_time = s.exit_count > 0 ? sum / static_cast<double>(s.exit_count) : 0.0;
  return s;
}

std::pair<double, double> select_zoom_window(const ScanResult& r, double magnification) {
  const double lo = r.spec.lo, hi = r.spec.hi;
  const double width = (hi - lo) / magnification;
  // Longest-lived sample sits closest to the singular set; lowest index wins ties.
  std::optional<std::size_t> best;
  double best_t = 0.0;
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto v = variation_value(r.samples[i].outcome);
    if (!v) continue;
    if (!best || *v > best_t) {
      best = i;
      best_t = *v;
    }
  }
  double center = best ? r.samples[*best].axis_value : 0.5 * (lo + hi);
  center = std::clamp(center, lo + 0.5 * width, hi - 0.5 * width);
  return {center - 0.5 * width, center + 0.5 * width};
}

ZoomResolved::ZoomResolved(std::size_t level, ZoomLadder ladder)
    : Error("resolved-at-level-" + std::to_string(level),
            "exit-time structure resolved at zoom level " + std::to_string(level)),
      level_(level),
      ladder_(std::move(ladder)) {}

ZoomLadder zoom(const ScanSpec& spec, const ZoomOptions& opts, int workers) {
  spec.validate();
  if (!(opts.magnification > 1.0) || !std::isfinite(opts.magnification))
    throw Error("invalid-zoom", "magnification must be > 1");
  if (opts.levels < 1) throw Error("invalid-zoom", "zoom needs at least one level");
  if (opts.center && !(*opts.center >= spec.lo && *opts.center <= spec.hi))
    throw Error("invalid-zoom", "zoom center must lie inside the scan interval");
  if (!(opts.threshold >= 0.0)) throw Error("invalid-zoom", "unresolved threshold must be >= 0");

  ZoomLadder ladder;
  ladder.magnification = opts.magnification;
  ladder.threshold = opts.threshold;

  ScanSpec current = spec;
  for (std::size_t level = 0; level < opts.levels; ++level) {
    if (level > 0) {
      const ScanResult& prev = ladder.levels.back();
      const double width = (prev.spec.hi - prev.spec.lo) / opts.magnification;
      std::pair<double, double> win;
      if (opts.center) {
        const double c = std::clamp(*opts.center, prev.spec.lo + 0.5 * width, prev.spec.hi - 0.5 * width);
        win = {c - 0.5 * width, c + 0.5 * width};
      } else {
        win = select_zoom_window(prev, opts.magnification);
      }
      current = prev.spec.with_interval(win.first, win.second);
    }
    ladder.levels.push_back(scan(current, workers));
    ladder.summaries.push_back(summarize_level(ladder.levels.back(), opts.threshold));
    if (ladder.summaries.back().unresolved_pairs == 0) throw ZoomResolved(level, std::move(ladder));
  }
  return ladder;
}

void write_zoom_manifest_json(std::ostream& os, const ZoomLadder& ladder) {
  nlohmann::ordered_json j;
  j["magnification"] = ladder.magnification;
  j["unresolved_threshold"] = ladder.threshold;
  j["levels"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < ladder.levels.size(); ++i) {
    const auto& s = ladder.summaries[i];
    j["levels"].push_back({{"level", i},
                           {"file", "zoom_level_" + std::to_string(i) + ".csv"},
                           {"axis", to_string(ladder.levels[i].spec.axis)},
                           {"lo", s.lo},
                           {"hi", s.hi},
                           {"n", ladder.levels[i].spec.n},
                           {"unresolved_pairs", s.unresolved_pairs},
                           {"max_adjacent_jump", s.max_adjacent_jump},
                           {"mean_exit_time", s.mean_exit_time},
                           {"exit_count", s.exit_count}});
  }
  os << j.dump(2) << '\n';
}

UncertaintyResult uncertainty_exponent(std::span<const double> points,
                                       const std::function<Outcome(double)>& outcome_at,
                                       const UncertaintyOptions& opts, int workers) {
  const auto& eps = opts.epsilons;
  if (eps.size() < 4) throw Error("invalid-uncertainty", "need at least 4 epsilon values");
  for (double e : eps)
    if (!(e > 0.0) || !std::isfinite(e)) throw Error("invalid-uncertainty", "epsilon values must be positive");
  const auto [emin, emax] = std::minmax_element(eps.begin(), eps.end());
  if (*emax / *emin < 100.0 * (1.0 - 1e-12))
    throw Error("invalid-uncertainty", "epsilon values must span at least two decades");
  if (!(opts.discrepancy > 0.0)) throw Error("invalid-uncertainty", "discrepancy threshold must be positive");

  const std::size_t n = points.size();
  const std::size_t k = eps.size();
  // Work item layout: [0, n) base points, then for each eps the -eps and +eps
  // perturbations of every point.
  const std::size_t total = n * (1 + 2 * k);
  auto arg_of = [&](std::size_t idx) {
    if (idx < n) return points[idx];
    const std::size_t rest = idx - n;
    const std::size_t e = rest / (2 * n);
    const std::size_t within = rest % (2 * n);
    const double sign = within < n ? -1.0 : 1.0;
    return points[within % n] + sign * eps[e];
  };
  const std::vector<Outcome> out =
      parallel_indexed(total, workers, [&](std::size_t idx) { return outcome_at(arg_of(idx)); });

  auto discrepancy = [&](const Outcome& base, const Outcome& other) {
    if (base.kind != other.kind) return 1.0;
    const auto a = variation_value(base), b = variation_value(other);
    if (!a || !b) return 1.0;
    const double d = std::abs(*b - *a);
    if (d <= opts.noise_floor) return 0.0;
    return std::min(1.0, d / opts.discrepancy);
  };

  UncertaintyResult r;
  r.epsilons = eps;
  for (std::size_t e = 0; e < k; ++e) {
    double sum = 0.0;
    std::size_t uncertain = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Outcome& base = out[i];
      const Outcome& minus = out[n + e * 2 * n + i];
      const Outcome& plus = out[n + e * 2 * n + n + i];
      const double d = std::max(discrepancy(base, minus), discrepancy(base, plus));
      sum += d;
      if (d > 0.0) ++uncertain;
    }
    r.fractions.push_back(sum / static_cast<double>(n));
    r.uncertain_counts.push_back(uncertain);
  }

  const std::size_t largest = static_cast<std::size_t>(emax - eps.begin());
  if (r.uncertain_counts[largest] < opts.min_uncertain) {
    std::ostringstream msg;
    msg << "only " << r.uncertain_counts[largest] << " uncertain points at eps = " << *emax << " (need "
        << opts.min_uncertain << ")";
    throw Error("insufficient-statistics", msg.str());
  }

  std::vector<double> lx, ly;
  for (std::size_t e = 0; e < k; ++e) {
    if (!(r.fractions[e] > 0.0)) continue;
    lx.push_back(std::log(eps[e]));
    ly.push_back(std::log(r.fractions[e]));
  }
  if (lx.size() < 2) throw Error("insufficient-statistics", "fewer than two epsilon values with uncertain points");
  const LinearFit fit = fit_line(lx, ly);
  r.exponent = fit.slope;
  r.correlation = fit.correlation;
  return r;
}

UncertaintyResult uncertainty_exponent(const ScanSpec& spec, const UncertaintyOptions& opts, int workers) {
  spec.validate();
  std::vector<double> pts(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) pts[i] = spec.value_at(i);
  return uncertainty_exponent(pts, [&spec](double a) { return exit_time(a, spec); }, opts, workers);
}

}  // namespace atomwalk
