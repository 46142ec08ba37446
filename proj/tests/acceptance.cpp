// Acceptance checks at full scale. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails. Pass criterion names to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "atomwalk/config.hpp"
#include "atomwalk/dynamics.hpp"
#include "atomwalk/error.hpp"
#include "atomwalk/integrator.hpp"
#include "atomwalk/lyapunov.hpp"
#include "atomwalk/run.hpp"
#include "atomwalk/scattering.hpp"
#include "atomwalk/statistics.hpp"

using namespace atomwalk;

namespace {

const ControlParams kChaotic{1e-3, 0.15, 0.01};

struct Verdict {
  bool pass = false;
  std::string detail;
};

int g_workers = 1;

std::string fmt(const char* f, auto... args) {
  char buf[2048];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict conservation() {
  IntegratorSettings s;
  s.t_max = 1e4;
  s.sample_interval = 1.0;
  const AtomState s0 = AtomState::ground(0.0, 10.0);
  const TrajectoryRecord r = integrate(s0, kChaotic, s, false);
  const double e0 = energy(s0, kChaotic);
  double de = 0.0, dn = 0.0;
  for (const auto& smp : r.samples) {
    de = std::max(de, std::abs(energy(smp.state, kChaotic) - e0) / std::abs(e0));
    dn = std::max(dn, std::abs(std::sqrt(bloch_norm_sq(smp.state)) - 1.0));
  }
  const bool ok = r.termination == EventKind::HorizonReached && r.final_tau == 1e4 && de <= 1e-8 && dn <= 1e-8;
  return {ok, fmt("tau=%g energy drift %.2e, norm drift %.2e over %zu samples (bound 1e-8)", r.final_tau, de, dn,
                  r.samples.size())};
}

Verdict resonance() {
  IntegratorSettings s;
  s.t_max = 1e4;
  const TrajectoryRecord r = integrate(AtomState::ground(0.0, 10.0), {1e-3, 0.0, 0.01}, s, true);
  ScanSpec spec;
  spec.lo = 0.0;
  spec.hi = 1.0;
  spec.n = 2;
  const Outcome o = exit_time(0.0, spec);
  const double rel = std::abs(r.final_tau - 2000.0) / 2000.0;
  const double dp = std::abs(r.final_state.p + 10.0);
  const double rel_scan = std::abs(o.T - 2000.0) / 2000.0;
  const bool ok = r.termination == EventKind::ExitCrossing && rel <= 1e-6 && dp <= 1e-6 &&
                  o.kind == OutcomeKind::ExitTime && rel_scan <= 1e-6;
  return {ok, fmt("T=%.10g (rel err %.1e), exit p=%.10g (err %.1e), exit_time T=%.10g", r.final_tau, rel,
                  r.final_state.p, dp, o.T)};
}

Verdict jacobian() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(-20.0, 20.0), mom(-30.0, 30.0), ang(0.0, 2.0 * M_PI), cz(-1.0, 1.0);
  std::normal_distribution<double> g;
  const double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double z = cz(rng), phi = ang(rng), rr = std::sqrt(1.0 - z * z);
    const AtomState s{pos(rng), mom(rng), rr * std::cos(phi), rr * std::sin(phi), z};
    const ControlParams c{1e-3, 2.0 * cz(rng), 0.5 * cz(rng)};
    TangentVector t;
    for (double& v : t.c) v = g(rng);
    StateArray plus = s.to_array(), minus = s.to_array();
    for (std::size_t i = 0; i < kStateDim; ++i) {
      plus[i] += h * t.c[i];
      minus[i] -= h * t.c[i];
    }
    const StateDerivative fp = rhs(AtomState::from_array(plus), c), fm = rhs(AtomState::from_array(minus), c);
    const StateArray fd{(fp.dx - fm.dx) / (2 * h), (fp.dp - fm.dp) / (2 * h), (fp.du - fm.du) / (2 * h),
                        (fp.dv - fm.dv) / (2 * h), (fp.dz - fm.dz) / (2 * h)};
    const TangentVector jt = jacobian_apply(s, t, c);
    double diff = 0.0;
    for (std::size_t i = 0; i < kStateDim; ++i) diff += (fd[i] - jt.c[i]) * (fd[i] - jt.c[i]);
    worst = std::max(worst, std::sqrt(diff) / jt.norm());
  }
  return {worst <= 1e-6, fmt("worst relative error %.2e over 100 random states (bound 1e-6)", worst)};
}

Verdict regimes() {
  const AtomState s0 = AtomState::ground(0.0, 10.0);
  const double horizon = 1e4;
  const PositiveThreshold th = calibrate_positive_threshold(s0, kChaotic, horizon, 1.0, 10, 1.0, {}, g_workers);
  const double l_chaotic = ftle(s0, kChaotic, horizon).lambda;
  const double l_regular = ftle(s0, {1e-3, 1.0, 0.01}, horizon).lambda;
  const double l_resonant = ftle(s0, {1e-3, 0.0, 0.01}, horizon).lambda;

  FtleMapSettings ms;
  ms.horizon = horizon;
  const FtleMap map = ftle_map(ms, g_workers);
  const PositiveRegion box = positive_region(map, th.value);
  const double dd = map.delta_axis.spacing(), dk = map.kappa_axis.spacing();
  const bool failed_cells = std::any_of(map.values.begin(), map.values.end(), [](const auto& v) { return !v; });
  const bool confined = !box.empty && box.delta_min > -0.5 - dd && box.delta_max < 0.5 + dd &&
                        box.kappa_min > -0.25 - dk && box.kappa_max < 0.6 + dk;
  const bool ok = l_chaotic > th.value && l_regular <= th.value && l_resonant <= th.value && confined && !failed_cells;
  return {ok, fmt("threshold %.3e; lambda(0.15)=%.3e lambda(1)=%.3e lambda(0)=%.3e; 11x11 positive box "
                  "delta [%g, %g] kappa [%g, %g] (%zu cells), allowed delta (%g, %g) kappa (%g, %g)",
                  th.value, l_chaotic, l_regular, l_resonant, box.delta_min, box.delta_max, box.kappa_min,
                  box.kappa_max, box.positive_cells, -0.5 - dd, 0.5 + dd, -0.25 - dk, 0.6 + dk)};
}

Verdict fractality() {
  ScanSpec chaotic;
  chaotic.lo = 0.1;
  chaotic.hi = 0.2;
  chaotic.n = 2048;
  const ScanSpec regular = chaotic.with_interval(0.9, 1.1);

  // Three scans are gated; one further magnification is computed and reported
  // for information only.
  const std::size_t gated = 3;
  ZoomOptions zo;
  zo.magnification = 50.0;
  zo.levels = gated + 1;
  zo.threshold = unresolved_threshold(scan(regular, g_workers));
  ZoomLadder ladder;
  std::optional<std::size_t> resolved_at;
  try {
    ladder = zoom(chaotic, zo, g_workers);
  } catch (const ZoomResolved& e) {
    ladder = e.ladder();
    resolved_at = e.level();
  }
  if (resolved_at && *resolved_at < gated) return {false, fmt("zoom resolved at level %zu", *resolved_at)};
  bool unresolved = true, increasing = true;
  std::ostringstream levels;
  for (std::size_t k = 0; k < ladder.summaries.size(); ++k) {
    const LevelSummary& s = ladder.summaries[k];
    if (k < gated) {
      unresolved = unresolved && s.unresolved_pairs > 0;
      if (k > 0) increasing = increasing && s.mean_exit_time > ladder.summaries[k - 1].mean_exit_time;
    }
    levels << (k ? "; " : "") << "L" << k << (k < gated ? "" : " (not gated)") << " [" << s.lo << ", " << s.hi
           << "] unresolved " << s.unresolved_pairs << " mean T " << s.mean_exit_time;
  }

  const UncertaintyOptions uo;
  const UncertaintyResult uc = uncertainty_exponent(chaotic, uo, g_workers);
  const UncertaintyResult ur = uncertainty_exponent(regular, uo, g_workers);
  const bool ok = unresolved && increasing && uc.exponent < 0.9 && uc.correlation >= 0.9 && ur.exponent >= 0.95;
  return {ok, fmt("threshold %.3g; %s; uncertainty exponent chaotic %.3f (r %.3f), regular %.3f (r %.3f)", zo.threshold,
                  levels.str().c_str(), uc.exponent, uc.correlation, ur.exponent, ur.correlation)};
}

Verdict pdf_tail() {
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> ex(3e-4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> se(100000), sp(100000);
  for (auto& t : se) t = ex(rng);
  for (auto& t : sp) t = 100.0 * std::pow(1.0 - u(rng), 1.0 / (1.0 - 2.5));
  const double syn_alpha = fit_exponential_middle(build_pdf(se, 0, {BinScale::Linear, 0}), default_middle_window(se)).parameter;
  const double syn_gamma = fit_powerlaw_tail(build_pdf(sp, 0, {BinScale::Log, 0}), default_tail_window(sp)).parameter;
  const bool synthetic_ok = std::abs(syn_alpha / -3e-4 - 1.0) <= 0.05 && std::abs(syn_gamma / -2.5 - 1.0) <= 0.05;

  ScanSpec spec = default_config(Command::Pdf).scan_spec();
  spec.n = 50250;
  const ScanResult ens = scan(spec, g_workers);
  std::vector<double> times;
  std::size_t timeouts = 0, failed = 0;
  for (const auto& s : ens.samples) {
    if (s.outcome.kind == OutcomeKind::ExitTime) times.push_back(s.outcome.T);
    if (s.outcome.kind == OutcomeKind::Timeout) ++timeouts;
    if (s.outcome.kind == OutcomeKind::Failed) ++failed;
  }
  const FitReport e =
      fit_exponential_middle(build_pdf(times, timeouts, {BinScale::Linear, 0}), default_middle_window(times));
  const FitReport p = fit_powerlaw_tail(build_pdf(times, timeouts, {BinScale::Log, 0}), default_tail_window(times));

  // Stability, reported only: the same fits on every other sample of the scan.
  std::vector<double> half;
  std::size_t half_timeouts = 0;
  for (std::size_t i = 0; i < ens.samples.size(); i += 2) {
    const auto& o = ens.samples[i].outcome;
    if (o.kind == OutcomeKind::ExitTime) half.push_back(o.T);
    if (o.kind == OutcomeKind::Timeout) ++half_timeouts;
  }
  const FitReport eh =
      fit_exponential_middle(build_pdf(half, half_timeouts, {BinScale::Linear, 0}), default_middle_window(half));
  const FitReport ph = fit_powerlaw_tail(build_pdf(half, half_timeouts, {BinScale::Log, 0}), default_tail_window(half));
  const bool ok = synthetic_ok && times.size() >= 50000 && p.parameter >= -3.5 && p.parameter <= -1.8 &&
                  e.parameter < 0.0 && -e.parameter >= 1e-5 && -e.parameter < 1e-3;
  return {ok, fmt("delta [%g, %g], %zu finite exit times, %zu timeouts, %zu failed; gamma %.3f +- %.3f over [%.0f, %.0f]"
                  " (%zu bins); alpha %.3e +- %.1e over [%.0f, %.0f]; synthetic alpha %.4e (true -3e-4), gamma %.4f "
                  "(true -2.5); half ensemble alpha %.3e, gamma %.3f (not gated)",
                  spec.lo, spec.hi, times.size(), timeouts, failed, p.parameter, p.parameter_stderr, p.window.lo,
                  p.window.hi, p.point_count, e.parameter, e.parameter_stderr, e.window.lo, e.window.hi, syn_alpha,
                  syn_gamma, eh.parameter, ph.parameter)};
}

std::vector<OutputFile> manifest_outputs(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  const auto j = nlohmann::json::parse(in);
  std::vector<OutputFile> out;
  for (const auto& f : j["outputs"]) out.push_back({f["file"], f["sha256"], f["bytes"]});
  return out;
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "atomwalk-acceptance";
  const int many = std::max(4, g_workers);
  std::size_t files = 0;
  std::string mismatch;
  for (Command cmd : {Command::Trajectory, Command::Bloch, Command::LyapunovMap, Command::Scan, Command::Zoom,
                      Command::Pdf}) {
    std::vector<OutputFile> outputs[2];
    for (int k = 0; k < 2; ++k) {
      RunConfig c = default_config(cmd);
      c.workers = k == 0 ? 1 : many;
      c.out_dir = root / (std::string(to_string(cmd)) + "-" + std::to_string(c.workers));
      fs::remove_all(c.out_dir);
      c.t_max = 2000.0;
      c.map.delta_axis = {-0.3, 0.3, 4};
      c.map.kappa_axis = {0.0, 0.3, 3};
      c.map.calibration_runs = 4;
      c.scan.n = cmd == Command::Pdf ? 1500 : 96;
      if (cmd == Command::Pdf) c.pdf.min_tail_count = 1;
      c.zoom.magnification = 5.0;
      c.zoom.levels = 2;
      if (cmd == Command::Pdf) c.t_max.reset();
      try {
        outputs[k] = run(c).outputs;
      } catch (const ZoomResolved&) {
        outputs[k] = manifest_outputs(c.out_dir);
      } catch (const Error& e) {
        return {false, std::string(to_string(cmd)) + " failed: " + e.code() + ": " + e.what()};
      }
    }
    if (outputs[0].size() != outputs[1].size() || outputs[0].empty()) mismatch += std::string(to_string(cmd)) + " ";
    for (std::size_t i = 0; i < std::min(outputs[0].size(), outputs[1].size()); ++i, ++files)
      if (outputs[0][i].name != outputs[1][i].name || outputs[0][i].sha256 != outputs[1][i].sha256)
        mismatch += std::string(to_string(cmd)) + "/" + outputs[0][i].name + " ";
  }
  fs::remove_all(root);
  return {mismatch.empty(), fmt("%zu data files from six commands compared at 1 vs %d workers%s%s", files, many,
                                mismatch.empty() ? "" : "; mismatched: ", mismatch.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"conservation", conservation}, {"resonance", resonance}, {"jacobian", jacobian},
      {"regimes", regimes},           {"fractality", fractality}, {"pdf-tail", pdf_tail},
      {"determinism", determinism}};
  std::vector<std::string> selected(argv + 1, argv + argc);
  try {
    g_workers = default_workers();
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const Error& e) {
      v = {false, "error " + e.code() + ": " + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
