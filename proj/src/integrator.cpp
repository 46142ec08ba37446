#include "atomwalk/integrator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "atomwalk/dop853.hpp"
#include "atomwalk/error.hpp"
#include "atomwalk/io.hpp"

namespace atomwalk {

void IntegratorSettings::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto fail = [](const char* field) {
    throw Error("invalid-integrator-settings", std::string(field) + " must be a positive finite number");
  };
  if (!positive(rel_tol)) fail("rel_tol");
  if (!positive(abs_tol)) fail("abs_tol");
  if (!positive(max_step)) fail("max_step");
  if (!positive(invariant_abort_threshold)) fail("invariant_abort_threshold");
  if (!positive(t_max)) fail("t_max");
  if (!std::isfinite(sample_interval) || sample_interval < 0.0)
    throw Error("invalid-integrator-settings", "sample_interval must be >= 0");
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::NodeCrossing: return "node_crossing";
    case EventKind::ExitCrossing: return "exit_crossing";
    case EventKind::InvariantDrift: return "invariant_drift";
    case EventKind::HorizonReached: return "horizon_reached";
  }
  return "unknown";
}

double relative_energy_drift(double h, double h0) { return std::abs(h - h0) / std::max(std::abs(h0), 1e-3); }

namespace {

constexpr double kPi = std::numbers::pi;

// Index of the last node at or below x; nodes sit at pi/2 + k pi.
double node_index(double x) { return std::floor((x - 0.5 * kPi) / kPi); }

// Shared stepping loop for the plain (N = 5) and tangent-augmented (N = 10)
// systems. Handles sampling, node/exit events and invariant monitoring; the
// caller supplies the rhs and an optional hook run after every accepted step.
template <std::size_t N, class Rhs>
class Driver {
 public:
  using Stepper = Dop853<N, Rhs>;
  using Vec = typename Stepper::Vec;

  Driver(Rhs rhs, const ControlParams& c, const IntegratorSettings& cfg)
      : stepper_(std::move(rhs), cfg.rel_tol, cfg.abs_tol, cfg.max_step), c_(c), cfg_(cfg) {
    dir_ = cfg.backward ? -1.0 : 1.0;
  }

  void start(const Vec& y0) {
    stepper_.reset(y0, 0.0, dir_);
    const AtomState s0 = state_of(y0);
    h0_ = energy(s0, c_);
    n0_ = bloch_norm_sq(s0);
    next_sample_ = 0;
    if (cfg_.sample_interval > 0.0) emit_samples_through(0.0, y0);
  }

  Stepper& stepper() { return stepper_; }
  TrajectoryRecord& record() { return rec_; }
  double direction() const { return dir_; }

  // One accepted step limited to `limit` (magnitude). Returns false when the
  // trajectory terminated inside this step.
  bool advance(double limit, bool stop_on_exit) {
    stepper_.step(limit);
    const double ta = stepper_.t_prev();
    const double tb = stepper_.t();
    const double xa = stepper_.y_prev()[0];
    const double xb = stepper_.y()[0];

    double t_exit = 0.0;
    bool exited = false;
    if (stop_on_exit && !cfg_.backward && xa > 0.0 && xb <= 0.0) {
      t_exit = locate(0.0, ta, tb);
      exited = stepper_.dense_component(1, t_exit) < 0.0;
    }
    const double t_cut = exited ? t_exit : tb;

    if (cfg_.record_nodes) record_nodes(xa, xb, ta, t_cut);
    if (cfg_.sample_interval > 0.0) emit_samples_in_step(t_cut);

    if (exited) {
      const Vec ye = stepper_.dense(t_exit);
      finish(EventKind::ExitCrossing, t_exit, ye);
      return false;
    }

    const AtomState s = state_of(stepper_.y());
    const double e_drift = relative_energy_drift(energy(s, c_), h0_);
    const double n_drift = std::abs(bloch_norm_sq(s) - n0_);
    rec_.stats.max_energy_drift = std::max(rec_.stats.max_energy_drift, e_drift);
    rec_.stats.max_norm_drift = std::max(rec_.stats.max_norm_drift, n_drift);
    if (!(e_drift <= cfg_.invariant_abort_threshold) || !(n_drift <= cfg_.invariant_abort_threshold)) {
      finish(EventKind::InvariantDrift, tb, stepper_.y());
      return false;
    }
    return true;
  }

  void finish(EventKind kind, double tau, const Vec& y) {
    const AtomState s = state_of(y);
    rec_.events.push_back({kind, tau, s});
    if (cfg_.sample_interval > 0.0 && (rec_.samples.empty() || dir_ * (tau - rec_.samples.back().tau) > 0.0))
      rec_.samples.push_back({tau, s});
    rec_.final_state = s;
    rec_.final_tau = tau;
    rec_.termination = kind;
    rec_.stats.accepted_steps = stepper_.accepted_steps();
    rec_.stats.rejected_steps = stepper_.rejected_steps();
    rec_.stats.rhs_evaluations = stepper_.rhs_evaluations();
  }

  static AtomState state_of(const Vec& y) { return {y[0], y[1], y[2], y[3], y[4]}; }

 private:
  // Bisection on the continuous extension for x(tau) = target, with the sign
  // change bracketed by [ta, tb].
  double locate(double target, double ta, double tb) {
    double fa = stepper_.y_prev()[0] - target;
    double lo = ta, hi = tb;
    for (int it = 0; it < 200 && std::abs(hi - lo) > 0.1 * kEventTolerance; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double fm = stepper_.dense_component(0, mid) - target;
      if (fm == 0.0) return mid;
      if ((fm > 0.0) == (fa > 0.0)) {
        lo = mid;
        fa = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  void record_nodes(double xa, double xb, double ta, double t_cut) {
    const double ka = node_index(xa);
    const double kb = node_index(xb);
    if (ka == kb) return;
    const double step = kb > ka ? 1.0 : -1.0;
    // Moving up, nodes ka+1..kb are crossed; moving down, ka..kb+1.
    double k = kb > ka ? ka + 1.0 : ka;
    const double k_end = kb > ka ? kb : kb + 1.0;
    for (;; k += step) {
      const double target = 0.5 * kPi + k * kPi;
      const double tn = locate(target, ta, stepper_.t());
      if (dir_ * (tn - t_cut) > 0.0) break;
      rec_.events.push_back({EventKind::NodeCrossing, tn, state_of(stepper_.dense(tn))});
      if (k == k_end) break;
    }
  }

  void emit_samples_through(double t, const Vec& y) {
    rec_.samples.push_back({t, state_of(y)});
    ++next_sample_;
  }

  void emit_samples_in_step(double t_cut) {
    while (true) {
      const double ts = dir_ * static_cast<double>(next_sample_) * cfg_.sample_interval;
      if (dir_ * (ts - t_cut) > 0.0) break;
      rec_.samples.push_back({ts, state_of(stepper_.dense(ts))});
      ++next_sample_;
    }
  }

  Stepper stepper_;
  ControlParams c_;
  IntegratorSettings cfg_;
  TrajectoryRecord rec_;
  double dir_ = 1.0;
  double h0_ = 0.0, n0_ = 1.0;
  std::size_t next_sample_ = 0;
};

void check_initial(const AtomState& s0, const IntegratorSettings& cfg) {
  const double n = bloch_norm_sq(s0);
  const bool finite = std::isfinite(s0.x) && std::isfinite(s0.p) && std::isfinite(n);
  if (!finite || std::abs(n - 1.0) > cfg.invariant_abort_threshold) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "initial state has Bloch norm^2 " << n << ", farther than " << cfg.invariant_abort_threshold
        << " from 1";
    throw Error("invalid-initial-state", msg.str());
  }
}

// Remaining horizon below which the run counts as having reached t_max.
double horizon_slack(double t_max) { return 64.0 * std::numeric_limits<double>::epsilon() * t_max; }

}  // namespace

TrajectoryRecord integrate(const AtomState& s0, const ControlParams& c, const IntegratorSettings& cfg,
                           bool stop_on_exit) {
  c.validate();
  cfg.validate();
  check_initial(s0, cfg);

  auto f = [c](const double* y, double* dy) { rhs_inplace(y, dy, c); };
  Driver<kStateDim, decltype(f)> drv(f, c, cfg);
  const StateArray y0 = s0.to_array();

  if (stop_on_exit && !cfg.backward && s0.x == 0.0 && s0.p < 0.0) {
    TrajectoryRecord rec;
    rec.events.push_back({EventKind::ExitCrossing, 0.0, s0});
    if (cfg.sample_interval > 0.0) rec.samples.push_back({0.0, s0});
    rec.final_state = s0;
    rec.final_tau = 0.0;
    rec.termination = EventKind::ExitCrossing;
    return rec;
  }

  drv.start(y0);
  auto& st = drv.stepper();
  while (true) {
    const double remaining = cfg.t_max - std::abs(st.t());
    if (remaining <= horizon_slack(cfg.t_max)) {
      drv.finish(EventKind::HorizonReached, st.t(), st.y());
      break;
    }
    if (!drv.advance(remaining, stop_on_exit)) break;
  }
  return std::move(drv.record());
}

TangentResult integrate_with_tangent(const AtomState& s0, const TangentVector& t0, const ControlParams& c,
                                     const IntegratorSettings& cfg, double renorm_interval) {
  c.validate();
  cfg.validate();
  check_initial(s0, cfg);
  const double n_t0 = t0.norm();
  if (!(n_t0 > 0.0) || !std::isfinite(n_t0)) throw Error("invalid-tangent", "initial tangent vector must be nonzero");
  if (!(renorm_interval > 0.0) || !std::isfinite(renorm_interval))
    throw Error("invalid-integrator-settings", "renorm_interval must be a positive finite number");

  constexpr std::size_t M = 2 * kStateDim;
  auto f = [c](const double* y, double* dy) { rhs_with_tangent_inplace(y, dy, c); };
  Driver<M, decltype(f)> drv(f, c, cfg);

  std::array<double, M> y0{};
  for (std::size_t i = 0; i < kStateDim; ++i) {
    y0[i] = s0.to_array()[i];
    y0[kStateDim + i] = t0.c[i] / n_t0;
  }
  drv.start(y0);
  auto& st = drv.stepper();

  TangentResult out;
  auto tangent_norm = [](const std::array<double, M>& y) {
    double acc = 0.0;
    for (std::size_t i = kStateDim; i < M; ++i) acc += y[i] * y[i];
    return std::sqrt(acc);
  };

  std::size_t next_renorm = 1;
  bool ended_early = false;
  while (true) {
    const double t_abs = std::abs(st.t());
    const double remaining = cfg.t_max - t_abs;
    if (remaining <= horizon_slack(cfg.t_max)) break;
    const double to_renorm = static_cast<double>(next_renorm) * renorm_interval - t_abs;
    if (!drv.advance(std::min(remaining, to_renorm), false)) {
      ended_early = true;
      break;
    }
    const double t_now = std::abs(st.t());
    if (static_cast<double>(next_renorm) * renorm_interval - t_now <= horizon_slack(cfg.t_max) &&
        cfg.t_max - t_now > horizon_slack(cfg.t_max)) {
      auto y = st.y();
      const double n = tangent_norm(y);
      out.log_growth += std::log(n);
      for (std::size_t i = kStateDim; i < M; ++i) y[i] /= n;
      st.replace_state(y);
      ++out.renorm_count;
      ++next_renorm;
    }
  }

  const auto& yf = st.y();
  const double nf = tangent_norm(yf);
  out.log_growth += std::log(nf);
  for (std::size_t i = 0; i < kStateDim; ++i) out.final_tangent.c[i] = yf[kStateDim + i] / nf;
  if (!ended_early) drv.finish(EventKind::HorizonReached, st.t(), st.y());
  out.record = std::move(drv.record());
  return out;
}

void write_samples_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << "tau,x,p,u,v,z\n";
  for (const auto& smp : rec.samples) {
    const auto& s = smp.state;
    os << format_double(smp.tau) << ',' << format_double(s.x) << ',' << format_double(s.p) << ','
       << format_double(s.u) << ',' << format_double(s.v) << ',' << format_double(s.z) << '\n';
  }
}

void write_events_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << "tau,kind,x,p,u,v,z\n";
  for (const auto& ev : rec.events) {
    const auto& s = ev.state;
    os << format_double(ev.tau) << ',' << to_string(ev.kind) << ',' << format_double(s.x) << ','
       << format_double(s.p) << ',' << format_double(s.u) << ',' << format_double(s.v) << ','
       << format_double(s.z) << '\n';
  }
}

}  // namespace atomwalk
