#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "atomwalk/dynamics.hpp"

namespace atomwalk {

struct IntegratorSettings {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double max_step = 1.0;
  /// Largest tolerated drift of bloch_norm_sq (absolute) and of the energy
  /// (relative, see relative_energy_drift) before the run is abandoned.
  double invariant_abort_threshold = 1e-6;
  double t_max = 1e4;
  /// Output cadence for TrajectoryRecord::samples; 0 records no samples.
  double sample_interval = 0.0;
  bool record_nodes = true;
  /// Integrate the time-reversed field (tau runs from 0 down to -t_max).
  bool backward = false;

  /// Throws Error("invalid-integrator-settings").
  void validate() const;
};

/// Event localization tolerance in tau.
inline constexpr double kEventTolerance = 1e-9;

enum class EventKind { NodeCrossing, ExitCrossing, InvariantDrift, HorizonReached };

std::string_view to_string(EventKind kind);

struct Event {
  EventKind kind = EventKind::HorizonReached;
  double tau = 0.0;
  AtomState state;
};

struct Sample {
  double tau = 0.0;
  AtomState state;
};

struct IntegrationStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  double max_energy_drift = 0.0;
  double max_norm_drift = 0.0;
};

struct TrajectoryRecord {
  std::vector<Sample> samples;
  std::vector<Event> events;  // ordered along the direction of integration
  AtomState final_state;
  double final_tau = 0.0;
  EventKind termination = EventKind::HorizonReached;
  IntegrationStats stats;
};

/// |H - H0| / max(|H0|, 1e-3). The floor keeps the measure finite for
/// trajectories whose energy happens to be (near) zero.
double relative_energy_drift(double h, double h0);

/// Integrates the Bloch-Hamilton flow from s0 with the DOP853 pair.
///
/// Node crossings (cos x = 0) are localized on the continuous extension and
/// recorded when cfg.record_nodes is set. With stop_on_exit, integration ends
/// at the first tau > 0 where x crosses 0 from above with p < 0; a start at
/// x = 0 with p < 0 counts as an immediate exit at tau = 0. Conserved-quantity
/// drift beyond cfg.invariant_abort_threshold ends the run with termination
/// InvariantDrift. Throws Error("step-underflow") when the step collapses and
/// Error("invalid-initial-state") when s0 is off the Bloch sphere by more than
/// the abort threshold.
TrajectoryRecord integrate(const AtomState& s0, const ControlParams& c, const IntegratorSettings& cfg,
                           bool stop_on_exit);

struct TangentResult {
  TrajectoryRecord record;
  double log_growth = 0.0;  // ln(|t(t_max)| / |t0|), accumulated piecewise
  std::size_t renorm_count = 0;
  TangentVector final_tangent;  // unit length
};

/// Co-integrates the state with the tangent-linear system dt/dtau = J(s) t,
/// rescaling t to unit length every renorm_interval and summing ln|t|. The
/// final partial interval contributes its log as well. Runs to cfg.t_max.
TangentResult integrate_with_tangent(const AtomState& s0, const TangentVector& t0, const ControlParams& c,
                                     const IntegratorSettings& cfg, double renorm_interval = 1.0);

/// CSV with header "tau,x,p,u,v,z".
void write_samples_csv(std::ostream& os, const TrajectoryRecord& rec);
/// CSV with header "tau,kind,x,p,u,v,z".
void write_events_csv(std::ostream& os, const TrajectoryRecord& rec);

}  // namespace atomwalk
