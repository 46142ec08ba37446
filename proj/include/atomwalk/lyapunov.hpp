#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "atomwalk/dynamics.hpp"
#include "atomwalk/integrator.hpp"

namespace atomwalk {

struct FtleResult {
  double lambda = 0.0;  // per unit tau
  double horizon = 0.0;
  ControlParams params;
  AtomState initial_state;
  std::size_t renorm_count = 0;
  EventKind termination = EventKind::HorizonReached;
};

/// Unit vector with equal components, the default initial tangent direction.
TangentVector equal_tangent();

/// Maximal finite-time Lyapunov exponent by the single-vector variational
/// method: the tangent vector aligns with the dominant direction over the
/// horizon and lambda = (sum of ln renormalization factors) / horizon.
/// Requires horizon >= 100 * renorm_interval. A run abandoned for invariant
/// drift throws Error("invariant-drift-abort").
FtleResult ftle(const AtomState& s0, const ControlParams& c, double horizon, double renorm_interval = 1.0,
                IntegratorSettings cfg = {}, const TangentVector& t0 = equal_tangent());

/// Uniform grid lo, lo + step, ..., hi with n points (n == 1 gives {lo}).
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;

  double at(std::size_t i) const;
  double spacing() const { return n > 1 ? (hi - lo) / static_cast<double>(n - 1) : 0.0; }
  void validate(const char* name) const;
};

struct FtleMapSettings {
  GridAxis delta_axis{-0.6, 0.6, 11};
  GridAxis kappa_axis{-0.3, 0.65, 11};
  AtomState initial = AtomState::ground(0.0, 10.0);
  double omega_r = 1e-3;
  double horizon = 1e4;
  double renorm_interval = 1.0;
  IntegratorSettings integrator;
};

/// lambda over the (delta, kappa) plane. Cells whose integration fails hold
/// std::nullopt and a message in `errors` at the same index.
struct FtleMap {
  GridAxis delta_axis;
  GridAxis kappa_axis;
  std::vector<std::optional<double>> values;  // row-major: index i * kappa_axis.n + j
  std::vector<std::string> errors;

  const std::optional<double>& at(std::size_t i, std::size_t j) const { return values[i * kappa_axis.n + j]; }
};

/// OpenMP kernel over grid cells; `workers` < 1 uses every core.
FtleMap ftle_map(const FtleMapSettings& s, int workers);
/// Serial reference for ftle_map.
FtleMap ftle_map_serial(const FtleMapSettings& s);

/// Self-calibrated "positive lambda" threshold: mean + 3 sigma of lambda over
/// reference runs in the regular regime (delta = 1 by default). The runs
/// differ in initial momentum, p0 + 0.5 (k - (runs - 1) / 2).
struct PositiveThreshold {
  double mean = 0.0;
  double sigma = 0.0;
  double value = 0.0;
  std::vector<double> reference_lambdas;
};

PositiveThreshold calibrate_positive_threshold(const AtomState& s0, const ControlParams& c, double horizon,
                                               double renorm_interval = 1.0, std::size_t runs = 10,
                                               double reference_delta = 1.0, IntegratorSettings cfg = {},
                                               int workers = 1);

/// Bounding box of cells with lambda > threshold (empty when there are none).
struct PositiveRegion {
  bool empty = true;
  double delta_min = 0.0, delta_max = 0.0;
  double kappa_min = 0.0, kappa_max = 0.0;
  std::size_t positive_cells = 0;
};

PositiveRegion positive_region(const FtleMap& map, double threshold);

/// CSV "delta,kappa,lambda"; failed cells carry an empty lambda field.
void write_ftle_map_csv(std::ostream& os, const FtleMap& map);
/// JSON summary: grid axes, horizon, threshold, positive-region box and the
/// failing cells with their errors.
std::string ftle_map_summary_json(const FtleMap& map, const FtleMapSettings& s, const PositiveThreshold& threshold);

}  // namespace atomwalk
