#include "atomwalk/lyapunov.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "atomwalk/error.hpp"
#include "atomwalk/io.hpp"
#include "atomwalk/parallel.hpp"

namespace atomwalk {

TangentVector equal_tangent() {
  TangentVector t;
  t.c.fill(1.0 / std::sqrt(static_cast<double>(kStateDim)));
  return t;
}

FtleResult ftle(const AtomState& s0, const ControlParams& c, double horizon, double renorm_interval,
                IntegratorSettings cfg, const TangentVector& t0) {
  if (!(renorm_interval > 0.0) || !(horizon >= 100.0 * renorm_interval) || !std::isfinite(horizon)) {
    std::ostringstream msg;
    msg << "horizon " << horizon << " must be at least 100 renormalization intervals (" << renorm_interval << ")";
    throw Error("invalid-horizon", msg.str());
  }
  cfg.t_max = horizon;
  cfg.record_nodes = false;
  cfg.sample_interval = 0.0;
  cfg.backward = false;
  const TangentResult tr = integrate_with_tangent(s0, t0, c, cfg, renorm_interval);
  if (tr.record.termination == EventKind::InvariantDrift) {
    std::ostringstream msg;
    msg << "conserved quantities drifted past " << cfg.invariant_abort_threshold << " at tau = " << tr.record.final_tau
        << " (delta = " << c.delta << ", kappa = " << c.kappa << ")";
    throw Error("invariant-drift-abort", msg.str());
  }

  FtleResult out;
  out.lambda = tr.log_growth / horizon;
  out.horizon = horizon;
  out.params = c;
  out.initial_state = s0;
  out.renorm_count = tr.renorm_count;
  out.termination = tr.record.termination;
  return out;
}

double GridAxis::at(std::size_t i) const {
  if (n <= 1) return lo;
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

void GridAxis::validate(const char* name) const {
  if (n < 1 || !std::isfinite(lo) || !std::isfinite(hi) || (n > 1 && !(lo < hi)))
    throw Error("invalid-grid", std::string(name) + " grid needs n >= 1 and lo < hi");
}

namespace {

struct CellOutcome {
  std::optional<double> lambda;
  std::string error;
};

template <class MapFn>
FtleMap ftle_map_impl(const FtleMapSettings& s, MapFn&& map_fn) {
  s.delta_axis.validate("delta");
  s.kappa_axis.validate("kappa");
  const std::size_t nk = s.kappa_axis.n;
  const std::size_t cells = s.delta_axis.n * nk;

  auto cell = [&](std::size_t idx) {
    ControlParams c;
    c.omega_r = s.omega_r;
    c.delta = s.delta_axis.at(idx / nk);
    c.kappa = s.kappa_axis.at(idx % nk);
    CellOutcome o;
    try {
      o.lambda = ftle(s.initial, c, s.horizon, s.renorm_interval, s.integrator).lambda;
    } catch (const Error& e) {
      o.error = e.code() + ": " + e.what();
    }
    return o;
  };
  std::vector<CellOutcome> results = map_fn(cells, cell);

  FtleMap m;
  m.delta_axis = s.delta_axis;
  m.kappa_axis = s.kappa_axis;
  m.values.reserve(cells);
  m.errors.reserve(cells);
  for (auto& r : results) {
    m.values.push_back(r.lambda);
    m.errors.push_back(std::move(r.error));
  }
  return m;
}

}  // namespace

FtleMap ftle_map(const FtleMapSettings& s, int workers) {
  return ftle_map_impl(s, [workers](std::size_t n, auto& fn) { return parallel_indexed(n, workers, fn); });
}

FtleMap ftle_map_serial(const FtleMapSettings& s) {
  return ftle_map_impl(s, [](std::size_t n, auto& fn) { return serial_indexed(n, fn); });
}

PositiveThreshold calibrate_positive_threshold(const AtomState& s0, const ControlParams& c, double horizon,
                                               double renorm_interval, std::size_t runs, double reference_delta,
                                               IntegratorSettings cfg, int workers) {
  if (runs < 2) throw Error("invalid-calibration", "threshold calibration needs at least 2 reference runs");
  ControlParams ref = c;
  ref.delta = reference_delta;
  const double mid = 0.5 * static_cast<double>(runs - 1);

  PositiveThreshold th;
  th.reference_lambdas = parallel_indexed(runs, workers, [&](std::size_t k) {
    AtomState s = s0;
    s.p = s0.p + 0.5 * (static_cast<double>(k) - mid);
    return ftle(s, ref, horizon, renorm_interval, cfg).lambda;
  });
  const double n = static_cast<double>(runs);
  th.mean = std::accumulate(th.reference_lambdas.begin(), th.reference_lambdas.end(), 0.0) / n;
  double ss = 0.0;
  for (double l : th.reference_lambdas) ss += (l - th.mean) * (l - th.mean);
  th.sigma = std::sqrt(ss / (n - 1.0));
  th.value = th.mean + 3.0 * th.sigma;
  return th;
}

PositiveRegion positive_region(const FtleMap& map, double threshold) {
  PositiveRegion r;
  for (std::size_t i = 0; i < map.delta_axis.n; ++i) {
    for (std::size_t j = 0; j < map.kappa_axis.n; ++j) {
      const auto& v = map.at(i, j);
      if (!v || !(*v > threshold)) continue;
      const double d = map.delta_axis.at(i);
      const double k = map.kappa_axis.at(j);
      if (r.empty) {
        r.delta_min = r.delta_max = d;
        r.kappa_min = r.kappa_max = k;
        r.empty = false;
      }
      r.delta_min = std::min(r.delta_min, d);
      r.delta_max = std::max(r.delta_max, d);
      r.kappa_min = std::min(r.kappa_min, k);
      r.kappa_max = std::max(r.kappa_max, k);
      ++r.positive_cells;
    }
  }
  return r;
}

void write_ftle_map_csv(std::ostream& os, const FtleMap& map) {
  os << "delta,kappa,lambda\n";
  for (std::size_t i = 0; i < map.delta_axis.n; ++i) {
    for (std::size_t j = 0; j < map.kappa_axis.n; ++j) {
      const auto& v = map.at(i, j);
      os << format_double(map.delta_axis.at(i)) << ',' << format_double(map.kappa_axis.at(j)) << ','
         << (v ? format_double(*v) : std::string()) << '\n';
    }
  }
}

std::string ftle_map_summary_json(const FtleMap& map, const FtleMapSettings& s, const PositiveThreshold& threshold) {
  using nlohmann::ordered_json;
  auto axis = [](const GridAxis& a) { return ordered_json{{"lo", a.lo}, {"hi", a.hi}, {"n", a.n}}; };
  const PositiveRegion region = positive_region(map, threshold.value);

  ordered_json j;
  j["grid"] = {{"delta", axis(map.delta_axis)}, {"kappa", axis(map.kappa_axis)}};
  j["omega_r"] = s.omega_r;
  j["horizon"] = s.horizon;
  j["renorm_interval"] = s.renorm_interval;
  j["threshold"] = {{"value", threshold.value},
                    {"mean", threshold.mean},
                    {"sigma", threshold.sigma},
                    {"reference_lambdas", threshold.reference_lambdas}};
  if (region.empty) {
    j["positive_region"] = nullptr;
  } else {
    j["positive_region"] = {{"delta_min", region.delta_min},
                            {"delta_max", region.delta_max},
                            {"kappa_min", region.kappa_min},
                            {"kappa_max", region.kappa_max},
                            {"cells", region.positive_cells}};
  }
  j["failures"] = ordered_json::array();
  for (std::size_t idx = 0; idx < map.values.size(); ++idx) {
    if (map.values[idx]) continue;
    j["failures"].push_back({{"delta", map.delta_axis.at(idx / map.kappa_axis.n)},
                             {"kappa", map.kappa_axis.at(idx % map.kappa_axis.n)},
                             {"error", map.errors[idx]}});
  }
  return j.dump(2) + "\n";
}

}  // namespace atomwalk
