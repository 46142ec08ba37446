#include "atomwalk/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "atomwalk/error.hpp"

namespace atomwalk {

void ControlParams::validate() const {
  if (!std::isfinite(omega_r) || omega_r <= 0.0) {
    std::ostringstream msg;
    msg << "omega_r must be a positive finite number, got " << omega_r;
    throw Error("invalid-control-params", msg.str());
  }
  if (!std::isfinite(delta)) throw Error("invalid-control-params", "delta must be finite");
  if (!std::isfinite(kappa)) throw Error("invalid-control-params", "kappa must be finite");
}

AtomState AtomState::from_bloch(double x, double p, double u, double v, double z) {
  AtomState s{x, p, u, v, z};
  const double n = bloch_norm_sq(s);
  if (!std::isfinite(x) || !std::isfinite(p) || !(std::abs(n - 1.0) <= kBlochTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Bloch vector (" << u << ", " << v << ", " << z << ") has squared length " << n
        << ", expected 1 within " << kBlochTolerance;
    throw Error("invalid-bloch-vector", msg.str());
  }
  return s;
}

double TangentVector::norm() const {
  double acc = 0.0;
  for (double e : c) acc += e * e;
  return std::sqrt(acc);
}

ControlParams normalize(const PhysicalParams& phys) {
  if (!(phys.m_a > 0.0)) throw Error("invalid-physical-params", "atomic mass m_a must be positive");
  if (!(phys.Omega > 0.0)) throw Error("invalid-physical-params", "Rabi frequency Omega must be positive");
  if (!(phys.kf > 0.0)) throw Error("invalid-physical-params", "wave number kf must be positive");

  ControlParams c;
  c.omega_r = phys.hbar_kf * phys.kf / (phys.m_a * phys.Omega);
  c.delta = (phys.omega_f - phys.omega_a) / phys.Omega;
  c.kappa = phys.F / (phys.hbar_kf * phys.Omega);
  c.validate();
  return c;
}

StateDerivative rhs(const AtomState& s, const ControlParams& c) {
  const StateArray y = s.to_array();
  StateArray dy;
  rhs_inplace(y.data(), dy.data(), c);
  return {dy[0], dy[1], dy[2], dy[3], dy[4]};
}

TangentVector jacobian_apply(const AtomState& s, const TangentVector& t, const ControlParams& c) {
  const double sx = std::sin(s.x);
  const double cx = std::cos(s.x);
  const auto& [tx, tp, tu, tv, tz] = t.c;

  TangentVector out;
  out.c[0] = c.omega_r * tp;
  out.c[1] = -s.u * cx * tx - sx * tu;
  out.c[2] = c.delta * tv;
  out.c[3] = -2.0 * s.z * sx * tx - c.delta * tu + 2.0 * cx * tz;
  out.c[4] = 2.0 * s.v * sx * tx - 2.0 * cx * tv;
  return out;
}

double energy(const AtomState& s, const ControlParams& c) {
  return 0.5 * c.omega_r * s.p * s.p + c.kappa * s.x - s.u * std::cos(s.x) - 0.5 * c.delta * s.z;
}

double bloch_norm_sq(const AtomState& s) { return s.u * s.u + s.v * s.v + s.z * s.z; }

}  // namespace atomwalk
