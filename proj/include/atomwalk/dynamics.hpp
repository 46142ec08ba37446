#pragma once

// Semiclassical Bloch-Hamilton model of a two-level atom in a tilted
// standing-wave lattice. Everything here is dimensionless: x = k_f X,
// p = P / (hbar k_f), time tau = Omega t.

#include <array>
#include <cmath>
#include <cstddef>

namespace atomwalk {

/// Dimensional inputs of the model in one consistent unit system.
struct PhysicalParams {
  double hbar_kf = 0.0;  // photon momentum hbar * k_f
  double kf = 0.0;       // lattice wave number
  double m_a = 0.0;      // atomic mass
  double Omega = 0.0;    // maximal Rabi frequency
  double omega_a = 0.0;  // atomic transition frequency
  double omega_f = 0.0;  // laser frequency
  double F = 0.0;        // static force
};

/// The three dimensionless control parameters. Defaults are the fixed values
/// used throughout the reference study (detuning is the scanned knob).
struct ControlParams {
  double omega_r = 1e-3;  // recoil frequency, > 0
  double delta = 0.15;    // atom-field detuning
  double kappa = 0.01;    // applied force, any sign

  /// Throws Error("invalid-control-params") unless omega_r is finite and > 0
  /// and delta, kappa are finite.
  void validate() const;
};

inline constexpr std::size_t kStateDim = 5;
using StateArray = std::array<double, kStateDim>;

/// Phase point (x, p, u, v, z). The Bloch part (u, v, z) should have unit
/// length; `from_bloch` enforces that at construction.
struct AtomState {
  double x = 0.0;
  double p = 0.0;
  double u = 0.0;
  double v = 0.0;
  double z = -1.0;

  static constexpr double kBlochTolerance = 1e-12;

  /// Validating constructor: rejects |u^2+v^2+z^2 - 1| > 1e-12 with
  /// Error("invalid-bloch-vector"). No renormalization is attempted.
  static AtomState from_bloch(double x, double p, double u, double v, double z);

  /// Atom at (x, p) with its internal state in the ground level.
  static AtomState ground(double x, double p) { return {x, p, 0.0, 0.0, -1.0}; }

  StateArray to_array() const { return {x, p, u, v, z}; }
  static AtomState from_array(const StateArray& a) { return {a[0], a[1], a[2], a[3], a[4]}; }

  bool operator==(const AtomState&) const = default;
};

/// d/dtau of each AtomState field.
struct StateDerivative {
  double dx = 0.0;
  double dp = 0.0;
  double du = 0.0;
  double dv = 0.0;
  double dz = 0.0;

  bool operator==(const StateDerivative&) const = default;
};

/// Element of the tangent space, components ordered as (x, p, u, v, z).
struct TangentVector {
  StateArray c{};

  double norm() const;
  bool operator==(const TangentVector&) const = default;
};

/// Physical -> dimensionless normalization. Throws
/// Error("invalid-physical-params") when m_a, Omega or kf is not positive.
ControlParams normalize(const PhysicalParams& phys);

StateDerivative rhs(const AtomState& s, const ControlParams& c);

/// Applies the analytic Jacobian of rhs at s to t.
TangentVector jacobian_apply(const AtomState& s, const TangentVector& t, const ControlParams& c);

/// Conserved total energy (omega_r/2) p^2 + kappa x - u cos x - (delta/2) z.
double energy(const AtomState& s, const ControlParams& c);

/// u^2 + v^2 + z^2, conserved (equal to 1) along exact trajectories.
double bloch_norm_sq(const AtomState& s);

/// Raw-array form of rhs used by the integrators.
inline void rhs_inplace(const double* y, double* dy, const ControlParams& c) {
  const double sx = std::sin(y[0]);
  const double cx = std::cos(y[0]);
  dy[0] = c.omega_r * y[1];
  dy[1] = -y[2] * sx - c.kappa;
  dy[2] = c.delta * y[3];
  dy[3] = -c.delta * y[2] + 2.0 * y[4] * cx;
  dy[4] = -2.0 * y[3] * cx;
}

/// Combined state + tangent vector field on a 10-component array: the first
/// five entries are the state, the last five the tangent vector.
inline void rhs_with_tangent_inplace(const double* y, double* dy, const ControlParams& c) {
  const double sx = std::sin(y[0]);
  const double cx = std::cos(y[0]);
  const double u = y[2], v = y[3], z = y[4];
  dy[0] = c.omega_r * y[1];
  dy[1] = -u * sx - c.kappa;
  dy[2] = c.delta * v;
  dy[3] = -c.delta * u + 2.0 * z * cx;
  dy[4] = -2.0 * v * cx;

  const double* t = y + 5;
  double* dt = dy + 5;
  dt[0] = c.omega_r * t[1];
  dt[1] = -u * cx * t[0] - sx * t[2];
  dt[2] = c.delta * t[3];
  dt[3] = -2.0 * z * sx * t[0] - c.delta * t[2] + 2.0 * cx * t[4];
  dt[4] = 2.0 * v * sx * t[0] - 2.0 * cx * t[3];
}

}  // namespace atomwalk
