#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "oplax/multilinear.hpp"

namespace oplax {

/// Phase-space point of the harmonic oscillator with angular frequency omega.
struct OscState {
  double q = 0.0;
  double p = 0.0;
  double omega = 1.0;

  OscState() = default;
  /// Throws std::invalid_argument unless omega > 0 and q, p are finite.
  OscState(double q, double p, double omega);
};

struct PhaseVelocity {
  double dq;
  double dp;
};

struct TimedState {
  double t;
  OscState state;
};

struct LaxPair {
  Operation L;
  Operation M;
};

/// Auxiliary functions A+, A-, D+, D-.
///
/// On shell they satisfy A+^2 + A-^2 = 2 sqrt(2H), A+^2 - A-^2 = 2p,
/// A+ A- = omega q, and D+ + i D- = (A+ + i A-)^3 / 2.
struct AuxValues {
  double a_plus = 0.0;
  double a_minus = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
};

/// The four evolution residuals
///   G+^{w/2}  = A+' + (w/2) A-     G-^{w/2}  = A-' - (w/2) A+
///   G+^{3w/2} = D+' + (3w/2) D-    G-^{3w/2} = D-' - (3w/2) D+
struct GValues {
  double plus_half = 0.0;
  double minus_half = 0.0;
  double plus_three_half = 0.0;
  double minus_three_half = 0.0;

  double max_abs() const noexcept;
};

/// H = (p^2 + omega^2 q^2) / 2.
double hamiltonian(const OscState& s) noexcept;

/// (dq/dt, dp/dt) = (p, -omega^2 q).
PhaseVelocity hamilton_rhs(const OscState& s) noexcept;

/// Closed-form solution of Hamilton's equations after time t.
OscState exact_flow(const OscState& s0, double t);

/// Classical RK4 with h = t_end / steps. Returns steps + 1 samples starting at
/// t = 0. Throws IntegrationError on a non-finite state.
std::vector<TimedState> rk4_integrate(const OscState& s0, double t_end, std::size_t steps);

/// L = [[p, wq], [wq, -p]], M = (w/2) [[0, -1], [1, 0]] as degree-1 operations on R^2.
LaxPair lax_matrices(const OscState& s);

/// ||central-difference dL/dt - (ML - LM)|| at time t along exact_flow(s0, .).
double classical_lax_residual(const OscState& s0, double t, double h_fd = 1e-5);

/// Pointwise auxiliary values on the branch A+ >= 0. The origin maps to zeros.
AuxValues aux_algebraic(const OscState& s);

/// D+ = (A+/2)(A+^2 - 3A-^2), D- = (A-/2)(3A+^2 - A-^2).
AuxValues aux_with_cubics(double a_plus, double a_minus) noexcept;

/// Time derivatives that make all four G values vanish.
AuxValues aux_rate(const AuxValues& a, double omega) noexcept;

/// Solution of G = 0: (A+, A-) rotates by omega t / 2 and (D+, D-) by 3 omega t / 2.
AuxValues aux_exact_flow(const AuxValues& a0, double omega, double t);

GValues g_from_rates(const AuxValues& a, const AuxValues& a_dot, double omega) noexcept;

/// G values along the smooth continuation aux_exact_flow(aux_algebraic(s0), w, .)
/// with central-difference time derivatives of step h_fd.
GValues g_residuals(const OscState& s0, double t, double h_fd);

/// G values for an arbitrary phase-space path t -> (q, p), with the auxiliary
/// functions taken pointwise from aux_algebraic. Meaningful only away from the
/// branch locus q = 0, p < 0 where the pointwise branch is discontinuous.
GValues g_residuals_on_path(const std::function<OscState(double)>& path, double t,
                            double h_fd);

}  // namespace oplax
