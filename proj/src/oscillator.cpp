#include "oplax/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oplax/numerics.hpp"
#include "oplax/operad.hpp"

namespace oplax {

OscState::OscState(double q_, double p_, double omega_) : q(q_), p(p_), omega(omega_) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("oscillator: omega must be positive and finite");
  }
  if (!std::isfinite(q) || !std::isfinite(p)) {
    throw std::invalid_argument("oscillator: q and p must be finite");
  }
}

double GValues::max_abs() const noexcept {
  return std::max({std::abs(plus_half), std::abs(minus_half), std::abs(plus_three_half),
                   std::abs(minus_three_half)});
}

double hamiltonian(const OscState& s) noexcept {
  return 0.5 * (s.p * s.p + s.omega * s.omega * s.q * s.q);
}

PhaseVelocity hamilton_rhs(const OscState& s) noexcept {
  return {s.p, -s.omega * s.omega * s.q};
}

OscState exact_flow(const OscState& s0, double t) {
  const double w = s0.omega;
  const double c = std::cos(w * t);
  const double sn = std::sin(w * t);
  return OscState(s0.q * c + (s0.p / w) * sn, s0.p * c - w * s0.q * sn, w);
}

std::vector<TimedState> rk4_integrate(const OscState& s0, double t_end, std::size_t steps) {
  const double w2 = s0.omega * s0.omega;
  std::vector<TimedState> out;
  out.reserve(steps + 1);
  rk4_sweep<2>(
      StateVec<2>{s0.q, s0.p}, t_end, steps,
      [w2](const StateVec<2>& y) { return StateVec<2>{y[1], -w2 * y[0]}; },
      [&](std::size_t, double t, const StateVec<2>& y) {
        out.push_back({t, OscState(y[0], y[1], s0.omega)});
      });
  return out;
}

LaxPair lax_matrices(const OscState& s) {
  const double wq = s.omega * s.q;
  const double h = 0.5 * s.omega;
  return {Operation(2, 1, {s.p, wq, wq, -s.p}), Operation(2, 1, {0.0, -h, h, 0.0})};
}

double classical_lax_residual(const OscState& s0, double t, double h_fd) {
  const LaxPair now = lax_matrices(exact_flow(s0, t));
  const Operation ahead = lax_matrices(exact_flow(s0, t + h_fd)).L;
  const Operation behind = lax_matrices(exact_flow(s0, t - h_fd)).L;
  const double k = 1.0 / (2.0 * h_fd);
  const Operation l_dot = linear_comb(k, ahead, -k, behind);
  return frobenius_norm(linear_comb(1.0, l_dot, -1.0, bracket(now.M, now.L)));
}

AuxValues aux_with_cubics(double ap, double am) noexcept {
  return {ap, am, 0.5 * ap * (ap * ap - 3.0 * am * am), 0.5 * am * (3.0 * ap * ap - am * am)};
}

AuxValues aux_algebraic(const OscState& s) {
  const double wq = s.omega * s.q;
  const double r = std::hypot(s.p, wq);  // sqrt(2H)
  if (r == 0.0) return {};
  // A+ = sqrt(r + p) >= 0 throughout. For p < 0 the sum r + p cancels, so the
  // larger root A- = sign(q) sqrt(r - p) anchors the division instead.
  double ap;
  double am;
  if (s.p >= 0.0) {
    ap = std::sqrt(r + s.p);
    am = wq / ap;
  } else {
    const double m = std::sqrt(r - s.p);
    ap = std::abs(wq) / m;
    am = (s.q >= 0.0) ? m : -m;
  }
  return aux_with_cubics(ap, am);
}

AuxValues aux_rate(const AuxValues& a, double omega) noexcept {
  const double h = 0.5 * omega;
  const double h3 = 1.5 * omega;
  return {-h * a.a_minus, h * a.a_plus, -h3 * a.d_minus, h3 * a.d_plus};
}

AuxValues aux_exact_flow(const AuxValues& a0, double omega, double t) {
  const double c1 = std::cos(0.5 * omega * t);
  const double s1 = std::sin(0.5 * omega * t);
  const double c3 = std::cos(1.5 * omega * t);
  const double s3 = std::sin(1.5 * omega * t);
  return {a0.a_plus * c1 - a0.a_minus * s1, a0.a_minus * c1 + a0.a_plus * s1,
          a0.d_plus * c3 - a0.d_minus * s3, a0.d_minus * c3 + a0.d_plus * s3};
}

GValues g_from_rates(const AuxValues& a, const AuxValues& a_dot, double omega) noexcept {
  const double h = 0.5 * omega;
  const double h3 = 1.5 * omega;
  return {a_dot.a_plus + h * a.a_minus, a_dot.a_minus - h * a.a_plus,
          a_dot.d_plus + h3 * a.d_minus, a_dot.d_minus - h3 * a.d_plus};
}

namespace {

template <typename AuxAt>
GValues g_by_central_difference(AuxAt&& aux_at, double omega, double t, double h_fd) {
  const AuxValues ahead = aux_at(t + h_fd);
  const AuxValues behind = aux_at(t - h_fd);
  const double k = 1.0 / (2.0 * h_fd);
  const AuxValues rate{(ahead.a_plus - behind.a_plus) * k, (ahead.a_minus - behind.a_minus) * k,
                       (ahead.d_plus - behind.d_plus) * k, (ahead.d_minus - behind.d_minus) * k};
  return g_from_rates(aux_at(t), rate, omega);
}

}  // namespace

GValues g_residuals(const OscState& s0, double t, double h_fd) {
  const AuxValues a0 = aux_algebraic(s0);
  return g_by_central_difference(
      [&](double tt) { return aux_exact_flow(a0, s0.omega, tt); }, s0.omega, t, h_fd);
}

GValues g_residuals_on_path(const std::function<OscState(double)>& path, double t,
                            double h_fd) {
  const double omega = path(t).omega;
  return g_by_central_difference([&](double tt) { return aux_algebraic(path(tt)); }, omega, t,
                                 h_fd);
}

}  // namespace oplax
