#include "oplax/operadic_lax.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oplax/numerics.hpp"
#include "oplax/operad.hpp"

namespace oplax {

const std::array<const char*, 8>& StructureConstants2::labels() noexcept {
  static const std::array<const char*, 8> kLabels = {"mu111", "mu112", "mu121", "mu122",
                                                     "mu211", "mu212", "mu221", "mu222"};
  return kLabels;
}

StructureConstants2 StructureConstants2::from_operation(const Operation& op) {
  if (op.dim() != 2 || op.degree() != 2) {
    throw std::invalid_argument("structure constants: need a binary operation on R^2");
  }
  StructureConstants2 s;
  std::copy(op.coeffs().begin(), op.coeffs().end(), s.mu.begin());
  return s;
}

Operation StructureConstants2::to_operation() const {
  return Operation(2, 2, std::vector<double>(mu.begin(), mu.end()));
}

double StructureConstants2::norm() const noexcept {
  double s = 0.0;
  for (double x : mu) s += x * x;
  return std::sqrt(s);
}

Operation m_matrix(double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("m_matrix: omega must be positive");
  const double h = 0.5 * omega;
  return Operation(2, 1, {0.0, -h, h, 0.0});
}

Operation lax_rhs_bracket(const Operation& mu, const Operation& M) {
  if (mu.degree() != 2 || M.degree() != 1) {
    throw std::invalid_argument("lax_rhs_bracket: need a binary mu and a linear M");
  }
  if (mu.dim() != M.dim()) throw std::invalid_argument("lax_rhs_bracket: dimension mismatch");
  return bracket(M, mu);
}

Operation lax_rhs_index(const Operation& mu, const Operation& M) {
  if (mu.degree() != 2 || M.degree() != 1) {
    throw std::invalid_argument("lax_rhs_index: need a binary mu and a linear M");
  }
  if (mu.dim() != M.dim()) throw std::invalid_argument("lax_rhs_index: dimension mismatch");
  const std::size_t n = mu.dim();
  auto m = [&](std::size_t up, std::size_t lo) { return M[up * n + lo]; };
  auto u = [&](std::size_t i, std::size_t j, std::size_t k) { return mu[(i * n + j) * n + k]; };

  std::vector<double> out(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
          acc += u(s, j, k) * m(i, s) - m(s, j) * u(i, s, k) - m(s, k) * u(i, j, s);
        }
        out[(i * n + j) * n + k] = acc;
      }
    }
  }
  return Operation(n, 2, std::move(out));
}

StructureConstants2 lax_rhs_expanded(const StructureConstants2& x, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("lax_rhs_expanded: omega must be positive");
  const double h = 0.5 * omega;
  // 1-based labels: u(i, j, k) = mu^i_{jk}
  auto u = [&](int i, int j, int k) { return x.mu[4 * (i - 1) + 2 * (j - 1) + (k - 1)]; };
  StructureConstants2 r;
  auto set = [&](int i, int j, int k, double v) { r.mu[4 * (i - 1) + 2 * (j - 1) + (k - 1)] = v; };
  set(1, 1, 1, -h * (u(2, 1, 1) + u(1, 2, 1) + u(1, 1, 2)));
  set(2, 1, 1, h * (u(1, 1, 1) - u(2, 2, 1) - u(2, 1, 2)));
  set(1, 1, 2, -h * (u(2, 1, 2) + u(1, 2, 2) - u(1, 1, 1)));
  set(2, 1, 2, h * (u(1, 1, 2) - u(2, 2, 2) + u(2, 1, 1)));
  set(1, 2, 1, -h * (u(2, 2, 1) - u(1, 1, 1) + u(1, 2, 2)));
  set(2, 2, 1, h * (u(1, 2, 1) + u(2, 1, 1) - u(2, 2, 2)));
  set(1, 2, 2, -h * (u(2, 2, 2) - u(1, 1, 2) - u(1, 2, 1)));
  set(2, 2, 2, h * (u(1, 2, 2) + u(2, 1, 2) + u(2, 2, 1)));
  return r;
}

StructureConstants2 mu_from_aux(const AuxValues& a, const CParams& cp) noexcept {
  const double ap = a.a_plus, am = a.a_minus, dp = a.d_plus, dm = a.d_minus;
  const auto& C = cp.c;
  const double c1 = C[0], c2 = C[1], c3 = C[2], c4 = C[3];
  const double c5 = C[4], c6 = C[5], c7 = C[6], c8 = C[7];
  StructureConstants2 r;
  r.mu[0] = c5 * am + c6 * ap + c7 * dm + c8 * dp;                                  // 1,11
  r.mu[1] = c1 * ap + c2 * am - c7 * dp + c8 * dm;                                  // 1,12
  r.mu[2] = -c1 * ap - c2 * am - c3 * ap - c4 * am - c5 * ap + c6 * am - c7 * dp +  // 1,21
            c8 * dm;
  r.mu[3] = -c3 * am + c4 * ap - c7 * dm - c8 * dp;                                 // 1,22
  r.mu[4] = c3 * ap + c4 * am - c7 * dp + c8 * dm;                                  // 2,11
  r.mu[5] = c1 * am - c2 * ap + c3 * am - c4 * ap + c5 * am + c6 * ap - c7 * dm -   // 2,12
            c8 * dp;
  r.mu[6] = -c1 * am + c2 * ap - c7 * dm - c8 * dp;                                 // 2,21
  r.mu[7] = -c5 * ap + c6 * am + c7 * dp - c8 * dm;                                 // 2,22
  return r;
}

StructureConstants2 mu_dot_from_aux(const AuxValues& aux_dot, const CParams& c) noexcept {
  return mu_from_aux(aux_dot, c);
}

std::array<double, 8> lax_ode_residual(const AuxValues& aux, const AuxValues& aux_dot,
                                      const CParams& c, double omega) {
  const StructureConstants2 lhs = mu_dot_from_aux(aux_dot, c);
  const StructureConstants2 rhs = lax_rhs_expanded(mu_from_aux(aux, c), omega);
  std::array<double, 8> r;
  for (std::size_t a = 0; a < 8; ++a) r[a] = lhs.mu[a] - rhs.mu[a];
  return r;
}

const GammaPattern& printed_gamma() noexcept {
  // 1: G+^{w/2}  2: G-^{w/2}  3: G+^{3w/2}  4: G-^{3w/2}
  static const GammaPattern kGamma = {{
      {0, 1, -1, 0, 0, 2, -2, 0},
      {0, 2, -2, 0, 0, -1, 1, 0},
      {0, 0, -1, -2, 1, 2, 0, 0},
      {0, 0, -2, 1, 2, -1, 0, 0},
      {2, 0, -1, 0, 0, 2, 0, -1},
      {1, 0, 2, 0, 0, 1, 0, 2},
      {4, -3, -3, -4, -3, -4, -4, 3},
      {3, 4, 4, -3, 4, -3, -3, -4},
  }};
  return kGamma;
}

GammaPattern derived_gamma() {
  // With aux = 0 every G equals the matching aux rate, so probing unit rates
  // and unit C reads off one entry at a time.
  GammaPattern out{};
  for (std::size_t beta = 0; beta < 8; ++beta) {
    CParams c;
    c.c[beta] = 1.0;
    std::array<std::array<double, 4>, 8> coeff{};
    for (std::size_t k = 0; k < 4; ++k) {
      AuxValues rate;
      (k == 0 ? rate.a_plus : k == 1 ? rate.a_minus : k == 2 ? rate.d_plus : rate.d_minus) = 1.0;
      const auto r = lax_ode_residual(AuxValues{}, rate, c, 1.0);
      for (std::size_t alpha = 0; alpha < 8; ++alpha) coeff[alpha][k] = r[alpha];
    }
    for (std::size_t alpha = 0; alpha < 8; ++alpha) {
      int code = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        const double v = coeff[alpha][k];
        if (v == 0.0) continue;
        if (code != 0 || std::abs(v) != 1.0) {
          throw std::logic_error("derived_gamma: residual is not a signed single G term");
        }
        code = (v > 0 ? 1 : -1) * static_cast<int>(k + 1);
      }
      out[alpha][beta] = code;
    }
  }
  return out;
}

std::array<std::size_t, 8> gamma_component_permutation() {
  const GammaPattern& printed = printed_gamma();
  const GammaPattern derived = derived_gamma();
  std::array<std::size_t, 8> perm{};
  std::array<bool, 8> used{};
  for (std::size_t col = 0; col < 8; ++col) {
    bool found = false;
    for (std::size_t alpha = 0; alpha < 8 && !found; ++alpha) {
      if (used[alpha]) continue;
      bool same = true;
      for (std::size_t beta = 0; beta < 8 && same; ++beta) {
        same = printed[beta][col] == derived[alpha][beta];
      }
      if (same) {
        perm[col] = alpha;
        used[alpha] = true;
        found = true;
      }
    }
    if (!found) {
      throw std::logic_error("gamma: printed column " + std::to_string(col + 1) +
                             " matches no residual component");
    }
  }
  return perm;
}

std::array<double, 8> gamma_contraction(const GValues& g, const CParams& c) {
  static const std::array<std::size_t, 8> kPerm = gamma_component_permutation();
  const std::array<double, 4> gv = {g.plus_half, g.minus_half, g.plus_three_half,
                                    g.minus_three_half};
  const GammaPattern& pattern = printed_gamma();
  std::array<double, 8> r{};
  for (std::size_t col = 0; col < 8; ++col) {
    double acc = 0.0;
    for (std::size_t beta = 0; beta < 8; ++beta) {
      const int code = pattern[beta][col];
      if (code == 0) continue;
      const double term = c.c[beta] * gv[static_cast<std::size_t>(std::abs(code) - 1)];
      acc += code > 0 ? term : -term;
    }
    r[kPerm[col]] = acc;
  }
  return r;
}

StructureConstants2 mu_closed_form(const CParams& c, const OscState& s0, double t) {
  return mu_from_aux(aux_exact_flow(aux_algebraic(s0), s0.omega, t), c);
}

namespace {

StructureConstants2 pointwise_mu(const CParams& c, double q, double p, double omega) {
  return mu_from_aux(aux_algebraic(OscState(q, p, omega)), c);
}

void require_smooth_stencil(const OscState& s, double h) {
  const double r = std::sqrt(2.0 * hamiltonian(s));
  if (r == 0.0) throw BranchLocusError("pde_residual: state at the origin (H = 0)");
  const double delta = 1e-6 * (1.0 + r);
  if ((s.p - h) < 0.0 && (s.q - h) <= 0.0 && (s.q + h) >= 0.0) {
    throw BranchLocusError("pde_residual: stencil crosses the branch locus q = 0, p < 0");
  }
  const std::array<std::array<double, 2>, 5> pts = {{{s.q, s.p},
                                                     {s.q + h, s.p},
                                                     {s.q - h, s.p},
                                                     {s.q, s.p + h},
                                                     {s.q, s.p - h}}};
  for (const auto& pt : pts) {
    if (aux_algebraic(OscState(pt[0], pt[1], s.omega)).a_plus < delta) {
      std::ostringstream os;
      os << "pde_residual: A+ below " << delta << " near (q, p) = (" << s.q << ", " << s.p
         << ")";
      throw BranchLocusError(os.str());
    }
  }
}

}  // namespace

double pde_residual(const CParams& c, const OscState& s, double h_fd) {
  if (!(h_fd > 0.0)) throw std::invalid_argument("pde_residual: h_fd must be positive");
  if (std::all_of(c.c.begin(), c.c.end(), [](double x) { return x == 0.0; })) return 0.0;
  require_smooth_stencil(s, h_fd);

  const double w = s.omega;
  const auto dq_plus = pointwise_mu(c, s.q + h_fd, s.p, w);
  const auto dq_minus = pointwise_mu(c, s.q - h_fd, s.p, w);
  const auto dp_plus = pointwise_mu(c, s.q, s.p + h_fd, w);
  const auto dp_minus = pointwise_mu(c, s.q, s.p - h_fd, w);
  const Operation rhs = lax_rhs_bracket(pointwise_mu(c, s.q, s.p, w).to_operation(), m_matrix(w));

  const double k = 1.0 / (2.0 * h_fd);
  double sum = 0.0;
  for (std::size_t a = 0; a < 8; ++a) {
    const double d_q = (dq_plus.mu[a] - dq_minus.mu[a]) * k;
    const double d_p = (dp_plus.mu[a] - dp_minus.mu[a]) * k;
    const double e = s.p * d_q - w * w * s.q * d_p - rhs[a];
    sum += e * e;
  }
  return std::sqrt(sum);
}

void VerificationReport::add(std::string name, double max_residual, double tolerance) {
  checks.push_back({std::move(name), max_residual, tolerance, max_residual <= tolerance});
}

bool VerificationReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

void require_finite(const StructureConstants2& mu, const char* check, double t) {
  for (double x : mu.mu) {
    if (!std::isfinite(x)) {
      std::ostringstream os;
      os << check << ": non-finite mu at t = " << t;
      throw IntegrationError(os.str(), 0);
    }
  }
}

}  // namespace

VerificationReport verify_lax_representation(const CParams& c, const OscState& s0, double t_end,
                                             std::size_t steps, double tol,
                                             const VerifyOptions& options) {
  if (steps < 2) throw std::invalid_argument("verify: steps must be at least 2");
  if (!(tol > 0.0)) throw std::invalid_argument("verify: tol must be positive");
  if (!std::isfinite(t_end)) throw std::invalid_argument("verify: t_end must be finite");
  for (double x : c.c) {
    if (!std::isfinite(x)) throw std::invalid_argument("verify: C must be finite");
  }

  VerificationReport report;
  report.config = {s0.omega, s0.q, s0.p, c, t_end, steps, tol, options.h_fd, 0};

  const double w = s0.omega;
  const AuxValues a0 = aux_algebraic(s0);
  const Operation M = m_matrix(w);
  const double norm0 = mu_from_aux(a0, c).norm();
  const double h = options.h_fd;

  double gap = 0.0;
  double lax_fd = 0.0;
  double on_shell = 0.0;
  double norm_drift = 0.0;

  StateVec<8> y0;
  std::copy(mu_from_aux(a0, c).mu.begin(), mu_from_aux(a0, c).mu.end(), y0.begin());
  try {
    rk4_sweep<8>(
        y0, t_end, steps,
        [w](const StateVec<8>& y) { return lax_rhs_expanded(StructureConstants2{y}, w).mu; },
        [&](std::size_t, double t, const StateVec<8>& y) {
          const AuxValues a = aux_exact_flow(a0, w, t);
          const StructureConstants2 mu = mu_from_aux(a, c);
          require_finite(mu, "closed_vs_integrated_mu", t);
          for (std::size_t k = 0; k < 8; ++k) gap = std::max(gap, std::abs(mu.mu[k] - y[k]));

          const StructureConstants2 ahead = mu_from_aux(aux_exact_flow(a0, w, t + h), c);
          const StructureConstants2 behind = mu_from_aux(aux_exact_flow(a0, w, t - h), c);
          const Operation rhs = lax_rhs_bracket(mu.to_operation(), M);
          double fd = 0.0;
          for (std::size_t k = 0; k < 8; ++k) {
            const double e = (ahead.mu[k] - behind.mu[k]) / (2.0 * h) - rhs[k];
            fd += e * e;
          }
          lax_fd = std::max(lax_fd, std::sqrt(fd));

          for (double r : lax_ode_residual(a, aux_rate(a, w), c, w)) {
            on_shell = std::max(on_shell, std::abs(r));
          }
          norm_drift = std::max(norm_drift, std::abs(mu.norm() - norm0));
        });
  } catch (const IntegrationError& e) {
    std::ostringstream os;
    os << "closed_vs_integrated_mu: integration blew up at t = "
       << static_cast<double>(e.step()) * t_end / static_cast<double>(steps);
    throw IntegrationError(os.str(), e.step());
  }

  double h_drift = 0.0;
  const double h0 = hamiltonian(s0);
  try {
    for (const auto& sample : rk4_integrate(s0, t_end, steps)) {
      h_drift = std::max(h_drift, std::abs(hamiltonian(sample.state) - h0));
    }
  } catch (const std::exception& e) {
    throw IntegrationError(std::string("hamiltonian_drift: ") + e.what(), 0);
  }

  report.add("closed_vs_integrated_mu", gap, tol);
  report.add("lax_equation_residual", lax_fd, options.fd_tol);
  report.add("on_shell_ode_residual", on_shell, tol);
  report.add("mu_norm_drift", norm_drift, tol);
  report.add("hamiltonian_drift", h_drift, tol);
  return report;
}

}  // namespace oplax
