#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "oplax/multilinear.hpp"
#include "oplax/oscillator.hpp"

// The operadic Lax equation mu' = [M, mu] for a binary operation mu on R^2,
// the closed-form family of solutions parametrized by eight constants C, and
// the residual pipeline that checks them against each other.

namespace oplax {

/// Structure constants mu^i_{jk} of a binary operation on R^2.
///
/// Component order is (mu^1_11, mu^1_12, mu^1_21, mu^1_22, mu^2_11, mu^2_12,
/// mu^2_21, mu^2_22), which is exactly the flat coefficient order of the
/// matching Operation, so conversions are copies.
struct StructureConstants2 {
  std::array<double, 8> mu{};

  /// 0-based (i, j, k) -> position in mu.
  static constexpr std::size_t index(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return 4 * i + 2 * j + k;
  }
  /// Column labels in component order, 1-based as in the usual notation.
  static const std::array<const char*, 8>& labels() noexcept;

  /// Throws std::invalid_argument unless op has dim 2 and degree 2.
  static StructureConstants2 from_operation(const Operation& op);
  Operation to_operation() const;

  double norm() const noexcept;
};

/// The eight free parameters C_1..C_8 (stored 0-based).
struct CParams {
  std::array<double, 8> c{};
};

/// (omega/2) [[0, -1], [1, 0]]; throws std::invalid_argument for omega <= 0.
Operation m_matrix(double omega);

/// [M, mu] = M.mu - mu.M through the Gerstenhaber bracket.
Operation lax_rhs_bracket(const Operation& mu, const Operation& M);

/// mu'^i_{jk} = mu^s_{jk} M^i_s - M^s_j mu^i_{sk} - M^s_k mu^i_{js}, in any dimension.
Operation lax_rhs_index(const Operation& mu, const Operation& M);

/// The eight hand-expanded Lax ODE right-hand sides for M = m_matrix(omega).
StructureConstants2 lax_rhs_expanded(const StructureConstants2& mu, double omega);

/// Closed-form mu as a linear combination of A+-, D+- weighted by C.
StructureConstants2 mu_from_aux(const AuxValues& aux, const CParams& c) noexcept;

/// Same linear map applied to time derivatives of the auxiliary functions.
StructureConstants2 mu_dot_from_aux(const AuxValues& aux_dot, const CParams& c) noexcept;

/// mu_dot_from_aux(aux_dot) - lax_rhs_expanded(mu_from_aux(aux)); zero on shell.
std::array<double, 8> lax_ode_residual(const AuxValues& aux, const AuxValues& aux_dot,
                                      const CParams& c, double omega);

/// Symbolic entry of the reduction matrix: 0, or +-k where k = 1..4 picks
/// G+^{w/2}, G-^{w/2}, G+^{3w/2}, G-^{3w/2}.
using GammaPattern = std::array<std::array<int, 8>, 8>;

/// The reduction matrix as published: row r multiplies C_{r+1}, column c is a
/// residual component.
const GammaPattern& printed_gamma() noexcept;

/// The same matrix recovered by probing lax_ode_residual, indexed [alpha][beta]
/// with alpha in StructureConstants2 order.
GammaPattern derived_gamma();

/// perm[c] = alpha such that printed column c equals derived row alpha for every
/// beta. Throws std::logic_error if no consistent assignment exists.
std::array<std::size_t, 8> gamma_component_permutation();

/// r_alpha = sum_beta C_beta Gamma_alpha^beta, ordered like StructureConstants2.
std::array<double, 8> gamma_contraction(const GValues& g, const CParams& c);

/// mu_from_aux along aux_exact_flow seeded from aux_algebraic(s0).
StructureConstants2 mu_closed_form(const CParams& c, const OscState& s0, double t);

/// Refusal raised when a finite-difference stencil would straddle the
/// discontinuity of the pointwise branch of A+-.
class BranchLocusError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// ||p d_q mu - w^2 q d_p mu - [M, mu]|| with central differences of the
/// pointwise map (q, p) -> mu_from_aux(aux_algebraic(q, p), c).
double pde_residual(const CParams& c, const OscState& s, double h_fd);

struct Check {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ReportConfig {
  double omega = 1.0;
  double q0 = 0.0;
  double p0 = 0.0;
  CParams c;
  double t_end = 0.0;
  std::size_t steps = 0;
  double tol = 0.0;
  double h_fd = 0.0;
  std::uint64_t seed = 0;
};

struct VerificationReport {
  std::vector<Check> checks;
  ReportConfig config;

  void add(std::string name, double max_residual, double tolerance);
  bool passed() const noexcept;
};

struct VerifyOptions {
  /// Central-difference step for the time-derivative check.
  double h_fd = 1e-4;
  /// Tolerance for that check; truncation there is O(h_fd^2), not O(tol).
  double fd_tol = 1e-6;
};

/// Runs the closed-form solution against RK4 on the Lax ODEs and collects:
///   closed_vs_integrated_mu   max componentwise gap over all samples
///   lax_equation_residual     ||central-difference mu' - [M, mu]||
///   on_shell_ode_residual  Lax residual with exact aux rates
///   mu_norm_drift             | ||mu(t)|| - ||mu(0)|| |
///   hamiltonian_drift         |H(t) - H(0)| along RK4
/// Throws std::invalid_argument for steps < 2 and IntegrationError naming
/// the check and time when a value goes non-finite.
VerificationReport verify_lax_representation(const CParams& c, const OscState& s0, double t_end,
                                             std::size_t steps, double tol,
                                             const VerifyOptions& options = {});

}  // namespace oplax
