#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oplax/operadic_lax.hpp"

namespace oplax::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kBadInput = 2 };

enum class OutputFormat { kCsv, kJson };
enum class Integrator { kExact, kRk4 };

/// Settings for `simulate` and `verify`. When c is absent it is drawn from
/// seed uniformly in [-1, 1]^8.
struct RunConfig {
  double omega = 1.0;
  double q0 = 0.0;
  double p0 = 2.0;
  std::optional<std::array<double, 8>> c;
  double t_end = 6.283185307179586;
  std::size_t steps = 1000;
  double tol = 1e-7;
  std::uint64_t seed = 0;
  std::string out;
  OutputFormat format = OutputFormat::kCsv;
};

/// Bad configuration text or values. line/column are 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses a flat JSON object with keys omega, q0, p0, c, t_end, steps, tol,
/// seed, out, format. Missing keys keep their defaults; unknown keys are errors.
RunConfig parse_config(const std::string& text);

/// Throws ConfigError unless omega > 0, steps >= 2, tol > 0, t_end > 0 and all
/// reals are finite.
void validate(const RunConfig& config);

/// The C actually used by a run.
CParams resolve_c(const RunConfig& config);

/// Exact 17-column CSV header written by `simulate`.
const std::string& csv_header();

struct AxiomsOptions {
  std::size_t trials = 100;
  std::size_t dim_max = 2;
  std::size_t deg_max = 3;
  double tol = 1e-12;
  std::uint64_t seed = 7;
};

struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t evaluations = 0;
  double max_residual = 0.0;
};

/// Seeded property suites over random operations: the three composition
/// relation branches, unit, graded antisymmetry and Jacobi. Residuals are
/// normalized by 1 + the product of operand norms.
std::vector<SuiteResult> run_axiom_suites(const AxiomsOptions& options);

int cmd_axioms(const AxiomsOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, Integrator integrator, std::ostream& out,
                 std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full report behind `verify`: the trajectory checks plus the G residuals,
/// the phase-space PDE residual and the off-shell reduction identity.
VerificationReport build_verification_report(const RunConfig& config);

/// Entry point: args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oplax::cli
