#include "oplax/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oplax/numerics.hpp"
#include "oplax/operad.hpp"

namespace oplax::cli {

using nlohmann::json;

namespace {

// Fixed step/tolerance pairs for the finite-difference checks in `verify`.
constexpr double kGStep = 1e-4;
constexpr double kGTol = 1e-7;
constexpr double kPdeStep = 1e-5;
constexpr double kPdeTol = 1e-6;
constexpr double kGammaTol = 1e-12;
constexpr std::size_t kGammaDraws = 100;
constexpr std::size_t kPdeProbes = 16;
constexpr double kLaxStep = 1e-4;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  // parse_error::byte is 1-based and points one past the offending character.
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t stop = std::min(text.size(), byte > 0 ? byte - 1 : 0);
  for (std::size_t k = 0; k < stop; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ConfigError::ConfigError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(what), line_(line), column_(column) {}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what(),
                      line, col);
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  auto real = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
    dst = j[key].get<double>();
  };
  try {
    for (const auto& item : j.items()) {
      static const std::array<const char*, 10> kKeys = {"omega", "q0",  "p0",   "c",   "t_end",
                                                        "steps", "tol", "seed", "out", "format"};
      if (std::find_if(kKeys.begin(), kKeys.end(),
                       [&](const char* k) { return item.key() == k; }) == kKeys.end()) {
        throw ConfigError("config: unknown key '" + item.key() + "'");
      }
    }
    real("omega", cfg.omega);
    real("q0", cfg.q0);
    real("p0", cfg.p0);
    real("t_end", cfg.t_end);
    real("tol", cfg.tol);
    if (j.contains("c") && !j["c"].is_null()) {
      const auto& arr = j["c"];
      if (!arr.is_array() || arr.size() != 8) throw ConfigError("config: 'c' must be an array of 8 numbers");
      std::array<double, 8> c{};
      for (std::size_t k = 0; k < 8; ++k) {
        if (!arr[k].is_number()) throw ConfigError("config: 'c' must be an array of 8 numbers");
        c[k] = arr[k].get<double>();
      }
      cfg.c = c;
    }
    if (j.contains("steps")) {
      if (!j["steps"].is_number_integer() || j["steps"].get<std::int64_t>() < 0) {
        throw ConfigError("config: 'steps' must be a non-negative integer");
      }
      cfg.steps = j["steps"].get<std::size_t>();
    }
    if (j.contains("seed")) {
      if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0) {
        throw ConfigError("config: 'seed' must be a non-negative integer");
      }
      cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out")) {
      if (!j["out"].is_string()) throw ConfigError("config: 'out' must be a string");
      cfg.out = j["out"].get<std::string>();
    }
    if (j.contains("format")) {
      const std::string f = j["format"].is_string() ? j["format"].get<std::string>() : "";
      if (f == "csv") {
        cfg.format = OutputFormat::kCsv;
      } else if (f == "json") {
        cfg.format = OutputFormat::kJson;
      } else {
        throw ConfigError("config: 'format' must be \"csv\" or \"json\"");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

void validate(const RunConfig& config) {
  if (!(config.omega > 0.0) || !std::isfinite(config.omega)) throw ConfigError("omega must be > 0");
  if (!std::isfinite(config.q0) || !std::isfinite(config.p0)) throw ConfigError("q0, p0 must be finite");
  if (!(config.t_end > 0.0) || !std::isfinite(config.t_end)) throw ConfigError("t_end must be > 0");
  if (config.steps < 2) throw ConfigError("steps must be >= 2");
  if (!(config.tol > 0.0) || !std::isfinite(config.tol)) throw ConfigError("tol must be > 0");
  if (config.c) {
    for (double x : *config.c) {
      if (!std::isfinite(x)) throw ConfigError("c must be finite");
    }
  }
}

CParams resolve_c(const RunConfig& config) {
  CParams c;
  if (config.c) {
    c.c = *config.c;
    return c;
  }
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& x : c.c) x = u(rng);
  return c;
}

const std::string& csv_header() {
  static const std::string kHeader =
      "t,q,p,H,Aplus,Aminus,Dplus,Dminus,mu111,mu112,mu121,mu122,mu211,mu212,mu221,mu222,"
      "lax_residual";
  return kHeader;
}

// ---------------------------------------------------------------------------
// axioms

std::vector<SuiteResult> run_axiom_suites(const AxiomsOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::size_t> dim_dist(1, o.dim_max);
  std::uniform_int_distribution<std::size_t> deg_dist(1, o.deg_max);

  auto draw = [&](std::size_t d) { return random_operation(rng, d, deg_dist(rng)); };

  std::vector<SuiteResult> results;
  const std::array<std::pair<const char*, CompositionCase>, 3> cases = {{
      {"composition_before", CompositionCase::kBefore},
      {"composition_inside", CompositionCase::kInside},
      {"composition_after", CompositionCase::kAfter},
  }};

  for (const auto& [name, which] : cases) {
    SuiteResult r{name};
    // Outer branches need |h| >= 1; with deg_max = 1 they are empty.
    const bool possible = which == CompositionCase::kInside || o.deg_max >= 2;
    for (std::size_t trial = 0; possible && trial < o.trials; ++trial) {
      const std::size_t d = dim_dist(rng);
      Operation h = draw(d);
      while (which != CompositionCase::kInside && h.degree() < 2) h = draw(d);
      const Operation f = draw(d);
      const Operation g = draw(d);
      const double scale = frobenius_norm(h) * frobenius_norm(f) * frobenius_norm(g);
      const std::size_t rh = h.degree() - 1;
      const std::size_t rf = f.degree() - 1;
      for (std::size_t i = 0; i <= rh; ++i) {
        for (std::size_t j = 0; j <= rh + rf; ++j) {
          if (composition_case(h, f, i, j) != which) continue;
          r.max_residual = std::max(
              r.max_residual,
              normalized_residual(composition_relation_residual(h, f, g, i, j), scale));
          ++r.evaluations;
        }
      }
      ++r.trials;
    }
    results.push_back(r);
  }

  SuiteResult unit{"unit"};
  SuiteResult anti{"antisymmetry"};
  SuiteResult jac{"jacobi"};
  for (std::size_t trial = 0; trial < o.trials; ++trial) {
    const std::size_t d = dim_dist(rng);
    const Operation f = draw(d);
    const Operation g = draw(d);
    const Operation h = draw(d);
    const double nf = frobenius_norm(f), ng = frobenius_norm(g), nh = frobenius_norm(h);
    unit.max_residual = std::max(unit.max_residual, normalized_residual(unit_residual(f), nf));
    anti.max_residual =
        std::max(anti.max_residual, normalized_residual(antisymmetry_residual(f, g), nf * ng));
    jac.max_residual =
        std::max(jac.max_residual, normalized_residual(jacobi_residual(f, g, h), nf * ng * nh));
    for (SuiteResult* s : {&unit, &anti, &jac}) {
      ++s->trials;
      ++s->evaluations;
    }
  }
  results.push_back(unit);
  results.push_back(anti);
  results.push_back(jac);
  return results;
}

int cmd_axioms(const AxiomsOptions& o, std::ostream& out, std::ostream& err) {
  if (o.dim_max < 1 || o.dim_max > 3 || o.deg_max < 1 || o.deg_max > 3 || o.trials < 1 ||
      !(o.tol > 0.0)) {
    err << "axioms: need --trials >= 1, --dim-max and --deg-max in [1, 3], --tol > 0\n";
    return kBadInput;
  }
  bool ok = true;
  for (const auto& s : run_axiom_suites(o)) {
    const bool pass = s.max_residual <= o.tol;
    ok = ok && pass;
    out << s.name << " trials=" << s.trials << " evaluations=" << s.evaluations
        << " max_residual=" << fmt17(s.max_residual) << " tol=" << fmt17(o.tol) << ' '
        << (pass ? "PASS" : "FAIL") << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// simulate

namespace {

struct Row {
  double t;
  OscState state;
  AuxValues aux;
  StructureConstants2 mu;
  double lax_residual;
};

double lax_residual_at(const AuxValues& aux, const AuxValues& ahead, const AuxValues& behind,
                       const CParams& c, const Operation& M, double h) {
  const double k = 1.0 / (2.0 * h);
  const AuxValues rate{(ahead.a_plus - behind.a_plus) * k, (ahead.a_minus - behind.a_minus) * k,
                       (ahead.d_plus - behind.d_plus) * k, (ahead.d_minus - behind.d_minus) * k};
  const StructureConstants2 mu_dot = mu_dot_from_aux(rate, c);
  const Operation rhs = lax_rhs_bracket(mu_from_aux(aux, c).to_operation(), M);
  double s = 0.0;
  for (std::size_t a = 0; a < 8; ++a) s += (mu_dot.mu[a] - rhs[a]) * (mu_dot.mu[a] - rhs[a]);
  return std::sqrt(s);
}

bool row_finite(const Row& r) {
  const double h = hamiltonian(r.state);
  bool ok = std::isfinite(r.t) && std::isfinite(r.state.q) && std::isfinite(r.state.p) &&
            std::isfinite(h) && std::isfinite(r.aux.a_plus) && std::isfinite(r.aux.a_minus) &&
            std::isfinite(r.aux.d_plus) && std::isfinite(r.aux.d_minus) &&
            std::isfinite(r.lax_residual);
  for (double x : r.mu.mu) ok = ok && std::isfinite(x);
  return ok;
}

std::vector<Row> simulate_rows(const RunConfig& cfg, const CParams& c, Integrator integrator) {
  const OscState s0(cfg.q0, cfg.p0, cfg.omega);
  const double w = cfg.omega;
  const AuxValues a0 = aux_algebraic(s0);
  const Operation M = m_matrix(w);
  const double dt = cfg.t_end / static_cast<double>(cfg.steps);

  std::vector<Row> rows;
  rows.reserve(cfg.steps + 1);
  if (integrator == Integrator::kExact) {
    for (std::size_t k = 0; k <= cfg.steps; ++k) {
      const double t = static_cast<double>(k) * dt;
      const AuxValues a = aux_exact_flow(a0, w, t);
      const double lr = lax_residual_at(a, aux_exact_flow(a0, w, t + kLaxStep),
                                        aux_exact_flow(a0, w, t - kLaxStep), c, M, kLaxStep);
      rows.push_back({t, exact_flow(s0, t), a, mu_from_aux(a, c), lr});
    }
    return rows;
  }

  const auto phase = rk4_integrate(s0, cfg.t_end, cfg.steps);
  auto rate = [w](const StateVec<4>& y) {
    const AuxValues r = aux_rate({y[0], y[1], y[2], y[3]}, w);
    return StateVec<4>{r.a_plus, r.a_minus, r.d_plus, r.d_minus};
  };
  rk4_sweep<4>(StateVec<4>{a0.a_plus, a0.a_minus, a0.d_plus, a0.d_minus}, cfg.t_end, cfg.steps,
               rate, [&](std::size_t k, double t, const StateVec<4>& y) {
                 const AuxValues a{y[0], y[1], y[2], y[3]};
                 const auto fwd = rk4_step<4>(y, kLaxStep, rate);
                 const auto bwd = rk4_step<4>(y, -kLaxStep, rate);
                 const double lr =
                     lax_residual_at(a, {fwd[0], fwd[1], fwd[2], fwd[3]},
                                     {bwd[0], bwd[1], bwd[2], bwd[3]}, c, M, kLaxStep);
                 rows.push_back({t, phase[k].state, a, mu_from_aux(a, c), lr});
               });
  return rows;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, Integrator integrator, std::ostream& out,
                 std::ostream& err) {
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    err << "simulate: " << e.what() << '\n';
    return kBadInput;
  }
  const CParams c = resolve_c(cfg);

  std::vector<Row> rows;
  try {
    rows = simulate_rows(cfg, c, integrator);
  } catch (const IntegrationError& e) {
    err << "simulate: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::invalid_argument& e) {
    err << "simulate: " << e.what() << '\n';
    return kCheckFailed;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!row_finite(rows[k])) {
      err << "simulate: non-finite value in sample " << k << '\n';
      return kCheckFailed;
    }
  }

  std::ostringstream buf;
  if (cfg.format == OutputFormat::kCsv) {
    buf << csv_header() << '\n';
    for (const Row& r : rows) {
      buf << fmt17(r.t) << ',' << fmt17(r.state.q) << ',' << fmt17(r.state.p) << ','
          << fmt17(hamiltonian(r.state)) << ',' << fmt17(r.aux.a_plus) << ','
          << fmt17(r.aux.a_minus) << ',' << fmt17(r.aux.d_plus) << ',' << fmt17(r.aux.d_minus);
      for (double x : r.mu.mu) buf << ',' << fmt17(x);
      buf << ',' << fmt17(r.lax_residual) << '\n';
    }
  } else {
    json samples = json::array();
    for (const Row& r : rows) {
      json s = json::object();
      s["t"] = r.t;
      s["q"] = r.state.q;
      s["p"] = r.state.p;
      s["H"] = hamiltonian(r.state);
      s["Aplus"] = r.aux.a_plus;
      s["Aminus"] = r.aux.a_minus;
      s["Dplus"] = r.aux.d_plus;
      s["Dminus"] = r.aux.d_minus;
      for (std::size_t a = 0; a < 8; ++a) s[StructureConstants2::labels()[a]] = r.mu.mu[a];
      s["lax_residual"] = r.lax_residual;
      samples.push_back(std::move(s));
    }
    json doc = {{"c", c.c}, {"samples", std::move(samples)}};
    buf << doc.dump(1) << '\n';
  }

  if (cfg.out.empty() || cfg.out == "-") {
    out << buf.str();
    return kOk;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) {
    err << "simulate: cannot write '" << cfg.out << "'\n";
    return kBadInput;
  }
  file << buf.str();
  file.close();
  if (!file) {
    err << "simulate: failed writing '" << cfg.out << "'\n";
    return kBadInput;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

VerificationReport build_verification_report(const RunConfig& cfg) {
  validate(cfg);
  const CParams c = resolve_c(cfg);
  const OscState s0(cfg.q0, cfg.p0, cfg.omega);

  VerificationReport report = verify_lax_representation(c, s0, cfg.t_end, cfg.steps, cfg.tol);
  report.config.seed = cfg.seed;

  double g_max = 0.0;
  const double dt = cfg.t_end / static_cast<double>(cfg.steps);
  for (std::size_t k = 0; k <= cfg.steps; ++k) {
    g_max = std::max(g_max, g_residuals(s0, static_cast<double>(k) * dt, kGStep).max_abs());
  }
  report.add("g_residuals", g_max, kGTol);

  double pde_max = 0.0;
  for (std::size_t k = 0; k < kPdeProbes; ++k) {
    const double t = cfg.t_end * static_cast<double>(k) / static_cast<double>(kPdeProbes);
    try {
      pde_max = std::max(pde_max, pde_residual(c, exact_flow(s0, t), kPdeStep));
    } catch (const BranchLocusError&) {
      // pointwise branch is not smooth here; probe the next state
    }
  }
  report.add("pde_residual", pde_max, kPdeTol);

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double gamma_max = 0.0;
  for (std::size_t k = 0; k < kGammaDraws; ++k) {
    const AuxValues aux{u(rng), u(rng), u(rng), u(rng)};
    const AuxValues rate{u(rng), u(rng), u(rng), u(rng)};
    const auto lhs = lax_ode_residual(aux, rate, c, cfg.omega);
    const auto rhs = gamma_contraction(g_from_rates(aux, rate, cfg.omega), c);
    for (std::size_t a = 0; a < 8; ++a) gamma_max = std::max(gamma_max, std::abs(lhs[a] - rhs[a]));
  }
  report.add("gamma_identity", gamma_max, kGammaTol);
  return report;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  VerificationReport report;
  try {
    report = build_verification_report(cfg);
  } catch (const ConfigError& e) {
    err << "verify: " << e.what() << '\n';
    return kBadInput;
  } catch (const IntegrationError& e) {
    err << "verify: " << e.what() << '\n';
    return kCheckFailed;
  }

  json checks = json::array();
  for (const Check& ch : report.checks) {
    checks.push_back({{"name", ch.name},
                      {"max_residual", ch.max_residual},
                      {"tolerance", ch.tolerance},
                      {"pass", ch.pass}});
  }
  const ReportConfig& rc = report.config;
  json config = {{"omega", rc.omega}, {"q0", rc.q0},       {"p0", rc.p0},
                 {"c", rc.c.c},       {"t_end", rc.t_end}, {"steps", rc.steps},
                 {"tol", rc.tol},     {"seed", rc.seed}};
  out << json{{"checks", std::move(checks)}, {"config", std::move(config)}}.dump(2) << '\n';
  return report.passed() ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// dispatch

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Flags that may override a config file, bound to scratch values.
struct RunFlags {
  double omega = 0, q0 = 0, p0 = 0, t_end = 0, tol = 0;
  std::vector<double> c;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::string out, format, config;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bindings;

  void attach(CLI::App* app) {
    auto bind = [&](CLI::Option* opt, std::function<void(RunConfig&)> apply) {
      bindings.emplace_back(opt, std::move(apply));
    };
    bind(app->add_option("--omega", omega, "angular frequency (> 0)"),
         [this](RunConfig& r) { r.omega = omega; });
    bind(app->add_option("--q0", q0, "initial position"), [this](RunConfig& r) { r.q0 = q0; });
    bind(app->add_option("--p0", p0, "initial momentum"), [this](RunConfig& r) { r.p0 = p0; });
    bind(app->add_option("--c", c, "the eight parameters C1..C8")->expected(8),
         [this](RunConfig& r) {
           std::array<double, 8> a{};
           std::copy(c.begin(), c.end(), a.begin());
           r.c = a;
         });
    bind(app->add_option("--t-end", t_end, "final time"),
         [this](RunConfig& r) { r.t_end = t_end; });
    bind(app->add_option("--steps", steps, "number of time steps (>= 2)"),
         [this](RunConfig& r) { r.steps = steps; });
    bind(app->add_option("--tol", tol, "tolerance for the trajectory checks"),
         [this](RunConfig& r) { r.tol = tol; });
    bind(app->add_option("--seed", seed, "seed for C when --c is not given"),
         [this](RunConfig& r) { r.seed = seed; });
    bind(app->add_option("--out", out, "output file (default stdout)"),
         [this](RunConfig& r) { r.out = out; });
    bind(app->add_option("--format", format, "csv or json")
             ->check(CLI::IsMember({"csv", "json"})),
         [this](RunConfig& r) {
           r.format = format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
         });
  }

  RunConfig resolve(const std::string& config_path) const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config(read_file(config_path));
    for (const auto& [opt, apply] : bindings) {
      if (opt->count() > 0) apply(cfg);
    }
    return cfg;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operadic Lax representation of the harmonic oscillator", "oplax"};
  app.require_subcommand(1);

  AxiomsOptions ax;
  CLI::App* axioms = app.add_subcommand("axioms", "Run seeded operad axiom property suites");
  axioms->add_option("--trials", ax.trials, "random draws per suite");
  axioms->add_option("--dim-max", ax.dim_max, "largest dimension of V, in [1, 3]");
  axioms->add_option("--deg-max", ax.deg_max, "largest operation degree, in [1, 3]");
  axioms->add_option("--tol", ax.tol, "normalized residual tolerance");
  axioms->add_option("--seed", ax.seed, "RNG seed");

  RunFlags sim_flags;
  std::string sim_config;
  std::string integrator = "exact";
  CLI::App* simulate = app.add_subcommand("simulate", "Write a sampled trajectory with mu(t)");
  simulate->add_option("--config", sim_config, "JSON config file; flags override it");
  simulate->add_option("--integrator", integrator, "exact or rk4")
      ->check(CLI::IsMember({"exact", "rk4"}));
  sim_flags.attach(simulate);

  RunFlags ver_flags;
  std::string ver_config;
  CLI::App* verify = app.add_subcommand("verify", "Run the verification report for a config");
  verify->add_option("config", ver_config, "JSON config file")->required();
  ver_flags.attach(verify);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n'
        << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kBadInput;
  }

  try {
    if (axioms->parsed()) return cmd_axioms(ax, out, err);
    if (simulate->parsed()) {
      return cmd_simulate(sim_flags.resolve(sim_config),
                          integrator == "rk4" ? Integrator::kRk4 : Integrator::kExact, out, err);
    }
    return cmd_verify(ver_flags.resolve(ver_config), out, err);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace oplax::cli
