#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "shiftkl/bounds.hpp"
#include "shiftkl/chains.hpp"
#include "shiftkl/cli.hpp"
#include "shiftkl/errors.hpp"
#include "shiftkl/gauss.hpp"
#include "shiftkl/numeric.hpp"
#include "shiftkl/schemes.hpp"
#include "shiftkl/verify.hpp"

namespace shiftkl::cli {

namespace {

// Writes the CSV to --out when given, else to the main stream.
void emit(const CommandContext& ctx, const CsvTable& table) {
  const std::string hash = ctx.config.hash_hex(ctx.command);
  if (ctx.out_path) {
    std::ofstream f(*ctx.out_path);
    if (!f) throw InputError("cannot write output file '" + *ctx.out_path + "'");
    table.write(f, hash);
  } else {
    table.write(*ctx.out, hash);
  }
}

// Summary lines go to the main stream only when the CSV went to a file.
std::ostream& summary(const CommandContext& ctx) {
  static std::ostringstream sink;
  if (ctx.out_path) return *ctx.out;
  sink.str("");
  return sink;
}

std::string schedule_hash(const ShiftSchedule& s) {
  std::uint64_t h = fnv1a("schedule");
  for (double e : s.eta) h = fnv1a(format_number(e) + ";", h);
  return hex64(h);
}

std::vector<long> step_counts(const Config& cfg) {
  std::vector<long> out;
  for (double v : cfg.numbers("N")) {
    if (v != std::floor(v) || v < 1) throw InputError("key 'N': expected positive integers");
    out.push_back(static_cast<long>(v));
  }
  return out;
}

void add_bound_row(CsvTable& t, long N, const std::string& name, const BoundReport& r) {
  t.row().add(N).add(name).add(std::string(to_string(r.mode))).add(r.value).add(r.constant_used);
  if (r.schedule && r.trace) {
    t.add(schedule_hash(*r.schedule)).add(r.trace->distances.back());
  } else {
    t.add(std::string()).add(std::string());
  }
}

struct Quadratic {
  PotentialSpec pot;
  Eigen::VectorXd mode;
};

Quadratic diagonal_quadratic(const Config& cfg) {
  const std::vector<double> prec = cfg.has("precision") ? cfg.numbers("precision") : std::vector<double>{1.0};
  std::vector<double> mode = cfg.has("mode") ? cfg.numbers("mode") : std::vector<double>(prec.size(), 0.0);
  if (mode.size() != prec.size()) throw InputError("keys 'precision' and 'mode' must have the same length");
  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(prec.data(), static_cast<Eigen::Index>(prec.size()));
  Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(mode.data(), static_cast<Eigen::Index>(mode.size()));
  return {PotentialSpec::quadratic_potential(p.asDiagonal().toDenseMatrix(), m), m};
}

Eigen::VectorXd vector_key(const Config& cfg, const std::string& key, Eigen::Index d, double fallback) {
  if (!cfg.has(key)) return Eigen::VectorXd::Constant(d, fallback);
  const std::vector<double> v = cfg.numbers(key);
  if (v.size() == 1) return Eigen::VectorXd::Constant(d, v[0]);
  if (static_cast<Eigen::Index>(v.size()) != d) throw InputError("key '" + key + "': length must be 1 or " + std::to_string(d));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), d);
}

}  // namespace

int cmd_bound(CommandContext& ctx) {
  const Config& cfg = ctx.config;
  const std::string preset = cfg.text_or("preset", "");
  CsvTable t({"N", "bound", "mode", "value", "constant_used", "schedule_hash", "d_last"});
  if (preset == "toy") {
    cfg.restrict_to({"preset", "N", "w", "sigma", "seed", "constant"}, "bound");
    const double w = cfg.number("w");
    const double sigma = cfg.number("sigma");
    const KernelAssumptions simple = toy_simple_assumptions(w, sigma);
    const KernelAssumptions cert = toy_certified_assumptions(w, sigma);
    for (long N : step_counts(cfg)) {
      t.row().add(N).add(std::string("exact_kl")).add(std::string("exact")).add(toy_exact_kl(N, w, sigma)).add(1.0);
      t.add(std::string()).add(std::string());
      add_bound_row(t, N, "kl_simple", kl_simple_bound(simple, N, 0.0));
      add_bound_row(t, N, "kl_framework", kl_framework_bound(cert, N, 0.0, BoundMode::Certified));
      summary(ctx) << "N=" << N << " exact_kl=" << format_number(toy_exact_kl(N, w, sigma))
                   << " kl_simple=" << format_number(kl_simple_bound(simple, N, 0.0).value) << '\n';
    }
    emit(ctx, t);
    return 0;
  }
  if (!preset.empty()) throw InputError("key 'preset': unknown preset '" + preset + "' (expected toy)");
  cfg.restrict_to({"preset", "L", "gamma", "c", "c_prime", "b_bar", "e_weak", "e_strong", "a", "N", "w2_init",
                   "seed", "constant"},
                  "bound");
  KernelAssumptions k;
  k.L = cfg.number("L");
  k.c = cfg.number("c");
  k.c_prime = cfg.number("c_prime");
  k.gamma = cfg.number_or("gamma", 0.0);
  k.b_bar = cfg.number_or("b_bar", 0.0);
  k.e_weak = cfg.number_or("e_weak", 0.0);
  k.e_strong = cfg.number_or("e_strong", 0.0);
  k.a = cfg.number_or("a", k.e_strong);
  k.implied_constant = cfg.number_or("constant", 1.0);
  const double w2_init = cfg.number_or("w2_init", 0.0);
  for (long N : step_counts(cfg)) {
    if (k.L <= 1.0) add_bound_row(t, N, "kl_simple", kl_simple_bound(k, N, w2_init));
    add_bound_row(t, N, "kl_framework", kl_framework_bound(k, N, w2_init, BoundMode::ClosedForm));
    if (k.L >= 0.5 && k.L <= 2.0) {
      const BoundReport cert = kl_framework_bound(k, N, w2_init, BoundMode::Certified);
      add_bound_row(t, N, "kl_framework", cert);
      summary(ctx) << "N=" << N << " certified=" << format_number(cert.value) << '\n';
    }
    add_bound_row(t, N, "w2_framework", w2_framework_bound(k, N, w2_init));
  }
  emit(ctx, t);
  return 0;
}

int cmd_shifts(CommandContext& ctx) {
  const Config& cfg = ctx.config;
  cfg.restrict_to({"N", "L", "a", "a0", "a1", "d0", "c", "c_prime", "b", "method", "seed", "constant"}, "shifts");
  ShiftProblem pb;
  pb.N = cfg.integer("N");
  pb.L = cfg.number_or("L", 1.0);
  pb.d0 = cfg.number("d0");
  pb.c = cfg.number_or("c", 1.0);
  pb.c_prime = cfg.number_or("c_prime", pb.c);
  pb.b = cfg.number_or("b", 0.0);
  if (cfg.has("a0") || cfg.has("a1")) {
    if (cfg.has("a")) throw InputError("key 'a' conflicts with 'a0'/'a1'");
    pb.error = WeakAwareError{cfg.number("a0"), cfg.number("a1")};
  } else {
    pb.error = SimpleError{cfg.number("a")};
  }
  pb.validate();
  const std::string method = cfg.text_or("method", "optimal");
  ShiftSchedule schedule;
  if (method == "optimal") {
    if (pb.weak_aware()) throw InputError("method 'optimal' needs a single error level 'a'");
    const double a = std::get<SimpleError>(pb.error).a;
    schedule = (pb.L == 1.0) ? optimal_shifts_L1(pb.N, a, pb.d0).schedule
                             : optimal_shifts_Lgeneral(pb.N, a, pb.d0, pb.L).schedule;
  } else if (method == "three_phase") {
    const double a0 = pb.weak_aware() ? std::get<WeakAwareError>(pb.error).a0 : std::get<SimpleError>(pb.error).a;
    const double a1 = pb.weak_aware() ? std::get<WeakAwareError>(pb.error).a1 : pb.L * a0;
    schedule = three_phase_schedule(pb.N, pb.L, a0, a1);
  } else if (method == "dp") {
    schedule = dp_oracle(pb).schedule;
  } else {
    throw InputError("key 'method': expected optimal, three_phase or dp, got '" + method + "'");
  }
  const ObjectiveTrace tr = evaluate_schedule(pb, schedule);
  CsvTable t({"n", "eta", "distance"});
  for (std::size_t n = 0; n < schedule.size(); ++n) t.row().add(static_cast<long>(n)).add(schedule.eta[n]).add(tr.distances[n]);
  emit(ctx, t);
  summary(ctx) << "method=" << method << " objective=" << format_number(tr.total)
               << " schedule_hash=" << schedule_hash(schedule) << '\n';
  return 0;
}

int cmd_plan(CommandContext& ctx) {
  const Config& cfg = ctx.config;
  cfg.restrict_to({"alpha", "beta", "kappa", "zeta0", "zeta1", "d", "eps", "W", "chi2_init", "scheme", "setting",
                   "seed", "constant"},
                  "plan");
  PlanParams p;
  p.alpha = cfg.number_or("alpha", 1.0);
  if (cfg.has("beta") && cfg.has("kappa")) throw InputError("give either 'beta' or 'kappa', not both");
  p.beta = cfg.has("kappa") ? cfg.number("kappa") * p.alpha : cfg.number_or("beta", 1.0);
  p.zeta0 = cfg.number_or("zeta0", 0.0);
  p.zeta1 = cfg.number_or("zeta1", 0.0);
  p.d = cfg.number("d");
  p.eps = cfg.number("eps");
  p.W = cfg.maybe_number("W");
  p.chi2_init = cfg.maybe_number("chi2_init");
  const double constant = cfg.number_or("constant", 1.0);
  std::vector<PlanScheme> schemes{PlanScheme::LMC, PlanScheme::LMC_SMOOTH, PlanScheme::RMLMC};
  std::vector<Setting> settings{Setting::SLC, Setting::WLC, Setting::LSI};
  const std::string s_name = cfg.text_or("scheme", "all"), g_name = cfg.text_or("setting", "all");
  if (s_name != "all") schemes = {plan_scheme_from_string(s_name)};
  if (g_name != "all") settings = {setting_from_string(g_name)};

  CsvTable t({"scheme", "setting", "h", "N", "N_2d", "N_half_eps", "rate_term", "polylog", "initialization"});
  std::ostringstream os;  // printed only once every cell validated
  os << "| scheme | setting | h | N | N(2d) | N(eps/2) | initialization |\n";
  os << "|---|---|---|---|---|---|---|\n";
  for (PlanScheme s : schemes) {
    for (Setting g : settings) {
      const PlanResult r = plan_iterations(g, s, p, constant);
      PlanParams wide = p, fine = p;
      wide.d = 2.0 * p.d;
      fine.eps = 0.5 * p.eps;
      const PlanResult rw = plan_iterations(g, s, wide, constant);
      const PlanResult rf = plan_iterations(g, s, fine, constant);
      t.row().add(std::string(to_string(s))).add(std::string(to_string(g))).add(r.h).add(r.N).add(rw.N).add(rf.N);
      t.add(r.rate_term).add(r.polylog).add(r.assumptions_echo);
      os << "| " << to_string(s) << " | " << to_string(g) << " | " << std::setprecision(6) << r.h << " | " << r.N
         << " | " << rw.N << " | " << rf.N << " | " << r.assumptions_echo << " |\n";
    }
  }
  *ctx.out << os.str();
  if (ctx.out_path) emit(ctx, t);
  return 0;
}

int cmd_sample(CommandContext& ctx) {
  const Config& cfg = ctx.config;
  cfg.restrict_to({"precision", "mode", "scheme", "h", "N", "samples", "seed", "x0", "init_var", "record", "constant"},
                  "sample");
  const Quadratic q = diagonal_quadratic(cfg);
  const Eigen::Index d = q.pot.dimension;
  SamplerConfig sc;
  sc.scheme = scheme_from_string(cfg.text_or("scheme", "lmc"));
  sc.h = cfg.number("h");
  sc.N = cfg.integer("N");
  sc.samples = cfg.integer_or("samples", 1000);
  sc.seed = cfg.unsigned_or("seed", 0);
  const Eigen::VectorXd x0 = vector_key(cfg, "x0", d, 0.0);
  const double init_var = cfg.number_or("init_var", 0.0);
  if (!(init_var >= 0.0)) throw InputError("key 'init_var' must be >= 0");
  const std::string record = cfg.text_or("record", "final");
  if (record != "final" && record != "all") throw InputError("key 'record': expected final or all");
  const Gaussian init(x0, init_var * Eigen::MatrixXd::Identity(d, d));
  const ChainRun run = simulate_chain(q.pot, sc, init, record == "all");

  std::vector<std::string> header{"replica", "step"};
  for (Eigen::Index j = 0; j < d; ++j) header.push_back("coord_" + std::to_string(j));
  CsvTable t(header);
  auto dump = [&](const Eigen::MatrixXd& states, long step) {
    for (Eigen::Index i = 0; i < states.rows(); ++i) {
      t.row().add(static_cast<long>(i)).add(step);
      for (Eigen::Index j = 0; j < d; ++j) t.add(states(i, j));
    }
  };
  if (record == "all") {
    for (std::size_t n = 0; n < run.path.size(); ++n) dump(run.path[n], static_cast<long>(n));
  } else {
    dump(run.final_states, sc.N);
  }
  emit(ctx, t);
  std::ostream& s = summary(ctx);
  s << "mean=" << run.mean.transpose().format(Eigen::IOFormat(8)) << '\n';
  if (run.exact_law) {
    s << "mean_residual=" << format_number(run.mean_residual) << " cov_residual=" << format_number(run.cov_residual)
      << '\n';
  }
  return 0;
}

int cmd_local_errors(CommandContext& ctx) {
  const Config& cfg = ctx.config;
  cfg.restrict_to({"precision", "mode", "scheme", "x", "h", "samples", "seed", "monte_carlo", "inner_steps",
                   "constant"},
                  "local-errors");
  const Quadratic q = diagonal_quadratic(cfg);
  const Scheme scheme = scheme_from_string(cfg.text_or("scheme", "lmc"));
  const Eigen::VectorXd x = vector_key(cfg, "x", q.pot.dimension, 1.0);
  const std::vector<double> hs = cfg.numbers("h");
  const long samples = cfg.integer_or("samples", 100000);
  const std::uint64_t seed = cfg.unsigned_or("seed", 0);
  LocalErrorOptions opts;
  opts.force_monte_carlo = cfg.flag_or("monte_carlo", false);
  opts.inner_steps = cfg.integer_or("inner_steps", 64);
  CsvTable t({"h", "weak", "strong", "weak_stderr", "strong_stderr", "exact", "low_power"});
  std::vector<double> weak, strong;
  for (double h : hs) {
    const LocalErrorEstimate e = estimate_local_errors(q.pot, scheme, x, h, samples, seed, opts);
    t.row().add(h).add(e.weak).add(e.strong).add(e.weak_stderr).add(e.strong_stderr).add(static_cast<long>(e.exact));
    t.add(static_cast<long>(e.low_power));
    weak.push_back(e.weak);
    strong.push_back(e.strong);
  }
  emit(ctx, t);
  if (hs.size() >= 2) {
    summary(ctx) << "weak_slope=" << format_number(loglog_slope(hs, weak))
                 << " strong_slope=" << format_number(loglog_slope(hs, strong)) << '\n';
  }
  return 0;
}

int cmd_verify(CommandContext& ctx) {
  if (ctx.positional.size() != 1) throw InputError("verify expects exactly one suite name");
  ctx.config.restrict_to({"seed", "constant"}, "verify");
  const std::string& suite = ctx.positional.front();
  const SuiteReport r = run_verify_suite(suite, ctx.config.unsigned_or("seed", 0));
  CsvTable t({"suite", "check", "observed", "reference", "tolerance", "passed"});
  for (const Check& c : r.checks) {
    t.row().add(suite).add(c.name).add(c.observed).add(c.reference).add(c.tolerance).add(static_cast<long>(c.passed));
  }
  emit(ctx, t);
  summary(ctx) << "suite=" << suite << " checks=" << r.checks.size() << " failures=" << r.failures() << '\n';
  return r.all_passed() ? 0 : 1;
}

}  // namespace shiftkl::cli
