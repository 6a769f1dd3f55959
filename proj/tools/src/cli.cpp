#include "reslab_cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "reslab/errors.hpp"
#include "reslab/evolution.hpp"
#include "reslab/oscillatory.hpp"
#include "reslab/parallel.hpp"
#include "reslab_cli/config.hpp"
#include "reslab_cli/manifest.hpp"

namespace reslab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string command;
  std::string config_path;
  std::string out_dir = "reslab-out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  int max_mode = 50;
  std::optional<std::string> gate;
  bool resume = false;
};

// %.17g round-trips every double.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      s_ << (first ? "" : ",") << h;
      first = false;
    }
    s_ << '\n';
  }
  template <class... T>
  void row(const T&... v) {
    bool first = true;
    ((s_ << (first ? "" : ",") << cell(v), first = false), ...);
    s_ << '\n';
  }
  std::string str() const { return s_.str(); }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(const char* v) { return v; }
  static std::string cell(const std::string& v) { return v; }
  std::ostringstream s_;
};

struct Context {
  const Options& opt;
  ValidatedConfig cfg;
  RunManifest manifest;
  std::ostream& out;
};

// ---- subcommands -----------------------------------------------------------

void cmd_enumerate(Context& c) {
  const int mm = c.opt.max_mode;
  const Gate gate = c.cfg.config.gate;
  const auto triples = enumerate(mm, c.cfg.config.massless);
  Csv t({"m", "n", "p"});
  for (const auto& x : triples) t.row(x.m, x.n, x.p);
  c.manifest.write_output("triples.csv", t.str());

  Csv it({"p", "m", "n", "alpha", "beta", "lambda", "coupling"});
  std::size_t count = 0;
  if (!c.cfg.config.massless) {
    for (int p = 0; p <= mm; ++p)
      for (const auto& r : interactions_for_output(p, mm, gate)) {
        it.row(r.p, r.m, r.n, r.alpha, r.beta, r.lambda, r.coupling);
        ++count;
      }
  }
  c.manifest.write_output("interactions.csv", it.str());

  const json summary{{"max_mode", mm},
                     {"gate", to_string(gate)},
                     {"massless", c.cfg.config.massless},
                     {"triples", triples.size()},
                     {"interactions", count},
                     {"gate_disagreements", gate_disagreements(mm).size()}};
  c.manifest.write_output("summary.json", summary.dump(2) + "\n");
  c.out << triples.size() << " resonant triples up to mode " << mm << ", " << count << " interactions ("
        << to_string(gate) << " gate)\n";
}

void cmd_phase_report(Context& c) {
  const int mm = c.opt.max_mode;
  Csv t({"m", "n", "p", "alpha", "beta", "tag_printed", "tag_sqrt", "slope", "lambda", "d2_at_xi1"});
  std::map<std::string, int> tally;
  for (const auto& x : enumerate(mm))
    for (int a : {-1, 1})
      for (int b : {-1, 1}) {
        const PhaseParams q{x.m, x.n, x.p, a, b};
        const auto cp = classify(q, Gate::AsPrinted);
        const auto cs = classify(q, Gate::SqrtCharacterization);
        const auto& chosen = c.cfg.config.gate == Gate::AsPrinted ? cp : cs;
        ++tally[to_string(chosen.tag)];
        const bool degenerate = x.m == x.n && a * b == -1;
        const double lam = degenerate ? NAN : lambda_coeff(x.m, x.n, a, b);
        const double d2 = degenerate ? NAN : d2_at_stationary(q, 1.0);
        t.row(x.m, x.n, x.p, a, b, to_string(cp.tag), to_string(cs.tag), chosen.slope ? *chosen.slope : NAN, lam, d2);
      }
  c.manifest.write_output("phase_report.csv", t.str());
  json summary{{"max_mode", mm}, {"gate", to_string(c.cfg.config.gate)}, {"tags", tally}};
  c.manifest.write_output("summary.json", summary.dump(2) + "\n");
  for (const auto& [k, v] : tally) c.out << k << ": " << v << "\n";
}

void cmd_stat_phase_check(Context& c) {
  constexpr double pi = std::numbers::pi;
  Csv t({"t", "quadrature_re", "quadrature_im", "exact_re", "exact_im", "error_exact", "remainder_leading"});
  double worst = 0.0;
  for (double tt : {10.0, 100.0, 1000.0, 10000.0}) {
    OscIntegralSpec s;
    s.psi = [](double x) { return x * x; };
    s.dpsi = [](double x) { return 2.0 * x; };
    s.amplitude = [](double x) { return cplx(std::exp(-x * x)); };
    s.cutoff = {0.0, 8.0, CutoffShape::Indicator};
    s.t = tt;
    const cplx q = quadrature_oscillatory(s);
    const cplx exact = std::sqrt(cplx(pi) / cplx(1.0, -tt));
    const cplx lead = stationary_phase_leading(s, 0.0, 2.0);
    worst = std::max(worst, std::abs(q - exact));
    t.row(tt, q.real(), q.imag(), exact.real(), exact.imag(), std::abs(q - exact), std::abs(q - lead));
  }
  c.manifest.write_output("stat_phase.csv", t.str());
  c.manifest.write_output("summary.json", json{{"max_error_exact", worst}}.dump(2) + "\n");
  c.out << "Fresnel-Gaussian worst error " << num(worst) << "\n";
}

void cmd_triple_table(Context& c) {
  const TripleProductTable table(c.opt.max_mode);
  Csv t({"m", "n", "p", "M"});
  for (const auto& r : table.rows()) t.row(r.m, r.n, r.p, r.value);
  c.manifest.write_output("triple_table.csv", t.str());
  c.out << table.rows().size() << " rows up to mode " << c.opt.max_mode << "\n";
}

long steps_for(double span, double dt) { return std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9))); }

void cmd_simulate_full(Context& c) {
  const SimConfig& cfg = c.cfg.config;
  const Grid grid(cfg.n_x1, cfg.length_x1);
  const FullSolver solver(grid, cfg.P, {cfg.nonlinear, cfg.blowup_ceiling});
  auto f = init_profile(cfg);
  Csv t({"t", "tilde_HN_f", "S_MN_f"});
  auto rec = [&] {
    const auto n = composite_norms(f, grid, cfg.M, cfg.N, f.time);
    t.row(f.time, n.tilde_HN, n.S_MN_t);
  };
  rec();
  const long steps = steps_for(cfg.t_end, cfg.dt);
  const double h = cfg.t_end / steps;
  for (long i = 1; i <= steps; ++i) {
    solver.step(f, h);
    f.time = i * h;
    if (i % cfg.output_every == 0 || i == steps) rec();
  }
  c.manifest.write_output("trajectory.csv", t.str());
  write_snapshot((c.manifest.out_dir() / "final_f.fhs").string(), f, grid);
  c.manifest.add_output("final_f.fhs");
  c.out << "full evolution to t = " << num(f.time) << " in " << steps << " steps\n";
}

void cmd_simulate_resonant(Context& c) {
  const SimConfig& cfg = c.cfg.config;
  const Grid grid(cfg.n_x1, cfg.length_x1);
  const FullSolver solver(grid, cfg.P, {cfg.nonlinear, cfg.blowup_ceiling});
  const ResonantSystem res(grid, cfg.P, cfg.gate, {cfg.resonant_alpha_beta, cfg.blowup_ceiling});
  auto g = init_profile(cfg);
  const long pre = steps_for(cfg.s0, cfg.dt);
  for (long i = 1; i <= pre; ++i) {
    solver.step(g, cfg.s0 / pre);
    g.time = i == pre ? cfg.s0 : i * (cfg.s0 / pre);
  }
  Csv t({"t", "tilde_HN_g", "S_MN_g"});
  auto rec = [&] {
    const auto n = composite_norms(g, grid, cfg.M, cfg.N, g.time);
    t.row(g.time, n.tilde_HN, n.S_MN_t);
  };
  rec();
  const long steps = cfg.t_end > cfg.s0 ? steps_for(cfg.t_end - cfg.s0, cfg.dt) : 0;
  const double h = steps ? (cfg.t_end - cfg.s0) / steps : 0.0;
  for (long i = 1; i <= steps; ++i) {
    res.step(g, h);
    g.time = cfg.s0 + i * h;
    if (i % cfg.output_every == 0 || i == steps) rec();
  }
  c.manifest.write_output("trajectory.csv", t.str());
  write_snapshot((c.manifest.out_dir() / "final_g.fhs").string(), g, grid);
  c.manifest.add_output("final_g.fhs");
  c.manifest.set("interactions", res.interaction_count());
  c.out << "resonant evolution from s0 = " << num(cfg.s0) << " to t = " << num(g.time) << ", "
        << res.interaction_count() << " interactions\n";
}

void cmd_compare(Context& c) {
  const SimConfig& cfg = c.cfg.config;
  CompareOptions co;
  if (cfg.checkpoint_every > 0 || c.opt.resume) co.checkpoint_dir = (c.manifest.out_dir() / "checkpoints").string();
  co.resume = c.opt.resume;
  const auto r = run_compare(cfg, co);
  Csv t({"t", "tilde_HN_f", "S_MN_f", "S_MN_g", "diff_HM0L2"});
  for (std::size_t i = 0; i < r.times.size(); ++i)
    t.row(r.times[i], r.norms_f[i].tilde_HN, r.norms_f[i].S_MN_t, r.norms_g[i].S_MN_t, r.diff_norms[i]);
  c.manifest.write_output("trajectory.csv", t.str());
  const double diff = r.diff_norms.back(), var = r.variation.back();
  const json summary{{"t_end", r.times.back()},
                     {"diff_HM0L2", diff},
                     {"variation_f", var},
                     {"diff_over_variation", var > 0.0 ? json(diff / var) : json(nullptr)}};
  c.manifest.write_output("summary.json", summary.dump(2) + "\n");
  c.out << "t = " << num(r.times.back()) << ": |f - g| = " << num(diff) << ", variation of f = " << num(var) << "\n";
}

using Handler = void (*)(Context&);

int resolve_threads(const Options& opt, std::ostream& err) {
  if (opt.threads) return *opt.threads;
  if (const char* env = std::getenv("RESLAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) {
      err << "error: RESLAB_THREADS='" << env << "' is not a positive integer\n";
      return -1;
    }
    return static_cast<int>(v);
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Spectral simulation and resonance analysis for the trapped quadratic Klein-Gordon equation", "reslab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--out-dir", opt.out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", opt.seed, "overrides the config seed");
  app.add_option("--threads", opt.threads, "worker threads (fallback: RESLAB_THREADS)")->check(CLI::Range(1, 4096));
  app.add_option("--max-mode", opt.max_mode, "largest Hermite mode for enumerate, phase-report, triple-table")
      ->capture_default_str()
      ->check(CLI::Range(0, 1 << 20));
  app.add_option("--gate", opt.gate, "resonance gate: sqrt or printed (overrides the config)");

  const std::vector<std::pair<const char*, const char*>> subs{
      {"enumerate", "resonant triples and interaction lists"},
      {"phase-report", "classification of every sign pair on the resonant triples"},
      {"stat-phase-check", "Fresnel-Gaussian quadrature against the exact value"},
      {"simulate-full", "full profile evolution"},
      {"simulate-resonant", "resonant system from s0"},
      {"compare", "full and resonant side by side"},
      {"triple-table", "Hermite triple products"},
  };
  for (const auto& [name, help] : subs) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&opt, n = std::string(name)] { opt.command = n; });
    if (std::string(name) == "compare") s->add_flag("--resume", opt.resume, "continue from out-dir/checkpoints");
  }

  if (argc > 1 && argv[1][0] != '-') {
    bool known = false;
    for (const auto& sub : subs) known = known || std::string(argv[1]) == sub.first;
    if (!known) {
      err << "error: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
      return kUsage;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  const int threads = resolve_threads(opt, err);
  if (threads < 0) return kConfigError;
  if (threads > 0) set_thread_count(threads);

  const std::map<std::string, Handler> handlers{
      {"enumerate", cmd_enumerate},           {"phase-report", cmd_phase_report},
      {"stat-phase-check", cmd_stat_phase_check}, {"simulate-full", cmd_simulate_full},
      {"simulate-resonant", cmd_simulate_resonant}, {"compare", cmd_compare},
      {"triple-table", cmd_triple_table},
  };

  const auto t0 = std::chrono::steady_clock::now();
  try {
    ValidatedConfig cfg;
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
    if (opt.seed) cfg.config.seed = *opt.seed;
    if (opt.gate) {
      try {
        cfg.config.gate = parse_gate(*opt.gate);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("--gate: ") + e.what());
      }
    }
    for (const auto& w : cfg.warnings) err << "warning: " << w.pointer << ": " << w.message << "\n";

    Context ctx{opt, cfg, RunManifest(opt.command, opt.out_dir), out};
    json cj = config_to_json(cfg.config);
    if (opt.command == "enumerate" || opt.command == "phase-report" || opt.command == "triple-table")
      cj["max_mode"] = opt.max_mode;
    ctx.manifest.set_config(cj);
    if (!opt.config_path.empty()) ctx.manifest.add_input("config", opt.config_path);
    for (const auto& w : cfg.warnings) ctx.manifest.add_warning(w.pointer + ": " + w.message);
    ctx.manifest.set("threads", thread_count());
    handlers.at(opt.command)(ctx);
    ctx.manifest.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& i : e.issues()) err << "  at " << (i.pointer.empty() ? "/" : i.pointer) << ": " << i.message << "\n";
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "error: invalid parameters: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace reslab::cli
