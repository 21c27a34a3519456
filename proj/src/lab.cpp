#include "wetting/lab.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "wetting/config.hpp"
#include "wetting/error.hpp"
#include "wetting/exact.hpp"
#include "wetting/graphical.hpp"
#include "wetting/io.hpp"
#include "wetting/rng.hpp"
#include "wetting/thermo.hpp"

namespace wetting {

namespace {

namespace fs = std::filesystem;

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"verify-exact", "exact-oracle inequality and identity suites on the configured box"},
    {"verify-graphical", "random-cluster and Edwards-Sokal suites on the configured box"},
    {"snapshot", "final configuration of one heat-bath run as PGM"},
    {"profile", "magnetization profile along the wall normal"},
    {"tau-scan", "wall free energy along a lambda grid"},
    {"lambda-c", "gap-integrand scan over a box ladder"},
    {"figures", "wall-layer snapshots above and below the wetting point"}};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Oracle memoization: exact-only artifacts keyed by the command and the
// resolved config minus the output block.
class Cache {
 public:
  Cache(const ExperimentConfig& cfg) {
    const char* dir = std::getenv("WETTING_LAB_CACHE");
    if (!dir || !*dir) return;
    ExperimentConfig key = cfg;
    key.output = OutputConfig{};
    dir_ = dir;
    key_ = fnv1a(render_config(key));
  }

  std::string get_or(const std::string& artifact, const std::function<std::string()>& compute) {
    if (dir_.empty()) return compute();
    char name[64];
    std::snprintf(name, sizeof name, "%016llx.", static_cast<unsigned long long>(key_));
    const fs::path p = dir_ / (name + artifact);
    if (fs::exists(p)) return read_file(p);
    std::string s = compute();
    write_atomic(p, s);
    return s;
  }

 private:
  fs::path dir_;
  std::uint64_t key_ = 0;
};

SweepOptions sweep_options(const RunConfig& run) {
  SweepOptions o;
  o.kind = run.update == "metropolis" ? UpdateKind::metropolis : UpdateKind::heat_bath;
  o.order = run.order == "raster" ? SiteOrder::raster : run.order == "random" ? SiteOrder::random : SiteOrder::checkerboard;
  return o;
}

Schedule schedule(const RunConfig& run) { return Schedule{run.sweeps, run.burn_in, run.thin}; }

Estimator estimator(const ExperimentConfig& cfg) {
  Estimator e = cfg.scan.estimator == "mc" ? Estimator::monte_carlo(schedule(cfg.run), cfg.run.seed)
                                           : Estimator::exact_oracle();
  e.sweep = sweep_options(cfg.run);
  return e;
}

double uniform_J(const ExperimentConfig& cfg) {
  const auto* u = std::get_if<CouplingSpec::Uniform>(&cfg.model.coupling.variant());
  if (!u) throw ConfigError(0, "model.coupling", "this command needs a uniform coupling");
  return u->J;
}

void require_semi_box(const ExperimentConfig& cfg) {
  if (cfg.model.region.kind != Region::Kind::semi_box)
    throw ConfigError(0, "model.region", "this command needs a semi_box region");
}

FieldPath field_path(const ExperimentConfig& cfg) {
  return cfg.scan.path == "wall" ? FieldPath::wall_only : FieldPath::decay;
}

struct Context {
  ExperimentConfig cfg;
  fs::path out_dir;
  int jobs = 1;
  std::ostream& out;
  bool csv() const { return has("csv"); }
  bool pgm() const { return has("pgm"); }
  bool has(const std::string& f) const {
    for (const auto& x : cfg.output.formats)
      if (x == f) return true;
    return false;
  }
  void write(const std::string& name, const std::string& content) const {
    write_atomic(out_dir / name, content);
    out << "wrote " << (out_dir / name).string() << "\n";
  }
};

std::string report_csv(const std::vector<InequalityReport>& reports) {
  CsvTable t({"suite", "checks", "violations", "worst_margin", "passed", "witness"});
  for (const auto& r : reports)
    t.row().add(r.name).add(r.checks).add(r.violations).add(r.worst_margin).add(r.passed() ? "true" : "false").add(r.witness);
  return t.str();
}

int finish_report(const Context& ctx, const std::string& file, const std::string& csv) {
  ctx.write(file, csv);
  // Verdict from the written report, so a cache hit reports the same outcome.
  bool ok = true;
  std::size_t rows = 0;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    ++rows;
    const bool passed = line.find(",true,") != std::string::npos;
    ok = ok && passed;
    ctx.out << (passed ? "PASS " : "FAIL ") << line.substr(0, line.find(',')) << "\n";
  }
  ctx.out << (ok ? "all " : "failures among ") << rows << " suites\n";
  return ok ? kExitOk : kExitVerification;
}

// Margins are tolerance minus error, so no extra slack.
InequalityReport bound_report(const std::string& name) {
  InequalityReport r;
  r.name = name;
  r.slack = 0.0;
  return r;
}

int verify_exact(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  Cache cache(cfg);
  const std::string csv = cache.get_or("verify_exact.csv", [&] {
    const ModelInstance inst = cfg.instance();
    std::vector<InequalityReport> reports;
    reports.push_back(check_fkg(inst, 200, cfg.run.seed));
    reports.push_back(check_dvi(inst));
    const auto sites = sites_of(inst.region);
    std::vector<double> h_grid;
    for (int k = 0; k <= 8; ++k) h_grid.push_back(0.25 * k);
    auto gap = check_gap_monotone_in_field(inst, sites.front(), sites.back(), h_grid).report;
    gap.name = "gap_monotone_in_field";
    reports.push_back(gap);
    if (cfg.model.region.kind == Region::Kind::semi_box) {
      const std::vector<double> J_grid{0.3, 0.5, 1.0};
      const auto grid = cfg.lambda_grid();
      reports.push_back(check_tau_concavity_and_monotonicity(cfg.model.region.n, J_grid, grid, cfg.scan.delta,
                                                             cfg.model.beta, cfg.model.d, cfg.model.region.m));
      if (std::holds_alternative<CouplingSpec::Uniform>(cfg.model.coupling.variant())) {
        const double J = uniform_J(cfg);
        const Box box{cfg.model.region.n, cfg.model.region.m, cfg.model.d};
        auto r = bound_report("oracle_identity");
        for (double lambda : grid) {
          const auto p = tau_w_by_integration(J, cfg.scan.delta, lambda, box,
                                              QuadratureSpec{QuadratureKind::gauss, cfg.scan.gauss},
                                              Estimator::exact_oracle(), cfg.model.beta);
          const double direct = finite_wall_free_energy(box.n, cfg.model.coupling, FieldSpec::decay_hat(lambda, cfg.scan.delta),
                                                        0.0, cfg.model.beta, box.dim, box.m);
          r.record(cfg.tolerance.oracle - std::abs(p.tau - direct), "lambda=" + format_double(lambda));
        }
        reports.push_back(r);
      }
      auto interp = bound_report("interpolation_identity");
      const auto ir = interpolated_log_ratio(cfg.model.region.n, {}, cfg.model.coupling, cfg.model.field, 0.0,
                                             cfg.model.beta, cfg.model.d);
      interp.record(cfg.tolerance.oracle - std::abs(ir.gap), ir.rule);
      reports.push_back(interp);
    }
    return report_csv(reports);
  });
  return finish_report(ctx, "verify_exact.csv", csv);
}

int verify_graphical(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ModelInstance inst = cfg.instance();
  std::vector<InequalityReport> reports;

  const auto es = es_marginal_check(inst);
  auto esr = bound_report("es_marginals");
  esr.record(cfg.tolerance.slack - es.spin_tv, "spin_tv=" + format_double(es.spin_tv));
  esr.record(cfg.tolerance.slack - es.rc_tv, "rc_tv=" + format_double(es.rc_tv));
  reports.push_back(esr);

  const auto wired = rc_graph(inst, RcBoundary::wired);
  reports.push_back(check_rc_fkg(wired, 200, cfg.run.seed));
  reports.push_back(check_free_wired_domination(rc_graph(inst, RcBoundary::free), wired, 200, cfg.run.seed));

  ModelInstance strong = inst;
  strong.couplings = CouplingSpec::uniform(inst.couplings.max_coupling());
  CounterRng rng(cfg.run.seed, stream_id(0, 3));
  std::vector<IncreasingEvent> events;
  for (int k = 0; k < 200; ++k) events.push_back(IncreasingEvent::random(rng, wired.edges.size()));
  reports.push_back(compare_rc_in_J(wired, rc_graph(strong, RcBoundary::wired), events));

  const auto pi = gibbs_distribution(compile(inst));
  const double tv = total_variation(pi, sw_apply(rc_graph(inst, RcBoundary::spin_bc), pi));
  auto sw = bound_report("sw_stationarity");
  sw.record(1e-10 - tv, "tv=" + format_double(tv));
  reports.push_back(sw);
  return finish_report(ctx, "verify_graphical.csv", report_csv(reports));
}

int snapshot_cmd(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto snap = snapshot(cfg.instance(), cfg.run.sweeps, cfg.run.seed, sweep_options(cfg.run), stream_id(0, 0));
  if (ctx.pgm()) ctx.write("snapshot.pgm", render_pgm(snap.raster));
  if (ctx.csv()) {
    CsvTable t({"sweeps", "seed", "width", "height", "wall_magnetization"});
    t.row().add(static_cast<long long>(cfg.run.sweeps)).add(static_cast<long long>(cfg.run.seed)).add(snap.raster.width)
        .add(snap.raster.height).add(snap.wall_magnetization);
    ctx.write("snapshot.csv", t.str());
  }
  ctx.out << "wall magnetization " << format_double(snap.wall_magnetization) << "\n";
  return kExitOk;
}

int profile_cmd(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  require_semi_box(cfg);
  const auto p = estimate_profile(cfg.instance(), schedule(cfg.run), cfg.run.seed, sweep_options(cfg.run), stream_id(0, 0));
  CsvTable t({"layer", "mean", "stderr", "tau_int", "samples", "layer_mean", "layer_stderr", "layer_tau_int"});
  for (std::size_t l = 0; l < p.mean.size(); ++l)
    t.row().add(l + 1).add(p.mean[l]).add(p.stderr_[l]).add(p.tau[l]).add(p.samples).add(p.layer_mean[l])
        .add(p.layer_stderr[l]).add(p.layer_tau[l]);
  ctx.write("profile.csv", t.str());
  if (ctx.pgm() && cfg.model.d == 2) ctx.write("profile_final.pgm", render_pgm(raster_of(compile(cfg.instance()), p.final_config)));
  return kExitOk;
}

int tau_scan(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  require_semi_box(cfg);
  const Box box{cfg.model.region.n, cfg.model.region.m, cfg.model.d};
  auto compute = [&] {
    const auto curve = tau_curve(uniform_J(cfg), cfg.scan.delta, cfg.lambda_grid(), box, estimator(cfg), cfg.model.beta,
                                 0, field_path(cfg), cfg.scan.gauss);
    CsvTable t({"lambda", "tau", "stderr", "n", "m", "depth", "rule"});
    for (std::size_t k = 0; k < curve.lambda.size(); ++k)
      t.row().add(curve.lambda[k]).add(curve.tau[k]).add(curve.stderr_[k]).add(box.n).add(box.m).add(curve.depth).add(
          curve.rule);
    return t.str();
  };
  Cache cache(cfg);
  const std::string csv = cfg.scan.estimator == "exact" ? cache.get_or("tau_scan.csv", compute) : compute();
  ctx.write("tau_scan.csv", csv);
  return kExitOk;
}

int lambda_c(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<Box> ladder;
  for (int n : cfg.scan.ladder) ladder.push_back(Box{n, n, cfg.model.d});
  ScanOptions opt;
  opt.epsilon = cfg.scan.epsilon;
  opt.depth = cfg.scan.depth;
  opt.path = field_path(cfg);
  opt.observable = cfg.scan.observable == "layer_average" ? Observable::layer_average : Observable::central_column;
  opt.beta = cfg.model.beta;
  opt.jobs = ctx.jobs;
  const auto scan = lambda_c_scan(uniform_J(cfg), cfg.scan.delta, cfg.lambda_grid(), ladder, estimator(cfg), opt);

  CsvTable curves({"n", "m", "lambda", "integrand", "stderr", "tau"});
  for (const auto& c : scan.curves)
    for (std::size_t k = 0; k < scan.lambda.size(); ++k)
      curves.row().add(c.box.n).add(c.box.m).add(scan.lambda[k]).add(c.integrand[k]).add(c.stderr_[k]).add(c.tau[k]);
  ctx.write("lambda_c_curves.csv", curves.str());

  CsvTable summary({"path", "epsilon", "depth", "crossing", "crossing_error", "plateau_onset", "open_ended",
                    "monotone_violations"});
  auto opt_cell = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
  summary.row().add(cfg.scan.path).add(scan.epsilon).add(scan.depth).add(opt_cell(scan.crossing)).add(scan.crossing_error)
      .add(opt_cell(scan.plateau_onset)).add(scan.open_ended ? "true" : "false").add(scan.monotone_violations);
  ctx.write("lambda_c.csv", summary.str());
  ctx.out << "crossing " << (scan.crossing ? format_double(*scan.crossing) : "open-ended") << "\n";
  return kExitOk;
}

int figures(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  require_semi_box(cfg);
  if (cfg.model.d != 2) throw ConfigError(0, "model.d", "figures are 2-d rasters");
  const std::vector<double> lambdas{cfg.figures.lambda_high, cfg.figures.lambda_low};
  std::vector<ProfileEstimate> prof(2);
  std::vector<ModelInstance> inst(2);
  for (std::size_t k = 0; k < 2; ++k) {
    inst[k] = cfg.instance();
    const bool zero = std::holds_alternative<FieldSpec::Zero>(cfg.model.field.variant());
    inst[k].field = zero ? FieldSpec::wall_only(lambdas[k])
                         : FieldSpec::sum({cfg.model.field, FieldSpec::wall_only(lambdas[k])});
  }
  parallel_for(2, ctx.jobs, [&](std::size_t k) {
    prof[k] = estimate_profile(inst[k], schedule(cfg.run), cfg.run.seed, sweep_options(cfg.run),
                               stream_id(static_cast<std::uint32_t>(k), 0));
  });
  CsvTable t({"figure", "lambda", "wall_mean", "wall_stderr", "wall_tau", "samples"});
  for (std::size_t k = 0; k < 2; ++k) {
    const std::string name = "figure" + std::to_string(k + 1);
    if (ctx.pgm()) ctx.write(name + ".pgm", render_pgm(raster_of(compile(inst[k]), prof[k].final_config)));
    t.row().add(name).add(lambdas[k]).add(prof[k].layer_mean[0]).add(prof[k].layer_stderr[0]).add(prof[k].layer_tau[0])
        .add(prof[k].samples);
    ctx.out << name << ": lambda " << format_double(lambdas[k]) << ", wall magnetization "
            << format_double(prof[k].layer_mean[0]) << " +- " << format_double(prof[k].layer_stderr[0]) << "\n";
  }
  if (ctx.csv()) ctx.write("figures.csv", t.str());
  return kExitOk;
}

}  // namespace

int run_lab(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wetting-model experiment runner", "wetting_lab"};
  app.require_subcommand(1);
  std::string preset_name = "default", config_path, out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::map<std::string, std::function<int(const Context&)>> handlers = {
      {"verify-exact", verify_exact}, {"verify-graphical", verify_graphical}, {"snapshot", snapshot_cmd},
      {"profile", profile_cmd},        {"tau-scan", tau_scan},                 {"lambda-c", lambda_c},
      {"figures", figures}};
  for (const auto& [name, about] : kCommands) {
    auto* sub = app.add_subcommand(name, about);
    sub->add_option("--preset", preset_name, "starting configuration")
        ->check(CLI::IsMember(preset_names()));
    sub->add_option("--seed", seed, "master seed (overrides run.seed)");
    sub->add_option("--config", config_path, "key = value file applied on top of the preset");
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--jobs", jobs, "worker threads for independent experiments")->check(CLI::Range(0, 1024));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig cfg = preset(preset_name);
    if (!config_path.empty()) cfg = parse_config(read_file(config_path), cfg);
    cfg.command = command;
    if (seed) cfg.run.seed = *seed;
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    validate_config(cfg);
    Context ctx{cfg, fs::path(cfg.output.dir), jobs, out};
    fs::create_directories(ctx.out_dir);
    ctx.write("config.txt", render_config(cfg));
    return handlers.at(command)(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace wetting
