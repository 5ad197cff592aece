// delaydyn — command-line front end for the delayed predator-prey toolkit.
//
// Subcommands: equilibria, simulate, ensemble, bifurcation, crossover,
// extinction. Options may come from a flat JSON config file (--config);
// explicit flags override file values. Exit codes: 0 success, 1 validation
// error, 2 numerical divergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "delaydyn/config.hpp"
#include "delaydyn/csv.hpp"
#include "delaydyn/dde.hpp"
#include "delaydyn/ensemble.hpp"
#include "delaydyn/errors.hpp"
#include "delaydyn/version.hpp"

namespace {

using namespace delaydyn;
using nlohmann::json;

struct SubcommandState {
  CLI::App* sub{nullptr};
  RunConfig flags;
  std::string config_path;
  std::string default_model;
};

void add_common_options(SubcommandState& st) {
  CLI::App* s = st.sub;
  RunConfig& f = st.flags;
  s->add_option("--config", st.config_path,
                "JSON config file; flags override file values");
  s->add_option("--model", f.model, "deterministic | model1 | model2");
  s->add_option("--r", f.params.r, "prey growth rate");
  s->add_option("--K", f.params.K, "carrying capacity");
  s->add_option("--beta", f.params.beta, "feeding rate");
  s->add_option("--sigma", f.params.sigma, "capture-rate effect constant");
  s->add_option("--a", f.params.a, "predator death rate");
  s->add_option("--tau", f.params.tau, "time delay");
  s->add_option("--nu1", f.params.nu1, "prey noise intensity (model1)");
  s->add_option("--nu2", f.params.nu2, "predator noise intensity (model1)");
  s->add_option("--x0", f.x0, "initial prey density");
  s->add_option("--y0", f.y0, "initial predator density");
  s->add_option("--dt", f.dt, "time step (snapped to divide tau)");
  s->add_option("--t-end", f.t_end, "integration horizon");
  s->add_option("--scheme", f.scheme,
                "rk4 | euler-maruyama | milstein | default");
  s->add_option("--n-runs", f.n_runs, "ensemble size");
  s->add_option("--base-seed", f.base_seed, "base seed; run i uses stream i");
  s->add_option("--tau-grid", f.tau_grid_spec,
                "delay grid: start:step:stop or comma list");
  s->add_option("--threshold", f.threshold, "extinction threshold");
  s->add_option("--transient-fraction", f.transient_fraction,
                "fraction of nodes discarded as transient");
  s->add_option("--output", f.output, "output CSV path");
  s->add_option("--threads", f.threads,
                "worker threads (0 = auto; default from DELAYDYN_THREADS)");
}

// Defaults, then config file, then explicitly-set flags.
RunConfig effective_config(const SubcommandState& st) {
  RunConfig cfg;
  cfg.model = st.default_model;
  if (st.sub->count("--config") > 0) {
    apply_json_config(st.config_path, cfg);
  }
  const CLI::App* s = st.sub;
  const RunConfig& f = st.flags;
  if (s->count("--model")) cfg.model = f.model;
  if (s->count("--r")) cfg.params.r = f.params.r;
  if (s->count("--K")) cfg.params.K = f.params.K;
  if (s->count("--beta")) cfg.params.beta = f.params.beta;
  if (s->count("--sigma")) cfg.params.sigma = f.params.sigma;
  if (s->count("--a")) cfg.params.a = f.params.a;
  if (s->count("--tau")) cfg.params.tau = f.params.tau;
  if (s->count("--nu1")) cfg.params.nu1 = f.params.nu1;
  if (s->count("--nu2")) cfg.params.nu2 = f.params.nu2;
  if (s->count("--x0")) cfg.x0 = f.x0;
  if (s->count("--y0")) cfg.y0 = f.y0;
  if (s->count("--dt")) cfg.dt = f.dt;
  if (s->count("--t-end")) cfg.t_end = f.t_end;
  if (s->count("--scheme")) cfg.scheme = f.scheme;
  if (s->count("--n-runs")) cfg.n_runs = f.n_runs;
  if (s->count("--base-seed")) cfg.base_seed = f.base_seed;
  if (s->count("--tau-grid")) cfg.tau_grid_spec = f.tau_grid_spec;
  if (s->count("--threshold")) cfg.threshold = f.threshold;
  if (s->count("--transient-fraction"))
    cfg.transient_fraction = f.transient_fraction;
  if (s->count("--output")) cfg.output = f.output;
  if (s->count("--threads")) cfg.threads = f.threads;
  validate_run_config(cfg);
  return cfg;
}

SolverConfig solver_config(const RunConfig& cfg, Scheme scheme) {
  SolverConfig sc;
  sc.dt = cfg.dt;
  sc.t_end = cfg.t_end;
  sc.tau = cfg.params.tau;
  sc.scheme = scheme;
  sc.clamp_nonnegative = true;
  return sc;
}

json params_json(const ModelParams& p) {
  return json{{"r", p.r},     {"K", p.K},     {"beta", p.beta},
              {"sigma", p.sigma}, {"a", p.a}, {"tau", p.tau},
              {"nu1", p.nu1}, {"nu2", p.nu2}};
}

json base_metadata(const std::string& command, const RunConfig& cfg,
                   int threads) {
  json meta;
  meta["version"] = kVersion;
  meta["command"] = command;
  meta["model"] = cfg.model;
  meta["params"] = params_json(cfg.params);
  meta["x0"] = cfg.x0;
  meta["y0"] = cfg.y0;
  meta["dt_requested"] = cfg.dt;
  meta["t_end"] = cfg.t_end;
  meta["base_seed"] = cfg.base_seed;
  meta["threads"] = threads;
  meta["output"] = cfg.output;
  return meta;
}

void write_metadata(const std::string& csv_path, const json& meta) {
  const std::string path = csv_path + ".meta.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << meta.dump(2) << '\n';
  if (!out.flush()) throw ValidationError("failed writing " + path);
}

StochasticModel stochastic_model(const RunConfig& cfg) {
  return cfg.model == "model1" ? StochasticModel::model1(cfg.params)
                               : StochasticModel::model2(cfg.params);
}

void note_reduced_order(const RunConfig& cfg, Scheme scheme, json& meta) {
  if (cfg.model == "model2" && scheme == Scheme::Milstein) {
    // The correction ignores the delayed diffusion argument.
    meta["scheme_note"] = "reduced-order";
  }
}

int cmd_equilibria(const RunConfig& cfg) {
  const EquilibriumSet eq = compute_equilibria(cfg.params);
  std::cout << "eps0=(0,0)\n";
  std::cout << "eps1=(" << format_double(eq.eps1.x) << ",0)\n";
  if (eq.eps_plus) {
    std::cout << "x_star=" << format_double(eq.eps_plus->x) << '\n';
    std::cout << "y_star=" << format_double(eq.eps_plus->y) << '\n';
  } else {
    std::cout << "eps_plus=absent\n";
  }
  std::cout << "R0=" << format_double(eq.r0) << '\n';
  std::cout << "Rc=" << format_double(eq.rc) << '\n';
  std::cout << "regime=" << to_string(eq.regime) << '\n';
  return 0;
}

int cmd_simulate(const RunConfig& cfg, int threads) {
  const Scheme scheme = resolve_scheme(cfg);
  const SolverConfig sc = solver_config(cfg, scheme);
  const HistoryFunction psi = HistoryFunction::constant({cfg.x0, cfg.y0});

  Trajectory traj;
  if (cfg.model == "deterministic") {
    traj = integrate_dde(predator_prey_field(cfg.params), psi, sc);
  } else {
    RngStream stream(cfg.base_seed, 0);
    traj = integrate_sdde(stochastic_model(cfg), psi, sc, stream);
  }
  write_timeseries_csv(cfg.output, traj);

  json meta = base_metadata("simulate", cfg, threads);
  meta["scheme"] = to_string(scheme);
  meta["dt"] = traj.dt;
  meta["n_nodes"] = traj.n_nodes();
  note_reduced_order(cfg, scheme, meta);
  write_metadata(cfg.output, meta);
  return 0;
}

int cmd_ensemble(const RunConfig& cfg, int threads) {
  if (cfg.model == "deterministic") {
    throw ValidationError("model: ensemble requires model1 or model2");
  }
  const Scheme scheme = resolve_scheme(cfg);
  const SolverConfig sc = solver_config(cfg, scheme);
  const HistoryFunction psi = HistoryFunction::constant({cfg.x0, cfg.y0});

  const EnsembleResult res =
      run_ensemble(stochastic_model(cfg), psi, sc, cfg.n_runs, cfg.base_seed,
                   cfg.threshold, threads);
  write_ensemble_mean_csv(cfg.output, res.mean_trajectory);

  int extinct = 0;
  for (const auto& t : res.extinction_times) extinct += t.has_value() ? 1 : 0;

  json meta = base_metadata("ensemble", cfg, threads);
  meta["scheme"] = to_string(scheme);
  meta["dt"] = res.mean_trajectory.dt;
  meta["n_runs"] = cfg.n_runs;
  meta["threshold"] = cfg.threshold;
  meta["fraction_extinct"] =
      static_cast<double>(extinct) / static_cast<double>(cfg.n_runs);
  note_reduced_order(cfg, scheme, meta);
  write_metadata(cfg.output, meta);
  return 0;
}

int cmd_bifurcation(const RunConfig& cfg, int threads) {
  if (cfg.model != "deterministic") {
    throw ValidationError("model: bifurcation scans the deterministic model "
                          "only");
  }
  const std::vector<double> grid = parse_tau_grid(cfg.tau_grid_spec);
  const SolverConfig sc = solver_config(cfg, Scheme::RK4);
  const HistoryFunction psi = HistoryFunction::constant({cfg.x0, cfg.y0});

  ScanOptions opts;
  opts.transient_fraction = cfg.transient_fraction;
  opts.n_threads = threads;
  const BifurcationDiagram diagram =
      bifurcation_scan(cfg.params, grid, sc, psi, opts);
  write_bifurcation_csv(cfg.output, diagram);

  json meta = base_metadata("bifurcation", cfg, threads);
  meta["scheme"] = "rk4";
  meta["tau_grid"] = grid;
  json snapped = json::array();
  for (double tau : grid) {
    SolverConfig s = sc;
    s.tau = tau;
    snapped.push_back(s.snapped().dt);
  }
  meta["dt_snapped_per_tau"] = snapped;
  meta["transient_fraction"] = cfg.transient_fraction;
  meta["amp_threshold"] = opts.amp_threshold;
  if (diagram.tau_star) meta["tau_star"] = *diagram.tau_star;
  write_metadata(cfg.output, meta);
  return 0;
}

int cmd_crossover(const RunConfig& cfg, int threads) {
  if (cfg.model == "deterministic") {
    throw ValidationError("model: crossover requires model1 or model2");
  }
  const Scheme scheme = resolve_scheme(cfg);
  const std::vector<double> grid = parse_tau_grid(cfg.tau_grid_spec);
  const SolverConfig sc = solver_config(cfg, scheme);
  const HistoryFunction psi = HistoryFunction::constant({cfg.x0, cfg.y0});

  const CrossoverResult res =
      find_crossover(stochastic_model(cfg), grid, sc, cfg.n_runs,
                     cfg.base_seed, psi, cfg.transient_fraction, threads);
  write_crossover_csv(cfg.output, res);

  json meta = base_metadata("crossover", cfg, threads);
  meta["scheme"] = to_string(scheme);
  meta["tau_grid"] = grid;
  meta["n_runs"] = cfg.n_runs;
  meta["transient_fraction"] = cfg.transient_fraction;
  if (res.tau_star_star) meta["tau_star_star"] = *res.tau_star_star;
  note_reduced_order(cfg, scheme, meta);
  write_metadata(cfg.output, meta);
  return 0;
}

int cmd_extinction(const RunConfig& cfg, int threads) {
  if (cfg.model == "deterministic") {
    throw ValidationError("model: extinction requires model1 or model2");
  }
  const Scheme scheme = resolve_scheme(cfg);
  const std::vector<double> grid = parse_tau_grid(cfg.tau_grid_spec);
  const SolverConfig sc = solver_config(cfg, scheme);
  const HistoryFunction psi = HistoryFunction::constant({cfg.x0, cfg.y0});

  const ExtinctionCurve curve =
      extinction_curve(stochastic_model(cfg), grid, sc, cfg.n_runs,
                       cfg.threshold, cfg.base_seed, psi, threads);
  write_extinction_csv(cfg.output, curve);

  json meta = base_metadata("extinction", cfg, threads);
  meta["scheme"] = to_string(scheme);
  meta["tau_grid"] = grid;
  meta["n_runs"] = cfg.n_runs;
  meta["threshold"] = cfg.threshold;
  note_reduced_order(cfg, scheme, meta);
  write_metadata(cfg.output, meta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delaydyn — delayed predator-prey simulation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SubcommandState st_eq, st_sim, st_ens, st_bif, st_cro, st_ext;
  st_eq.sub = app.add_subcommand(
      "equilibria", "fixed points, R0, Rc, and the stability regime");
  st_sim.sub = app.add_subcommand(
      "simulate", "one trajectory (deterministic or stochastic), CSV t,x,y");
  st_ens.sub = app.add_subcommand(
      "ensemble", "Monte Carlo mean trajectory, CSV t,mean_x,mean_y");
  st_bif.sub = app.add_subcommand(
      "bifurcation", "post-transient extrema over a tau grid, detects tau*");
  st_cro.sub = app.add_subcommand(
      "crossover", "long-term averages over a tau grid, detects tau**");
  st_ext.sub = app.add_subcommand(
      "extinction", "predator extinction times over a tau grid");

  st_eq.default_model = "deterministic";
  st_sim.default_model = "deterministic";
  st_ens.default_model = "model1";
  st_bif.default_model = "deterministic";
  st_cro.default_model = "model1";
  st_ext.default_model = "model2";

  for (SubcommandState* st :
       {&st_eq, &st_sim, &st_ens, &st_bif, &st_cro, &st_ext}) {
    add_common_options(*st);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (st_eq.sub->parsed()) {
      return cmd_equilibria(effective_config(st_eq));
    }
    for (auto [st, fn] : std::initializer_list<
             std::pair<SubcommandState*, int (*)(const RunConfig&, int)>>{
             {&st_sim, cmd_simulate},
             {&st_ens, cmd_ensemble},
             {&st_bif, cmd_bifurcation},
             {&st_cro, cmd_crossover},
             {&st_ext, cmd_extinction}}) {
      if (st->sub->parsed()) {
        const RunConfig cfg = effective_config(*st);
        return fn(cfg, resolve_threads_from_env(cfg));
      }
    }
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
