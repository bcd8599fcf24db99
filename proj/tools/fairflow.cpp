// Command line front end: solve, sweep, pareto, beta-so, price, bounds.
// Every output file gets a <file>.manifest.json sidecar with the exact rerun
// command; outputs themselves are byte-identical across reruns.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "fairflow/csvio.hpp"
#include "fairflow/errors.hpp"
#include "fairflow/fairness.hpp"
#include "fairflow/manifest.hpp"
#include "fairflow/network.hpp"
#include "fairflow/pricing.hpp"
#include "fairflow/solver.hpp"
#include "fairflow/sweep.hpp"
#include "fairflow/tntp.hpp"

namespace {

constexpr const char* kToolVersion = "fairflow 0.1.0";

struct InstanceOpts {
  std::string net_path;
  std::string trips_path;
  std::string json_path;
};

struct SolverOpts {
  int max_iterations = 100;
  double gap = 1e-5;
  double record_threshold = 1e-4;
  bool conjugate = false;
  int equilibrate_rounds = 50;
};

struct Cli {
  InstanceOpts instance;
  SolverOpts solver;
  int jobs = 0;  // 0: hardware concurrency
  std::vector<std::string> argv;
  std::chrono::steady_clock::time_point start;
};

void add_instance_opts(CLI::App* cmd, InstanceOpts& o) {
  auto* net = cmd->add_option("--net", o.net_path, "TNTP network file");
  auto* trips = cmd->add_option("--trips", o.trips_path, "TNTP trips file");
  auto* json = cmd->add_option("--json", o.json_path, "JSON instance file");
  net->needs(trips);
  trips->needs(net);
  json->excludes(net);
}

void add_solver_opts(CLI::App* cmd, SolverOpts& o) {
  cmd->add_option("--max-iterations", o.max_iterations, "iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gap", o.gap, "target relative gap");
  cmd->add_option("--record-threshold", o.record_threshold,
                  "drop recorded paths below this fraction of demand");
  cmd->add_flag("--conjugate", o.conjugate, "conjugate direction mixing");
  cmd->add_option("--equilibrate-rounds", o.equilibrate_rounds,
                  "path cost equalization rounds after the main loop (0 disables)");
}

fairflow::SolverConfig to_config(const SolverOpts& o) {
  fairflow::SolverConfig cfg;
  cfg.max_iterations = o.max_iterations;
  cfg.target_relative_gap = o.gap;
  cfg.path_record_threshold = o.record_threshold;
  cfg.conjugate_direction = o.conjugate;
  cfg.equilibrate_rounds = o.equilibrate_rounds;
  return cfg;
}

fairflow::Network load_instance(const InstanceOpts& o) {
  fairflow::Network net;
  if (!o.json_path.empty()) {
    net = fairflow::parse_json_instance(fairflow::read_file(o.json_path));
  } else if (!o.net_path.empty()) {
    net = fairflow::parse_tntp(o.net_path, o.trips_path);
  } else {
    throw fairflow::InstanceError("no instance given; pass --net/--trips or --json");
  }
  bool bad = false;
  for (const auto& d : fairflow::validate(net)) {
    if (d.code == "self-loop") {
      std::cerr << "warning: " << d.message << "\n";
    } else {
      std::cerr << "error: " << d.message << "\n";
      bad = true;
    }
  }
  if (bad) throw fairflow::ValidationError("instance failed validation");
  return net;
}

int resolve_jobs(int cli_jobs) {
  if (const char* env = std::getenv("FAIRFLOW_JOBS")) {
    int v = std::atoi(env);
    if (v > 0) return v;  // the environment wins over the flag
  }
  if (cli_jobs > 0) return cli_jobs;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::string shell_quote(const std::string& s) {
  bool plain = !s.empty();
  for (char c : s)
    plain = plain && (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                      c == '_' || c == '.' || c == '/' || c == '=' || c == ',');
  if (plain) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  out += "'";
  return out;
}

void write_manifests(const Cli& cli, const std::string& command,
                     const std::vector<std::pair<std::string, std::string>>& inputs,
                     const std::vector<std::pair<std::string, std::string>>& parameters,
                     const std::vector<std::string>& outputs) {
  fairflow::RunManifest m;
  m.command = command;
  m.tool_version = kToolVersion;
  m.inputs = inputs;
  m.parameters = parameters;
  m.outputs = outputs;
  std::ostringstream rerun;
  for (size_t i = 0; i < cli.argv.size(); ++i)
    rerun << (i ? " " : "") << shell_quote(cli.argv[i]);
  m.rerun = rerun.str();
  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - cli.start).count();
  for (const auto& out : outputs)
    fairflow::write_file(out + ".manifest.json", fairflow::manifest_to_json(m));
}

std::vector<std::pair<std::string, std::string>> instance_inputs(const InstanceOpts& o) {
  std::vector<std::pair<std::string, std::string>> in;
  if (!o.json_path.empty()) in.emplace_back("instance", o.json_path);
  if (!o.net_path.empty()) in.emplace_back("network", o.net_path);
  if (!o.trips_path.empty()) in.emplace_back("trips", o.trips_path);
  return in;
}

std::vector<fairflow::MetricReport> all_metrics(const fairflow::Network& net,
                                                const fairflow::FlowState& fs) {
  return {fairflow::unfairness_u(net, fs), fairflow::envy_free_unfairness(net, fs),
          fairflow::used_nash_unfairness(net, fs), fairflow::gini_coefficient(net, fs)};
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
  double alpha = 0.0;
  std::string flow_out;
  std::string metrics_out;
};

int cmd_solve(const Cli& cli, const SolveArgs& a) {
  fairflow::Network net = load_instance(cli.instance);
  fairflow::FlowState fs = fairflow::solve(net, a.alpha, to_config(cli.solver));
  std::cout << "alpha " << fairflow::fmt12(fs.alpha) << "\n"
            << "h_so " << fairflow::fmt12(fs.h_so) << "\n"
            << "h_ue " << fairflow::fmt12(fs.h_ue) << "\n"
            << "relative_gap " << fairflow::fmt12(fs.relative_gap) << "\n"
            << "iterations " << fs.iterations << "\n";
  std::cout << "note: inefficiency ratios need a full sweep for the optimum reference\n";
  std::vector<std::string> outputs;
  if (!a.flow_out.empty()) {
    fairflow::write_file(a.flow_out, fairflow::flow_state_to_json(net, fs));
    outputs.push_back(a.flow_out);
  }
  if (!a.metrics_out.empty()) {
    fairflow::write_file(a.metrics_out, fairflow::metrics_to_csv(all_metrics(net, fs)));
    outputs.push_back(a.metrics_out);
  }
  write_manifests(cli, "solve", instance_inputs(cli.instance),
                  {{"alpha", fairflow::fmt12(a.alpha)},
                   {"max_iterations", std::to_string(cli.solver.max_iterations)},
                   {"gap", fairflow::fmt12(cli.solver.gap)}},
                  outputs);
  return 0;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  double step = 0.01;
  std::string method = "itap";
  std::string out;
};

fairflow::SweepResult run_sweep(const fairflow::Network& net, const SweepArgs& a,
                                const fairflow::SolverConfig& cfg, int jobs) {
  if (a.method == "itap") return fairflow::dense_sweep(net, a.step, cfg, jobs);
  if (a.method == "isolution") return fairflow::i_solution_sweep(net, a.step, cfg, jobs);
  throw fairflow::InstanceError("unknown sweep method: " + a.method);
}

int cmd_sweep(const Cli& cli, const SweepArgs& a) {
  fairflow::Network net = load_instance(cli.instance);
  int jobs = resolve_jobs(cli.jobs);
  fairflow::SweepResult sw = run_sweep(net, a, to_config(cli.solver), jobs);
  for (const auto& [lo, hi] : sw.outliers)
    std::cerr << "warning: unfairness jump between alpha " << fairflow::fmt12(lo)
              << " and " << fairflow::fmt12(hi) << "\n";
  std::cout << "points " << sw.records.size() << "\n"
            << "so_reference " << fairflow::fmt12(sw.so_reference) << "\n";
  fairflow::write_file(a.out, fairflow::sweep_to_csv(sw.records));
  write_manifests(cli, "sweep", instance_inputs(cli.instance),
                  {{"step", fairflow::fmt12(a.step)},
                   {"method", a.method},
                   {"jobs", std::to_string(jobs)}},
                  {a.out});
  return 0;
}

// ---- pareto / beta-so -----------------------------------------------------

fairflow::GateMetric parse_gate(const std::string& name) {
  if (name == "u") return fairflow::GateMetric::kU;
  if (name == "envy") return fairflow::GateMetric::kEnvyFree;
  if (name == "nash") return fairflow::GateMetric::kUsedNash;
  if (name == "gini") return fairflow::GateMetric::kGini;
  throw fairflow::InstanceError("unknown gate metric: " + name);
}

struct ParetoArgs {
  std::string sweep_csv;
  std::vector<double> betas;
  std::string gate = "u";
  double slack = 1e-4;
  SweepArgs sweep;  // used when no CSV is given
  std::string out;
};

std::vector<fairflow::SweepRecord> records_for(const Cli& cli, const std::string& sweep_csv,
                                               const SweepArgs& a) {
  if (!sweep_csv.empty())
    return fairflow::sweep_from_csv(fairflow::read_file(sweep_csv));
  fairflow::Network net = load_instance(cli.instance);
  return run_sweep(net, a, to_config(cli.solver), resolve_jobs(cli.jobs)).records;
}

int cmd_pareto(const Cli& cli, const ParetoArgs& a) {
  auto records = records_for(cli, a.sweep_csv, a.sweep);
  auto frontier = fairflow::pareto_frontier(records, a.betas, parse_gate(a.gate), a.slack,
                                            a.sweep.method);
  fairflow::write_file(a.out, fairflow::pareto_to_csv(frontier));
  std::cout << "points " << frontier.size() << "\n";
  auto inputs = instance_inputs(cli.instance);
  if (!a.sweep_csv.empty()) inputs.emplace_back("sweep", a.sweep_csv);
  write_manifests(cli, "pareto", inputs,
                  {{"gate", a.gate},
                   {"slack", fairflow::fmt12(a.slack)},
                   {"method", a.sweep.method}},
                  {a.out});
  return 0;
}

struct BetaSoArgs {
  std::string sweep_csv;
  double beta = 1.0;
  std::string gate = "u";
  double slack = 1e-4;
  SweepArgs sweep;
  std::string out;
};

int cmd_beta_so(const Cli& cli, const BetaSoArgs& a) {
  auto records = records_for(cli, a.sweep_csv, a.sweep);
  fairflow::ParetoPoint p = fairflow::select_beta_so(records, a.beta, parse_gate(a.gate),
                                                     a.slack, a.sweep.method);
  std::cout << "beta " << fairflow::fmt12(p.beta) << "\n"
            << "alpha " << fairflow::fmt12(p.param) << "\n"
            << "ineff_ratio " << fairflow::fmt12(p.ineff_ratio) << "\n"
            << "unfairness " << fairflow::fmt12(p.unfairness) << "\n";
  std::vector<std::string> outputs;
  if (!a.out.empty()) {
    fairflow::write_file(a.out, fairflow::pareto_to_csv({p}));
    outputs.push_back(a.out);
  }
  auto inputs = instance_inputs(cli.instance);
  if (!a.sweep_csv.empty()) inputs.emplace_back("sweep", a.sweep_csv);
  write_manifests(cli, "beta-so", inputs,
                  {{"beta", fairflow::fmt12(a.beta)}, {"gate", a.gate}}, outputs);
  return 0;
}

// ---- price ----------------------------------------------------------------

struct PriceArgs {
  double alpha = 0.0;
  std::string method = "marginal";
  std::string classes_path;
  bool verify = false;
  std::string out;
};

int cmd_price(const Cli& cli, const PriceArgs& a) {
  fairflow::Network net = load_instance(cli.instance);
  fairflow::FlowState fs = fairflow::solve(net, a.alpha, to_config(cli.solver));
  fairflow::TollVector tolls;
  if (a.method == "marginal") {
    tolls = fairflow::marginal_tolls(net, fs);
  } else if (a.method == "lp") {
    std::vector<fairflow::UserClass> classes;
    if (!a.classes_path.empty())
      classes = fairflow::classes_from_json(fairflow::read_file(a.classes_path));
    fairflow::RestrictedLp lp = fairflow::heterogeneous_lp(net, fs, classes);
    fairflow::TightnessReport tight = fairflow::check_tightness(lp);
    std::cout << "lp_objective " << fairflow::fmt12(lp.solution.objective) << "\n"
              << "capacity_rows " << lp.capacity_edges.size() << "\n"
              << "max_slack " << fairflow::fmt12(tight.max_slack) << "\n";
    tolls = fairflow::dual_tolls(lp);
    fairflow::SoundnessReport sound = fairflow::enforcement_soundness(net, fs, lp, tolls);
    std::cout << "soundness_slack " << fairflow::fmt12(sound.worst_slack) << "\n"
              << "sound " << (sound.sound ? "yes" : "no") << "\n";
  } else {
    throw fairflow::InstanceError("unknown pricing method: " + a.method);
  }
  if (a.verify) {
    fairflow::EnforcementCheck chk = fairflow::verify_enforcement(net, fs, tolls,
                                                                  to_config(cli.solver));
    std::cout << "flow_deviation " << fairflow::fmt12(chk.max_flow_deviation) << "\n"
              << "cost_spread " << fairflow::fmt12(chk.max_cost_spread) << "\n"
              << "enforced " << (chk.enforced ? "yes" : "no") << "\n";
  }
  fairflow::write_file(a.out, fairflow::tolls_to_csv(tolls));
  auto inputs = instance_inputs(cli.instance);
  if (!a.classes_path.empty()) inputs.emplace_back("classes", a.classes_path);
  write_manifests(cli, "price", inputs,
                  {{"alpha", fairflow::fmt12(a.alpha)}, {"method", a.method}}, {a.out});
  return 0;
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::string out;
};

int cmd_bounds(const Cli& cli, const BoundsArgs& a) {
  fairflow::Network net = load_instance(cli.instance);
  fairflow::SolverConfig cfg = to_config(cli.solver);
  std::vector<fairflow::SweepRecord> records;
  for (double alpha : {0.0, 1.0}) {
    fairflow::FlowState fs = fairflow::solve(net, alpha, cfg);
    fairflow::SweepRecord r;
    r.alpha = alpha;
    r.h_so = fs.h_so;
    r.h_ue = fs.h_ue;
    records.push_back(r);
  }
  std::ostringstream csv;
  csv << "quantity,param,value\n";
  double poa = fairflow::poa_upper(records);
  double star = fairflow::alpha_star_crossover(records);
  std::cout << "poa_upper " << fairflow::fmt12(poa) << "\n"
            << "alpha_star " << fairflow::fmt12(star) << "\n";
  csv << "poa_upper,," << fairflow::fmt12(poa) << "\n";
  csv << "alpha_star,," << fairflow::fmt12(star) << "\n";
  for (double alpha : a.alphas) {
    double b = fairflow::ineff_bound(records, alpha);
    std::cout << "ineff_bound(" << fairflow::fmt12(alpha) << ") " << fairflow::fmt12(b)
              << "\n";
    csv << "ineff_bound," << fairflow::fmt12(alpha) << ',' << fairflow::fmt12(b) << "\n";
  }
  for (double beta : a.betas) {
    double fa = fairflow::feasible_alpha(net, beta);
    std::cout << "feasible_alpha(" << fairflow::fmt12(beta) << ") " << fairflow::fmt12(fa)
              << "\n";
    csv << "feasible_alpha," << fairflow::fmt12(beta) << ',' << fairflow::fmt12(fa) << "\n";
  }
  std::vector<std::string> outputs;
  if (!a.out.empty()) {
    fairflow::write_file(a.out, csv.str());
    outputs.push_back(a.out);
  }
  write_manifests(cli, "bounds", instance_inputs(cli.instance), {}, outputs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  cli.start = std::chrono::steady_clock::now();
  for (int i = 0; i < argc; ++i) cli.argv.emplace_back(argv[i]);

  CLI::App app{"Congestion-aware traffic assignment and fairness toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "single blended assignment");
  add_instance_opts(solve_cmd, cli.instance);
  add_solver_opts(solve_cmd, cli.solver);
  solve_cmd->add_option("--alpha", solve_args.alpha, "blend parameter in [0,1]")
      ->required();
  solve_cmd->add_option("--flow-out", solve_args.flow_out, "flow JSON output");
  solve_cmd->add_option("--metrics-out", solve_args.metrics_out, "metrics CSV output");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "dense alpha sweep to CSV");
  add_instance_opts(sweep_cmd, cli.instance);
  add_solver_opts(sweep_cmd, cli.solver);
  sweep_cmd->add_option("--step", sweep_args.step, "grid step");
  sweep_cmd->add_option("--method", sweep_args.method, "itap | isolution");
  sweep_cmd->add_option("--jobs", cli.jobs, "worker threads (FAIRFLOW_JOBS overrides)");
  sweep_cmd->add_option("--out", sweep_args.out, "sweep CSV output")->required();

  ParetoArgs pareto_args;
  auto* pareto_cmd = app.add_subcommand("pareto", "fairness/efficiency frontier");
  add_instance_opts(pareto_cmd, cli.instance);
  add_solver_opts(pareto_cmd, cli.solver);
  pareto_cmd->add_option("--sweep-csv", pareto_args.sweep_csv, "reuse a sweep CSV");
  pareto_cmd->add_option("--betas", pareto_args.betas, "fairness budgets")
      ->required()
      ->delimiter(',');
  pareto_cmd->add_option("--gate", pareto_args.gate, "u | envy | nash | gini");
  pareto_cmd->add_option("--slack", pareto_args.slack, "budget tolerance");
  pareto_cmd->add_option("--step", pareto_args.sweep.step, "grid step when solving");
  pareto_cmd->add_option("--method", pareto_args.sweep.method, "itap | isolution");
  pareto_cmd->add_option("--jobs", cli.jobs, "worker threads (FAIRFLOW_JOBS overrides)");
  pareto_cmd->add_option("--out", pareto_args.out, "frontier CSV output")->required();

  BetaSoArgs beta_args;
  auto* beta_cmd = app.add_subcommand("beta-so", "cheapest point within a budget");
  add_instance_opts(beta_cmd, cli.instance);
  add_solver_opts(beta_cmd, cli.solver);
  beta_cmd->add_option("--sweep-csv", beta_args.sweep_csv, "reuse a sweep CSV");
  beta_cmd->add_option("--beta", beta_args.beta, "fairness budget")->required();
  beta_cmd->add_option("--gate", beta_args.gate, "u | envy | nash | gini");
  beta_cmd->add_option("--slack", beta_args.slack, "budget tolerance");
  beta_cmd->add_option("--step", beta_args.sweep.step, "grid step when solving");
  beta_cmd->add_option("--method", beta_args.sweep.method, "itap | isolution");
  beta_cmd->add_option("--jobs", cli.jobs, "worker threads (FAIRFLOW_JOBS overrides)");
  beta_cmd->add_option("--out", beta_args.out, "one-row frontier CSV");

  PriceArgs price_args;
  auto* price_cmd = app.add_subcommand("price", "enforcing tolls for a blend");
  add_instance_opts(price_cmd, cli.instance);
  add_solver_opts(price_cmd, cli.solver);
  price_cmd->add_option("--alpha", price_args.alpha, "blend parameter")->required();
  price_cmd->add_option("--method", price_args.method, "marginal | lp");
  price_cmd->add_option("--classes", price_args.classes_path, "user classes JSON");
  price_cmd->add_flag("--verify", price_args.verify, "re-solve under the tolls");
  price_cmd->add_option("--out", price_args.out, "toll CSV output")->required();

  BoundsArgs bounds_args;
  auto* bounds_cmd = app.add_subcommand("bounds", "inefficiency and fairness guarantees");
  add_instance_opts(bounds_cmd, cli.instance);
  add_solver_opts(bounds_cmd, cli.solver);
  bounds_cmd->add_option("--alphas", bounds_args.alphas, "bound sample points")
      ->delimiter(',');
  bounds_cmd->add_option("--betas", bounds_args.betas, "fairness budgets")->delimiter(',');
  bounds_cmd->add_option("--out", bounds_args.out, "bounds CSV output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return cmd_solve(cli, solve_args);
    if (sweep_cmd->parsed()) return cmd_sweep(cli, sweep_args);
    if (pareto_cmd->parsed()) return cmd_pareto(cli, pareto_args);
    if (beta_cmd->parsed()) return cmd_beta_so(cli, beta_args);
    if (price_cmd->parsed()) return cmd_price(cli, price_args);
    if (bounds_cmd->parsed()) return cmd_bounds(cli, bounds_args);
  } catch (const fairflow::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fairflow::InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fairflow::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fairflow::RoutingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fairflow::DecompositionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fairflow::RestrictionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fairflow::EnforceabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
