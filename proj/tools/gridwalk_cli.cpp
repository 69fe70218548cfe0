// gridwalk command-line front end: simulate | ensemble | fit | verify.
// Data goes to stdout or files; diagnostics go to stderr. Exit codes:
// 0 success (simulate: consensus reached), 2 simulate hit the step cap,
// 1 configuration or I/O error.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridwalk/chain_analysis.hpp"
#include "gridwalk/engine.hpp"
#include "gridwalk/ensemble.hpp"
#include "gridwalk/io.hpp"
#include "gridwalk/version.hpp"

namespace {

std::vector<int> parse_node_list(const std::string& text) {
  std::vector<int> nodes;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int node = std::stoi(item, &used);
    if (used != item.size())
      throw std::invalid_argument("feature node list entry '" + item +
                                  "' is not an integer");
    nodes.push_back(node);
  }
  return nodes;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

int parse_workers(const std::string& text) {
  if (text == "auto") return 0;
  std::size_t used = 0;
  const int n = std::stoi(text, &used);
  if (used != text.size() || n < 1)
    throw std::invalid_argument("--parallel expects a positive integer or 'auto'");
  return n;
}

struct SimulateArgs {
  gridwalk::EpisodeConfig config;
  std::string feature_nodes = "4,5,6";
  std::string history_path;
  std::string out_path;
};

int cmd_simulate(const SimulateArgs& args) {
  gridwalk::EpisodeConfig cfg = args.config;
  cfg.feature_nodes = parse_node_list(args.feature_nodes);
  cfg.record_history = !args.history_path.empty();
  cfg.validate();

  const gridwalk::EpisodeResult result = gridwalk::run_episode(cfg);

  const std::string payload = gridwalk::episode_result_json(result).dump(2) + "\n";
  if (args.out_path.empty())
    std::cout << payload;
  else
    write_text_file(args.out_path, payload);

  if (!args.history_path.empty()) {
    std::ostringstream csv;
    gridwalk::write_history_csv(csv, result);
    write_text_file(args.history_path, csv.str());
  }
  return result.consensus_reached ? 0 : 2;
}

struct EnsembleArgs {
  std::string config_path;
  std::string out_path;
  std::string parallel = "auto";
};

int cmd_ensemble(const EnsembleArgs& args) {
  std::ifstream in(args.config_path);
  if (!in)
    throw std::runtime_error("cannot read config '" + args.config_path + "'");
  gridwalk::json parsed;
  try {
    parsed = gridwalk::json::parse(in);
  } catch (const gridwalk::json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  const gridwalk::ScenarioSweep sweep = gridwalk::sweep_from_json(parsed);
  const int workers = parse_workers(args.parallel);

  const auto rows = gridwalk::run_ensemble(sweep, workers);
  write_text_file(args.out_path, gridwalk::stats_csv(rows));

  const gridwalk::json manifest = gridwalk::manifest_json(
      gridwalk::sweep_to_json(sweep), {args.out_path}, utc_timestamp());
  write_text_file(args.out_path + ".manifest.json", manifest.dump(2) + "\n");
  return 0;
}

int cmd_fit(const std::string& stats_path) {
  std::ifstream in(stats_path);
  if (!in) throw std::runtime_error("cannot read stats '" + stats_path + "'");
  const auto rows = gridwalk::parse_stats_csv(in);
  std::vector<gridwalk::EnsembleRow> usable;
  for (const auto& row : rows)
    if (row.tc_seconds.mean > 0.0 && std::isfinite(row.tc_seconds.mean))
      usable.push_back(row);
  if (usable.size() < 3)
    throw std::invalid_argument(
        "fit requires at least 3 rows with positive mean consensus times");
  const gridwalk::ExpFit fit = gridwalk::fit_exponential(usable);
  std::cout << gridwalk::fit_json(fit).dump(2) << "\n";
  return 0;
}

struct VerifyArgs {
  int grid_dim = 3;
  int agents = 2;
  std::uint64_t seed = 1;
  std::uint64_t cap = 10000;
  bool as_json = false;
};

int cmd_verify(const VerifyArgs& args) {
  const gridwalk::VerifyReport report =
      gridwalk::verify_report(args.grid_dim, args.agents, args.cap, args.seed);
  if (args.as_json)
    std::cout << gridwalk::verify_report_json(report).dump(2) << "\n";
  else
    std::cout << gridwalk::verify_report_text(report);
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-agent random-walk consensus simulator"};
  app.set_version_flag("--version",
                       std::string(gridwalk::kToolName) + " " +
                           gridwalk::kVersion);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "run one seeded episode and write the result JSON");
  simulate->add_option("--agents", sim.config.agents, "number of agents");
  simulate->add_option("--grid-dim", sim.config.grid_dim,
                       "nodes per grid side");
  simulate->add_option("--seed", sim.config.seed, "episode seed");
  simulate->add_option("--alpha", sim.config.alpha, "consensus gain");
  simulate->add_option("--epsilon", sim.config.epsilon,
                       "consensus tolerance");
  simulate->add_option("--feature-nodes", sim.feature_nodes,
                       "comma-separated node ids (empty for none)");
  simulate->add_option("--comm-radius", sim.config.comm_radius,
                       "communication radius in meters (0 = co-location)");
  simulate->add_option("--noise-var", sim.config.noise,
                       "reference noise variance");
  simulate->add_option("--max-steps", sim.config.max_steps, "step cap");
  simulate->add_option("--history", sim.history_path,
                       "write per-step history CSV here");
  simulate->add_option("--out", sim.out_path,
                       "result JSON path (default: stdout)");

  EnsembleArgs ens;
  auto* ensemble = app.add_subcommand(
      "ensemble", "run a Monte Carlo sweep from a JSON config");
  ensemble->add_option("--config", ens.config_path, "sweep config JSON")
      ->required();
  ensemble->add_option("--out", ens.out_path, "stats CSV path")->required();
  ensemble->add_option("--parallel", ens.parallel,
                       "worker count or 'auto'");

  std::string fit_stats_path;
  auto* fit = app.add_subcommand(
      "fit", "fit mu = a*exp(b*density) to an ensemble stats CSV");
  fit->add_option("--stats", fit_stats_path, "stats CSV from 'ensemble'")
      ->required();

  VerifyArgs ver;
  auto* verify = app.add_subcommand(
      "verify", "run the Markov-chain verification checks");
  verify->add_option("--grid-dim", ver.grid_dim, "nodes per grid side");
  verify->add_option("--agents", ver.agents, "number of agents");
  verify->add_option("--seed", ver.seed, "seed for the union-walk check");
  verify->add_option("--cap", ver.cap, "composite state cap");
  verify->add_flag("--json", ver.as_json, "emit the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (ensemble->parsed()) return cmd_ensemble(ens);
    if (fit->parsed()) return cmd_fit(fit_stats_path);
    if (verify->parsed()) return cmd_verify(ver);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
