#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kgqr/agent/checkpoint.hpp"
#include "kgqr/error.hpp"
#include "kgqr/experiments/config.hpp"
#include "kgqr/experiments/run.hpp"
#include "kgqr/experiments/synth.hpp"
#include "kgqr/tsv.hpp"

namespace ex = kgqr::experiments;

namespace {

std::vector<std::size_t> parse_sizes(const std::string& text) {
  ex::ExperimentConfig tmp;
  ex::set_config_value(tmp, "candidate_sizes", text);
  return tmp.candidate_sizes;
}

void describe(const ex::Dataset& d) {
  std::cerr << "users " << d.ratings.user_count() << " (" << d.train_users.size() << " train, "
            << d.test_users.size() << " test, " << d.dropped_users << " dropped), items "
            << d.ratings.item_count() << " (" << d.unlinked_items << " without KG link), entities "
            << d.graph.entity_count() << ", simulator rmse " << d.simulator.mf().train_rmse << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KG-enhanced Q-learning for interactive recommendation"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "runs";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  auto* train = app.add_subcommand("train", "train and evaluate every configured seed");
  train->add_option("--config", config_path, "experiment config")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", seed, "run a single seed");
  train->add_option("--budget", budget, "interaction budget override");
  train->add_option("--out", out_dir, "output directory");

  std::string checkpoint;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on its test users");
  eval->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);

  std::string dir_a, dir_b;
  auto* compare = app.add_subcommand("compare", "paired Wilcoxon test between two run sets");
  compare->add_option("--a", dir_a)->required()->check(CLI::ExistingDirectory);
  compare->add_option("--b", dir_b)->required()->check(CLI::ExistingDirectory);

  std::string spec_path, synth_out = "synth";
  auto* synth = app.add_subcommand("synth", "write a synthetic clustered dataset");
  synth->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
  synth->add_option("--out", synth_out, "output directory");

  std::string sizes_text, sweep_config, sweep_out = "sweep";
  auto* sweep = app.add_subcommand("sweep-candidates", "final reward per candidate-set size");
  sweep->add_option("--sizes", sizes_text, "comma list; 'all' for unbounded");
  sweep->add_option("--config", sweep_config)->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      auto cfg = ex::load_config(config_path);
      if (seed) cfg.seeds = {*seed};
      if (budget) cfg.train.budget = *budget;
      auto runs = ex::run_experiment(cfg, out_dir);
      for (const auto& r : runs) {
        std::cout << "seed " << r.seed << ": reward " << r.report.average_reward << " precision "
                  << r.report.precision << " recall " << r.report.recall << " ("
                  << r.interactions << " interactions)\n";
      }
      std::cout << ex::aggregate_text(ex::aggregate(runs), runs.size());
    } else if (*eval) {
      auto header = kgqr::agent::read_checkpoint_header(checkpoint);
      auto cfg = ex::parse_config(header.config_text, checkpoint);
      auto data = ex::ingest(cfg);
      describe(data);
      auto agent = ex::make_agent(data, cfg, cfg.seeds.front());
      kgqr::agent::load_checkpoint(checkpoint, *agent);
      auto report = ex::evaluate_greedy(*agent, data, cfg);
      report.config_hash = header.config_hash;
      std::cout << kgqr::metrics::report_to_text(report);
    } else if (*compare) {
      std::cout << ex::comparison_text(ex::compare_runs(dir_a, dir_b));
    } else if (*synth) {
      std::ifstream in(spec_path);
      std::stringstream ss;
      ss << in.rdbuf();
      auto data = ex::synth_env(ex::parse_synth_spec(ss.str(), spec_path));
      ex::write_synth(data, synth_out);
      std::cout << "wrote " << data.item_tokens.size() << " items and "
                << data.user_primary.size() << " users to " << synth_out << '\n';
    } else if (*sweep) {
      auto cfg = ex::load_config(sweep_config);
      auto sizes = sizes_text.empty() ? cfg.candidate_sizes : parse_sizes(sizes_text);
      auto data = ex::ingest(cfg);
      describe(data);
      std::filesystem::create_directories(sweep_out);
      std::cout << ex::sweep_csv(ex::sweep_candidates(data, cfg, sizes, sweep_out));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
