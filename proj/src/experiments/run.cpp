#include "kgqr/experiments/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "kgqr/agent/checkpoint.hpp"
#include "kgqr/agent/trainer.hpp"
#include "kgqr/error.hpp"
#include "kgqr/experiments/synth.hpp"
#include "kgqr/kg/transe.hpp"
#include "kgqr/metrics/wilcoxon.hpp"
#include "kgqr/tsv.hpp"

namespace kgqr::experiments {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ParseError("cannot open " + p.string());
  return in;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

Dataset ingest(std::istream& ratings, std::istream& triples, std::istream& links,
               const ExperimentConfig& cfg) {
  Dataset d;
  d.loaded = kg::load_graph(triples, links, cfg.triples.empty() ? "<triples>" : cfg.triples.string(),
                            cfg.links.empty() ? "<links>" : cfg.links.string());
  d.ratings = sim::load_ratings(ratings, cfg.ratings.empty() ? "<ratings>" : cfg.ratings.string(),
                                d.loaded.item_tokens);
  if (cfg.binarize) sim::binarize(d.ratings, cfg.binarize_threshold);
  d.dropped_users = sim::filter_min_interactions(d.ratings, cfg.min_interactions);
  if (d.ratings.ratings.empty()) throw ConfigError("no interactions left after filtering");
  d.graph = kg::bind_catalog(d.loaded, d.ratings.item_tokens);
  d.unlinked_items = d.graph.item_count() - d.graph.linked_item_count();

  const auto users = sim::active_users(d.ratings);
  std::tie(d.train_users, d.test_users) = sim::split_users(users, cfg.train_fraction, cfg.split_seed);

  sim::MfConfig mf = cfg.simulator_mf;
  mf.dimension = sim::SimulatorModel::kFactorDimension;
  d.simulator = sim::SimulatorModel::fit(d.ratings.ratings, d.ratings.user_count(),
                                         d.ratings.item_count(), mf, cfg.scale, cfg.eta,
                                         cfg.split_seed);
  d.popularity_all = sim::build_popularity(d.ratings.ratings, d.train_users, d.ratings.item_count());
  d.popularity_linked = sim::build_popularity(d.ratings.ratings, d.train_users,
                                              d.ratings.item_count(), d.graph.linked_items());
  for (sim::UserId u : d.test_users) d.test_preferences.push_back(d.simulator.preference_count(u));
  return d;
}

Dataset ingest(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.dataset == "synthetic") {
    SynthData s = synth_env(cfg.synth);
    std::istringstream r(s.ratings_tsv), t(s.triples_tsv), l(s.links_tsv);
    return ingest(r, t, l, cfg);
  }
  auto t = open_input(cfg.triples);
  auto l = open_input(cfg.links);
  auto r = open_input(cfg.ratings);
  return ingest(r, t, l, cfg);
}

const sim::PopularityTable& popularity_for(const Dataset& data, const agent::AgentConfig& cfg) {
  return cfg.kg_embeddings ? data.popularity_linked : data.popularity_all;
}

std::unique_ptr<agent::KgqrAgent> make_agent(const Dataset& data, const ExperimentConfig& cfg,
                                             std::uint64_t seed) {
  const std::size_t d = cfg.agent.embedding_dim;
  numerics::Tensor table;
  if (cfg.agent.kg_embeddings) {
    kg::TranseConfig t = cfg.transe;
    t.dimension = d;
    table = kg::transe_pretrain(data.graph, t, seed).entities;
  } else {
    sim::MfConfig m = cfg.item_mf;
    m.dimension = d;
    std::vector<bool> is_train(data.ratings.user_count(), false);
    for (sim::UserId u : data.train_users) is_train[u] = true;
    std::vector<sim::Rating> train;
    for (const auto& r : data.ratings.ratings) {
      if (is_train[r.user]) train.push_back(r);
    }
    table = sim::fit_mf(train, data.ratings.user_count(), data.ratings.item_count(), m, seed)
                .item_factors;
  }
  return std::make_unique<agent::KgqrAgent>(data.graph, cfg.agent, std::move(table), seed);
}

std::vector<sim::UserId> evaluation_users(const Dataset& data, const ExperimentConfig& cfg) {
  std::vector<sim::UserId> users = data.test_users;
  if (cfg.eval_users > 0 && users.size() > cfg.eval_users) users.resize(cfg.eval_users);
  return users;
}

namespace {

std::vector<std::size_t> preferences_of(const Dataset& data, const std::vector<sim::UserId>& users) {
  std::vector<std::size_t> out;
  out.reserve(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    auto it = std::lower_bound(data.test_users.begin(), data.test_users.end(), users[i]);
    if (it != data.test_users.end() && *it == users[i]) {
      out.push_back(data.test_preferences[static_cast<std::size_t>(it - data.test_users.begin())]);
    } else {
      out.push_back(data.simulator.preference_count(users[i]));
    }
  }
  return out;
}

}  // namespace

metrics::EvaluationReport evaluate_greedy(agent::KgqrAgent& agent, const Dataset& data,
                                          const ExperimentConfig& cfg) {
  const auto users = evaluation_users(data, cfg);
  const auto& popularity = popularity_for(data, agent.config());
  std::vector<sim::EpisodeLog> logs;
  logs.reserve(users.size());
  for (sim::UserId u : users) {
    logs.push_back(agent::greedy_episode(agent, data.simulator, popularity, u, cfg.train.horizon));
  }
  auto prefs = preferences_of(data, users);
  return metrics::evaluate_logs(logs, prefs, cfg.effective_eval_gamma());
}

metrics::EvaluationReport evaluate_random(const Dataset& data, const ExperimentConfig& cfg,
                                          std::uint64_t seed) {
  const auto users = evaluation_users(data, cfg);
  const auto& popularity = popularity_for(data, cfg.agent);
  std::vector<sim::ItemId> space;
  if (cfg.agent.kg_embeddings) {
    space.assign(data.graph.linked_items().begin(), data.graph.linked_items().end());
  } else {
    for (sim::ItemId i = 0; i < data.graph.item_count(); ++i) space.push_back(i);
  }
  if (space.size() < cfg.train.horizon) throw ConfigError("catalog smaller than the horizon");
  std::mt19937_64 rng(seed);
  std::vector<sim::EpisodeLog> logs;
  for (sim::UserId u : users) {
    sim::EpisodeState st = sim::reset(data.simulator, u, popularity, cfg.train.horizon);
    std::vector<sim::ItemId> unseen;
    for (sim::ItemId i : space) {
      if (!st.was_recommended(i)) unseen.push_back(i);
    }
    while (!st.done) {
      std::uniform_int_distribution<std::size_t> pick(0, unseen.size() - 1);
      const std::size_t k = pick(rng);
      const sim::ItemId item = unseen[k];
      unseen.erase(unseen.begin() + static_cast<std::ptrdiff_t>(k));
      sim::step(st, data.simulator, item);
    }
    logs.push_back(std::move(st.log));
  }
  auto prefs = preferences_of(data, users);
  return metrics::evaluate_logs(logs, prefs, cfg.effective_eval_gamma());
}

std::string curve_csv(const std::vector<CurvePoint>& curve, std::uint64_t seed) {
  std::ostringstream os;
  os << "interactions,reward,precision,recall,seed\n";
  for (const auto& p : curve) {
    os << p.interactions << ',' << fmt(p.reward) << ',' << fmt(p.precision) << ','
       << fmt(p.recall) << ',' << seed << '\n';
  }
  return os.str();
}

std::vector<CurvePoint> parse_curve_csv(std::istream& in, const std::string& name) {
  std::vector<CurvePoint> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || number == 1) continue;
    auto cols = split(line, ',');
    if (cols.size() != 5) throw ParseError(name + ":" + std::to_string(number) + ": expected 5 columns");
    try {
      out.push_back({std::stoull(cols[0]), std::stod(cols[1]), std::stod(cols[2]),
                     std::stod(cols[3])});
    } catch (const std::exception&) {
      throw ParseError(name + ":" + std::to_string(number) + ": bad number");
    }
  }
  return out;
}

RunArtifacts run_seed(const Dataset& data, const ExperimentConfig& cfg, std::uint64_t seed,
                      const std::filesystem::path& out_dir) {
  RunArtifacts art;
  art.seed = seed;
  art.config_text = canonical_config(cfg);
  art.config_hash = agent::fnv1a64(art.config_text);
  auto agent_ptr = make_agent(data, cfg, seed);
  agent::KgqrAgent& ag = *agent_ptr;

  agent::Environment env;
  env.simulator = &data.simulator;
  env.popularity = &popularity_for(data, cfg.agent);
  env.train_users = data.train_users;
  auto on_eval = [&](agent::KgqrAgent& a, std::size_t interactions) {
    art.report = evaluate_greedy(a, data, cfg);
    art.curve.push_back({interactions, art.report.average_reward, art.report.precision,
                         art.report.recall});
  };
  auto stats = agent::train(ag, env, cfg.train, seed, on_eval);
  art.interactions = stats.interactions;
  art.updates = stats.updates;
  art.report.interactions = stats.interactions;
  art.report.config_hash = art.config_hash;

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    art.directory = out_dir;
    art.checkpoint = out_dir / "checkpoint.bin";
    write_file_atomic((out_dir / "curve.csv").string(), curve_csv(art.curve, seed));
    write_file_atomic((out_dir / "report.txt").string(), metrics::report_to_text(art.report));
    write_file_atomic((out_dir / "per_user.csv").string(), metrics::per_user_csv(art.report));
    write_file_atomic((out_dir / "config.txt").string(), art.config_text);
    agent::save_checkpoint(art.checkpoint, ag, art.config_text);
  }
  return art;
}

Aggregate aggregate(const std::vector<RunArtifacts>& runs) {
  std::vector<double> r, p, c;
  for (const auto& a : runs) {
    r.push_back(a.report.average_reward);
    p.push_back(a.report.precision);
    c.push_back(a.report.recall);
  }
  return {mean_of(r), std_of(r), mean_of(p), std_of(p), mean_of(c), std_of(c)};
}

std::string aggregate_text(const Aggregate& a, std::size_t runs) {
  std::ostringstream os;
  os << "runs = " << runs << '\n'
     << "reward_mean = " << fmt(a.reward_mean) << '\n'
     << "reward_std = " << fmt(a.reward_std) << '\n'
     << "precision_mean = " << fmt(a.precision_mean) << '\n'
     << "precision_std = " << fmt(a.precision_std) << '\n'
     << "recall_mean = " << fmt(a.recall_mean) << '\n'
     << "recall_std = " << fmt(a.recall_std) << '\n';
  return os.str();
}

std::vector<RunArtifacts> run_experiment(const ExperimentConfig& cfg,
                                         const std::filesystem::path& out_dir) {
  Dataset data = ingest(cfg);
  std::vector<RunArtifacts> runs;
  for (std::uint64_t seed : cfg.seeds) {
    const auto dir = out_dir.empty() ? std::filesystem::path{}
                                     : out_dir / ("seed_" + std::to_string(seed));
    runs.push_back(run_seed(data, cfg, seed, dir));
  }
  if (!out_dir.empty()) {
    write_file_atomic((out_dir / "aggregate.txt").string(), aggregate_text(aggregate(runs), runs.size()));
  }
  return runs;
}

std::optional<std::size_t> interactions_to_threshold(const std::vector<CurvePoint>& curve,
                                                     double threshold) {
  for (const auto& p : curve) {
    if (p.reward >= threshold) return p.interactions;
  }
  return std::nullopt;
}

std::vector<MetricComparison> compare_users(const std::vector<metrics::UserMetrics>& a,
                                            const std::vector<metrics::UserMetrics>& b,
                                            double alpha) {
  std::map<sim::UserId, const metrics::UserMetrics*> by_user;
  for (const auto& u : b) by_user[u.user] = &u;
  if (a.size() != b.size() || by_user.size() != b.size()) {
    throw std::invalid_argument("compare: runs cover different users");
  }
  std::vector<double> ar, br, ap, bp, ac, bc;
  for (const auto& u : a) {
    auto it = by_user.find(u.user);
    if (it == by_user.end()) throw std::invalid_argument("compare: runs cover different users");
    ar.push_back(u.reward);
    br.push_back(it->second->reward);
    ap.push_back(u.precision);
    bp.push_back(it->second->precision);
    ac.push_back(u.recall);
    bc.push_back(it->second->recall);
  }
  auto row = [&](const char* name, const std::vector<double>& x, const std::vector<double>& y) {
    MetricComparison m;
    m.metric = name;
    m.mean_a = mean_of(x);
    m.mean_b = mean_of(y);
    try {
      auto w = metrics::wilcoxon_signed_rank(x, y);
      m.statistic = w.statistic;
      m.p_value = w.p_value;
    } catch (const std::invalid_argument&) {
      m.p_value = 1.0;  // fewer than five informative pairs
    }
    m.significant = m.p_value < alpha;
    return m;
  };
  return {row("reward", ar, br), row("precision", ap, bp), row("recall", ac, bc)};
}

namespace {

std::vector<metrics::UserMetrics> seed_averaged(const std::filesystem::path& dir,
                                                std::vector<std::string>& seeds) {
  std::vector<std::filesystem::path> runs;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_directory() && e.path().filename().string().rfind("seed_", 0) == 0) {
      runs.push_back(e.path());
    }
  }
  std::sort(runs.begin(), runs.end());
  if (runs.empty()) throw ParseError(dir.string() + ": no seed_* run directories");
  std::map<sim::UserId, metrics::UserMetrics> sum;
  std::map<sim::UserId, std::size_t> count;
  for (const auto& r : runs) {
    seeds.push_back(r.filename().string());
    auto in = open_input(r / "per_user.csv");
    for (const auto& u : metrics::parse_per_user_csv(in, (r / "per_user.csv").string())) {
      auto& s = sum[u.user];
      s.user = u.user;
      s.reward += u.reward;
      s.precision += u.precision;
      s.recall += u.recall;
      s.preferences = u.preferences;
      ++count[u.user];
    }
  }
  std::vector<metrics::UserMetrics> out;
  for (auto& [user, s] : sum) {
    if (count[user] != runs.size()) {
      throw std::invalid_argument(dir.string() + ": user " + std::to_string(user) +
                                  " missing from some seeds");
    }
    const auto n = static_cast<double>(runs.size());
    s.reward /= n;
    s.precision /= n;
    s.recall /= n;
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<MetricComparison> compare_runs(const std::filesystem::path& a,
                                           const std::filesystem::path& b, double alpha) {
  std::vector<std::string> seeds_a, seeds_b;
  auto ua = seed_averaged(a, seeds_a);
  auto ub = seed_averaged(b, seeds_b);
  if (seeds_a.size() != seeds_b.size()) {
    throw std::invalid_argument("compare: run sets have different seed counts");
  }
  return compare_users(ua, ub, alpha);
}

std::string comparison_text(const std::vector<MetricComparison>& rows) {
  std::ostringstream os;
  os << "metric,mean_a,mean_b,statistic,p_value,significant\n";
  for (const auto& r : rows) {
    os << r.metric << ',' << fmt(r.mean_a) << ',' << fmt(r.mean_b) << ',' << fmt(r.statistic)
       << ',' << fmt(r.p_value) << ',' << (r.significant ? "yes" : "no") << '\n';
  }
  return os.str();
}

std::vector<SweepPoint> sweep_candidates(const Dataset& data, const ExperimentConfig& cfg,
                                         const std::vector<std::size_t>& sizes,
                                         const std::filesystem::path& out_dir) {
  if (!cfg.agent.candidate_selection) {
    throw ConfigError("candidate sweep needs candidate_selection = true");
  }
  std::vector<SweepPoint> out;
  for (std::size_t size : sizes) {
    ExperimentConfig c = cfg;
    c.agent.candidate_max = size;
    const std::string label = size == kg::kUnboundedCandidates ? "all" : std::to_string(size);
    for (std::uint64_t seed : cfg.seeds) {
      const auto dir = out_dir.empty() ? std::filesystem::path{}
                                       : out_dir / ("size_" + label) / ("seed_" + std::to_string(seed));
      out.push_back({size, seed, run_seed(data, c, seed, dir).report});
    }
  }
  if (!out_dir.empty()) write_file_atomic((out_dir / "sweep.csv").string(), sweep_csv(out));
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os << "candidate_max,seed,reward,precision,recall\n";
  for (const auto& p : points) {
    os << (p.candidate_max == kg::kUnboundedCandidates ? std::string("all")
                                                       : std::to_string(p.candidate_max))
       << ',' << p.seed << ',' << fmt(p.report.average_reward) << ',' << fmt(p.report.precision)
       << ',' << fmt(p.report.recall) << '\n';
  }
  return os.str();
}

}  // namespace kgqr::experiments
