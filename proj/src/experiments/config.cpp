#include "kgqr/experiments/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kgqr/agent/checkpoint.hpp"
#include "kgqr/error.hpp"
#include "kgqr/tsv.hpp"

namespace kgqr::experiments {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw ConfigError("expected a number, got '" + s + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ConfigError("expected a non-negative integer, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ConfigError("integer out of range: '" + s + "'");
  }
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("expected a boolean, got '" + s + "'");
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

template <typename T>
std::vector<T> to_list(const std::string& s, const std::function<T(const std::string&)>& conv) {
  std::vector<T> out;
  for (const auto& part : split(s, ',')) {
    const std::string t = trim(part);
    if (t.empty()) continue;
    out.push_back(conv(t));
  }
  if (out.empty()) throw ConfigError("expected a non-empty list");
  return out;
}

template <typename T>
std::string from_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::size_t to_size_or_all(const std::string& s) {
  return s == "all" ? kg::kUnboundedCandidates : static_cast<std::size_t>(to_u64(s));
}

std::string from_size_or_all(std::size_t n) {
  return n == kg::kUnboundedCandidates ? "all" : std::to_string(n);
}

struct Entry {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

using Registry = std::map<std::string, Entry>;

#define KGQR_SIZE(key, field)                                                             \
  r[key] = {[](ExperimentConfig& c, const std::string& v) { c.field = to_u64(v); },       \
            [](const ExperimentConfig& c) { return std::to_string(c.field); }}
#define KGQR_DOUBLE(key, field)                                                           \
  r[key] = {[](ExperimentConfig& c, const std::string& v) { c.field = to_double(v); },    \
            [](const ExperimentConfig& c) { return fmt(c.field); }}
#define KGQR_BOOL(key, field)                                                             \
  r[key] = {[](ExperimentConfig& c, const std::string& v) { c.field = to_bool(v); },      \
            [](const ExperimentConfig& c) { return from_bool(c.field); }}

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    r["dataset"] = {[](ExperimentConfig& c, const std::string& v) {
                      if (v != "files" && v != "synthetic") {
                        throw ConfigError("dataset must be 'files' or 'synthetic'");
                      }
                      c.dataset = v;
                    },
                    [](const ExperimentConfig& c) { return c.dataset; }};
    r["ratings"] = {[](ExperimentConfig& c, const std::string& v) { c.ratings = v; },
                    [](const ExperimentConfig& c) { return c.ratings.string(); }};
    r["triples"] = {[](ExperimentConfig& c, const std::string& v) { c.triples = v; },
                    [](const ExperimentConfig& c) { return c.triples.string(); }};
    r["links"] = {[](ExperimentConfig& c, const std::string& v) { c.links = v; },
                  [](const ExperimentConfig& c) { return c.links.string(); }};

    KGQR_SIZE("synth_clusters", synth.clusters);
    KGQR_SIZE("synth_items_per_cluster", synth.items_per_cluster);
    KGQR_SIZE("synth_users", synth.users);
    KGQR_DOUBLE("synth_noise", synth.noise);
    KGQR_SIZE("synth_attributes_per_cluster", synth.attributes_per_cluster);
    KGQR_SIZE("synth_related_per_item", synth.related_per_item);
    KGQR_DOUBLE("synth_distractor_rate", synth.distractor_rate);
    KGQR_DOUBLE("synth_observed_fraction", synth.observed_fraction);
    KGQR_DOUBLE("synth_popularity_skew", synth.popularity_skew);
    KGQR_SIZE("synth_seed", synth.seed);

    KGQR_BOOL("binarize", binarize);
    KGQR_DOUBLE("binarize_threshold", binarize_threshold);
    KGQR_SIZE("min_interactions", min_interactions);
    KGQR_DOUBLE("train_fraction", train_fraction);
    KGQR_SIZE("split_seed", split_seed);

    KGQR_DOUBLE("eta", eta);
    KGQR_BOOL("eta_any", eta_any);
    KGQR_DOUBLE("rating_min", scale.raw_min);
    KGQR_DOUBLE("rating_max", scale.raw_max);
    KGQR_DOUBLE("hit_threshold", scale.hit_threshold);
    KGQR_SIZE("simulator_epochs", simulator_mf.epochs);
    KGQR_DOUBLE("simulator_learning_rate", simulator_mf.learning_rate);
    KGQR_DOUBLE("simulator_regularization", simulator_mf.regularization);

    KGQR_SIZE("transe_epochs", transe.epochs);
    KGQR_DOUBLE("transe_learning_rate", transe.learning_rate);
    KGQR_DOUBLE("transe_margin", transe.margin);
    KGQR_SIZE("transe_negatives", transe.negatives_per_positive);
    KGQR_SIZE("item_mf_epochs", item_mf.epochs);
    KGQR_DOUBLE("item_mf_learning_rate", item_mf.learning_rate);
    KGQR_DOUBLE("item_mf_regularization", item_mf.regularization);

    KGQR_BOOL("kg_embeddings", agent.kg_embeddings);
    KGQR_BOOL("gcn_propagation", agent.gcn_propagation);
    KGQR_BOOL("candidate_selection", agent.candidate_selection);
    KGQR_SIZE("embedding_dim", agent.embedding_dim);
    KGQR_SIZE("hidden_dim", agent.hidden_dim);
    KGQR_SIZE("head_hidden", agent.head_hidden);
    KGQR_SIZE("gcn_layers", agent.gcn_layers);
    KGQR_SIZE("hops", agent.hops);
    r["candidate_max"] = {
        [](ExperimentConfig& c, const std::string& v) { c.agent.candidate_max = to_size_or_all(v); },
        [](const ExperimentConfig& c) { return from_size_or_all(c.agent.candidate_max); }};
    r["value_input"] = {[](ExperimentConfig& c, const std::string& v) {
                          if (v == "state") {
                            c.agent.value_input = agent::ValueInput::state;
                          } else if (v == "item") {
                            c.agent.value_input = agent::ValueInput::item;
                          } else {
                            throw ConfigError("value_input must be 'state' or 'item'");
                          }
                        },
                        [](const ExperimentConfig& c) {
                          return std::string(c.agent.value_input == agent::ValueInput::state
                                                 ? "state"
                                                 : "item");
                        }};
    KGQR_BOOL("mean_advantage", agent.mean_advantage);

    KGQR_DOUBLE("gamma", train.gamma);
    KGQR_DOUBLE("epsilon_start", train.epsilon_start);
    KGQR_DOUBLE("epsilon_end", train.epsilon_end);
    KGQR_SIZE("epsilon_decay_steps", train.epsilon_decay_steps);
    KGQR_DOUBLE("epsilon_decay_fraction", train.epsilon_decay_fraction);
    KGQR_DOUBLE("tau", train.tau);
    KGQR_SIZE("batch_size", train.batch_size);
    KGQR_SIZE("buffer_capacity", train.buffer_capacity);
    KGQR_SIZE("min_replay", train.min_replay);
    KGQR_DOUBLE("learning_rate", train.learning_rate);
    KGQR_SIZE("horizon", train.horizon);
    KGQR_SIZE("budget", train.budget);
    r["update_cadence"] = {[](ExperimentConfig& c, const std::string& v) {
                             if (v == "episode") {
                               c.train.cadence = agent::UpdateCadence::episode;
                             } else if (v == "step") {
                               c.train.cadence = agent::UpdateCadence::step;
                             } else {
                               throw ConfigError("update_cadence must be 'episode' or 'step'");
                             }
                           },
                           [](const ExperimentConfig& c) {
                             return std::string(c.train.cadence == agent::UpdateCadence::episode
                                                    ? "episode"
                                                    : "step");
                           }};
    KGQR_SIZE("updates_per_round", train.updates_per_round);
    KGQR_SIZE("eval_every", train.eval_every);
    r["eval_gamma"] = {[](ExperimentConfig& c, const std::string& v) {
                         if (v == "gamma") {
                           c.eval_gamma.reset();
                         } else {
                           c.eval_gamma = to_double(v);
                         }
                       },
                       [](const ExperimentConfig& c) {
                         return c.eval_gamma ? fmt(*c.eval_gamma) : std::string("gamma");
                       }};
    KGQR_SIZE("eval_users", eval_users);
    r["candidate_sizes"] = {[](ExperimentConfig& c, const std::string& v) {
                              c.candidate_sizes = to_list<std::size_t>(v, to_size_or_all);
                            },
                            [](const ExperimentConfig& c) {
                              std::string out;
                              for (std::size_t i = 0; i < c.candidate_sizes.size(); ++i) {
                                out += (i ? "," : "") + from_size_or_all(c.candidate_sizes[i]);
                              }
                              return out;
                            }};
    r["seeds"] = {[](ExperimentConfig& c, const std::string& v) {
                    c.seeds = to_list<std::uint64_t>(v, to_u64);
                  },
                  [](const ExperimentConfig& c) { return from_list(c.seeds); }};
    return r;
  }();
  return reg;
}

#undef KGQR_SIZE
#undef KGQR_DOUBLE
#undef KGQR_BOOL

template <typename F>
void for_each_assignment(const std::string& text, const std::string& name, F&& f) {
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = name + ":" + std::to_string(number);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      f(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
}

}  // namespace

void SynthSpec::validate() const {
  if (clusters < 2) throw ConfigError("synth: need at least 2 clusters");
  if (items_per_cluster < 2) throw ConfigError("synth: need at least 2 items per cluster");
  if (users < 2) throw ConfigError("synth: need at least 2 users");
  if (!(noise >= 0.0)) throw ConfigError("synth: noise must be >= 0");
  if (attributes_per_cluster == 0) throw ConfigError("synth: need at least 1 attribute per cluster");
  if (!(distractor_rate >= 0.0)) throw ConfigError("synth: distractor_rate must be >= 0");
  if (!(observed_fraction > 0.0 && observed_fraction <= 1.0)) {
    throw ConfigError("synth: observed_fraction must lie in (0, 1]");
  }
  if (!(popularity_skew >= 0.0)) throw ConfigError("synth: popularity_skew must be >= 0");
}

void ExperimentConfig::validate() const {
  if (dataset == "synthetic") {
    synth.validate();
  } else {
    for (const auto* p : {&ratings, &triples, &links}) {
      if (p->empty()) throw ConfigError("ratings, triples and links paths are required");
      if (!std::filesystem::exists(*p)) throw ConfigError("no such file: " + p->string());
    }
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (!eta_any && eta != 0.0 && eta != 0.1 && eta != 0.2) {
    throw ConfigError("eta must be one of 0.0, 0.1, 0.2 (set eta_any = true to override)");
  }
  if (!(eta >= 0.0)) throw ConfigError("eta must be >= 0");
  if (!(scale.raw_max > scale.raw_min)) throw ConfigError("rating_max must exceed rating_min");
  if (!(effective_eval_gamma() >= 0.0 && effective_eval_gamma() <= 1.0)) throw ConfigError("eval_gamma must lie in [0, 1]");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  for (std::size_t s : candidate_sizes) {
    if (s == 0) throw ConfigError("candidate sizes must be >= 1");
  }
  transe.validate();
  agent.validate();
  train.validate();
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto& reg = registry();
  auto it = reg.find(key);
  if (it == reg.end()) throw ConfigError("unknown key '" + key + "'");
  it->second.set(cfg, value);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : registry()) keys.push_back(k);
  return keys;
}

ExperimentConfig parse_config(const std::string& text, const std::string& name) {
  ExperimentConfig cfg;
  for_each_assignment(text, name, [&](const std::string& k, const std::string& v) {
    set_config_value(cfg, k, v);
  });
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str(), path.string());
  // Relative data paths resolve against the config's directory.
  const auto base = path.parent_path();
  for (auto* p : {&cfg.ratings, &cfg.triples, &cfg.links}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return cfg;
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [k, e] : registry()) out += k + " = " + e.get(cfg) + "\n";
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return agent::fnv1a64(canonical_config(cfg));
}

SynthSpec parse_synth_spec(const std::string& text, const std::string& name) {
  ExperimentConfig cfg;
  for_each_assignment(text, name, [&](const std::string& k, const std::string& v) {
    if (k.rfind("synth_", 0) == 0 || registry().count("synth_" + k) == 0) {
      throw ConfigError("unknown key '" + k + "'");
    }
    set_config_value(cfg, "synth_" + k, v);
  });
  cfg.synth.validate();
  return cfg.synth;
}

}  // namespace kgqr::experiments
