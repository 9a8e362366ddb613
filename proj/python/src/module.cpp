#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "kgqr/agent/dqn.hpp"
#include "kgqr/error.hpp"
#include "kgqr/experiments/config.hpp"
#include "kgqr/experiments/run.hpp"
#include "kgqr/experiments/synth.hpp"
#include "kgqr/kg/knowledge_graph.hpp"
#include "kgqr/kg/neighborhood.hpp"
#include "kgqr/metrics/metrics.hpp"
#include "kgqr/metrics/wilcoxon.hpp"

namespace py = pybind11;
namespace ex = kgqr::experiments;
using namespace kgqr;

namespace {

py::dict report_dict(const metrics::EvaluationReport& r) {
  py::dict d;
  d["reward"] = r.average_reward;
  d["precision"] = r.precision;
  d["recall"] = r.recall;
  d["horizon"] = r.horizon;
  d["gamma"] = r.gamma;
  d["interactions"] = r.interactions;
  d["config_hash"] = r.config_hash;
  py::list users;
  for (const auto& u : r.per_user) {
    py::dict row;
    row["user"] = u.user;
    row["reward"] = u.reward;
    row["precision"] = u.precision;
    row["recall"] = u.recall;
    row["preferences"] = u.preferences;
    users.append(row);
  }
  d["per_user"] = users;
  return d;
}

py::list curve_list(const std::vector<ex::CurvePoint>& curve) {
  py::list out;
  for (const auto& p : curve) {
    py::dict row;
    row["interactions"] = p.interactions;
    row["reward"] = p.reward;
    row["precision"] = p.precision;
    row["recall"] = p.recall;
    out.append(row);
  }
  return out;
}

std::vector<sim::EpisodeLog> logs_of(const std::vector<std::vector<double>>& rewards,
                                     const std::vector<std::vector<bool>>& hits) {
  std::vector<sim::EpisodeLog> logs(rewards.size());
  for (std::size_t u = 0; u < rewards.size(); ++u) {
    logs[u].user = static_cast<sim::UserId>(u);
    for (std::size_t t = 0; t < rewards[u].size(); ++t) {
      sim::StepRecord s;
      s.reward = rewards[u][t];
      s.hit = u < hits.size() && t < hits[u].size() && hits[u][t];
      logs[u].steps.push_back(s);
    }
  }
  return logs;
}

}  // namespace

PYBIND11_MODULE(_kgqr, m) {
  m.doc() = "knowledge-graph enhanced Q-learning recommender";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<ex::ExperimentConfig>(m, "Config")
      .def(py::init<>())
      .def_static("parse", &ex::parse_config, py::arg("text"), py::arg("name") = "<config>")
      .def_static("load", [](const std::filesystem::path& p) { return ex::load_config(p); })
      .def("set", [](ex::ExperimentConfig& c, const std::string& k, const std::string& v) {
        ex::set_config_value(c, k, v);
        return &c;
      }, py::return_value_policy::reference_internal)
      .def("validate", &ex::ExperimentConfig::validate)
      .def("canonical", [](const ex::ExperimentConfig& c) { return ex::canonical_config(c); })
      .def_property_readonly("hash", [](const ex::ExperimentConfig& c) { return ex::config_hash(c); })
      .def_property_readonly("variant", [](const ex::ExperimentConfig& c) { return c.agent.variant_name(); })
      .def_property_readonly("seeds", [](const ex::ExperimentConfig& c) { return c.seeds; })
      .def("__repr__", [](const ex::ExperimentConfig& c) {
        return "<kgqr.Config " + c.agent.variant_name() + " budget=" + std::to_string(c.train.budget) + ">";
      });
  m.def("config_keys", &ex::config_keys);

  m.def("synth", [](const std::string& spec_text) {
    auto d = ex::synth_env(ex::parse_synth_spec(spec_text));
    py::dict out;
    out["ratings"] = d.ratings_tsv;
    out["triples"] = d.triples_tsv;
    out["links"] = d.links_tsv;
    out["item_cluster"] = d.item_cluster;
    out["user_primary"] = d.user_primary;
    out["user_secondary"] = d.user_secondary;
    return out;
  }, py::arg("spec") = "", "Generate the clustered toy world from `key = value` spec text.");
  m.def("write_synth", [](const std::string& spec_text, const std::filesystem::path& dir) {
    ex::write_synth(ex::synth_env(ex::parse_synth_spec(spec_text)), dir);
  }, py::arg("spec"), py::arg("dir"));

  py::class_<ex::Dataset>(m, "Dataset")
      .def_property_readonly("users", [](const ex::Dataset& d) { return d.ratings.user_count(); })
      .def_property_readonly("items", [](const ex::Dataset& d) { return d.ratings.item_count(); })
      .def_property_readonly("interactions", [](const ex::Dataset& d) { return d.ratings.ratings.size(); })
      .def_property_readonly("entities", [](const ex::Dataset& d) { return d.graph.entity_count(); })
      .def_property_readonly("unlinked_items", [](const ex::Dataset& d) { return d.unlinked_items; })
      .def_property_readonly("train_users", [](const ex::Dataset& d) { return d.train_users; })
      .def_property_readonly("test_users", [](const ex::Dataset& d) { return d.test_users; })
      .def_property_readonly("test_preferences", [](const ex::Dataset& d) { return d.test_preferences; })
      .def("predict", [](const ex::Dataset& d, sim::UserId u, sim::ItemId i) {
        auto f = d.simulator.instinctive(u, i);
        return py::make_tuple(f.raw, f.normalized, f.hit);
      }, py::arg("user"), py::arg("item"), "(raw, normalized, hit) from the simulator");

  m.def("ingest", py::overload_cast<const ex::ExperimentConfig&>(&ex::ingest),
        py::call_guard<py::gil_scoped_release>());
  m.def("ingest_text", [](const std::string& ratings, const std::string& triples,
                          const std::string& links, const ex::ExperimentConfig& cfg) {
    std::istringstream r(ratings), t(triples), l(links);
    return ex::ingest(r, t, l, cfg);
  }, py::arg("ratings"), py::arg("triples"), py::arg("links"), py::arg("config"));

  m.def("run_seed", [](const ex::Dataset& d, const ex::ExperimentConfig& cfg, std::uint64_t seed,
                       const std::filesystem::path& out) {
    ex::RunArtifacts a;
    {
      py::gil_scoped_release nogil;
      a = ex::run_seed(d, cfg, seed, out);
    }
    py::dict r;
    r["seed"] = a.seed;
    r["curve"] = curve_list(a.curve);
    r["curve_csv"] = ex::curve_csv(a.curve, a.seed);
    r["report"] = report_dict(a.report);
    r["interactions"] = a.interactions;
    r["updates"] = a.updates;
    r["config_hash"] = a.config_hash;
    r["checkpoint"] = a.checkpoint.string();
    return r;
  }, py::arg("dataset"), py::arg("config"), py::arg("seed"), py::arg("out_dir") = std::filesystem::path{});

  m.def("evaluate_random", [](const ex::Dataset& d, const ex::ExperimentConfig& cfg, std::uint64_t seed) {
    return report_dict(ex::evaluate_random(d, cfg, seed));
  }, py::arg("dataset"), py::arg("config"), py::arg("seed"));

  m.def("compare_runs", [](const std::filesystem::path& a, const std::filesystem::path& b, double alpha) {
    py::list out;
    for (const auto& c : ex::compare_runs(a, b, alpha)) {
      py::dict row;
      row["metric"] = c.metric;
      row["mean_a"] = c.mean_a;
      row["mean_b"] = c.mean_b;
      row["statistic"] = c.statistic;
      row["p_value"] = c.p_value;
      row["significant"] = c.significant;
      out.append(row);
    }
    return out;
  }, py::arg("a"), py::arg("b"), py::arg("alpha") = 0.05);

  m.def("interactions_to_threshold", [](const std::vector<std::pair<std::size_t, double>>& curve,
                                        double threshold) {
    std::vector<ex::CurvePoint> c;
    for (auto [n, r] : curve) c.push_back({n, r, 0.0, 0.0});
    return ex::interactions_to_threshold(c, threshold);
  }, py::arg("curve"), py::arg("threshold"), "curve: [(interactions, reward)]; None when never reached");

  py::class_<kg::LoadedGraph>(m, "Graph")
      .def_static("parse", [](const std::string& triples, const std::string& links) {
        std::istringstream t(triples), l(links);
        return kg::load_graph(t, l);
      }, py::arg("triples"), py::arg("links") = "")
      .def_property_readonly("entities", [](const kg::LoadedGraph& g) { return g.entity_tokens; })
      .def_property_readonly("relations", [](const kg::LoadedGraph& g) { return g.relation_tokens; })
      .def_property_readonly("items", [](const kg::LoadedGraph& g) { return g.item_tokens; })
      .def_property_readonly("triple_count", [](const kg::LoadedGraph& g) { return g.graph.triples().size(); })
      .def("entity_of", [](const kg::LoadedGraph& g, kg::ItemId i) { return g.graph.entity_of(i); })
      .def("neighbors", [](const kg::LoadedGraph& g, kg::EntityId h) {
        auto s = g.graph.neighbors(h);
        return std::vector<kg::EntityId>(s.begin(), s.end());
      })
      .def("k_hop_sets", [](const kg::LoadedGraph& g, const std::vector<kg::EntityId>& seeds, std::size_t k) {
        return kg::k_hop_sets(g.graph, seeds, k);
      }, py::arg("seeds"), py::arg("k"))
      .def("candidates", [](const kg::LoadedGraph& g, const std::vector<kg::EntityId>& seeds, std::size_t k,
                            std::optional<std::size_t> max_size, const std::vector<kg::ItemId>& excluded) {
        return kg::candidate_items(g.graph, seeds, k, max_size.value_or(kg::kUnboundedCandidates), excluded).items;
      }, py::arg("seeds"), py::arg("k"), py::arg("max_size") = py::none(),
         py::arg("excluded") = std::vector<kg::ItemId>{});

  m.def("average_reward", [](const std::vector<std::vector<double>>& rewards, double gamma) {
    return metrics::average_reward(logs_of(rewards, {}), gamma);
  }, py::arg("rewards"), py::arg("gamma"), "rewards: one list per user, all of length T");
  m.def("precision_at_T", [](const std::vector<std::vector<bool>>& hits) {
    std::vector<std::vector<double>> zeros;
    for (const auto& h : hits) zeros.emplace_back(h.size(), 0.0);
    return metrics::precision_at_T(logs_of(zeros, hits));
  }, py::arg("hits"));
  m.def("recall_at_T", [](const std::vector<std::vector<bool>>& hits,
                          const std::vector<std::size_t>& preferences) {
    std::vector<std::vector<double>> zeros;
    for (const auto& h : hits) zeros.emplace_back(h.size(), 0.0);
    return metrics::recall_at_T(logs_of(zeros, hits), preferences);
  }, py::arg("hits"), py::arg("preferences"));

  m.def("wilcoxon", [](const std::vector<double>& a, const std::vector<double>& b) {
    auto w = metrics::wilcoxon_signed_rank(a, b);
    py::dict d;
    d["statistic"] = w.statistic;
    d["w_plus"] = w.w_plus;
    d["p_value"] = w.p_value;
    d["n"] = w.n;
    d["exact"] = w.exact;
    d["degenerate"] = w.degenerate;
    return d;
  }, py::arg("a"), py::arg("b"));

  m.def("double_q_target", [](double reward, bool terminal, double gamma,
                              const std::vector<double>& online, const std::vector<double>& target,
                              const std::vector<kg::ItemId>& items) {
    return agent::double_q_target(reward, terminal, gamma, online, target, items);
  }, py::arg("reward"), py::arg("terminal"), py::arg("gamma"), py::arg("online"), py::arg("target"),
     py::arg("items"));
}
