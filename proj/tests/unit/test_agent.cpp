#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "kgqr/agent/checkpoint.hpp"
#include "kgqr/agent/dqn.hpp"
#include "kgqr/agent/trainer.hpp"
#include "kgqr/error.hpp"
#include "kgqr/sim/episode.hpp"
#include "oracles.hpp"

using namespace kgqr;
using namespace kgqr::agent;

namespace {

// 12 items in 3 clusters of 4; entities 0..11 are the items, 12..14 the
// cluster attributes. item -> attribute and attribute -> item.
kg::KnowledgeGraph toy_graph() {
  std::vector<kg::Triple> triples;
  std::vector<std::optional<kg::EntityId>> links;
  for (kg::EntityId i = 0; i < 12; ++i) {
    const kg::EntityId attr = 12 + i / 4;
    triples.push_back({i, 0, attr});
    triples.push_back({attr, 1, i});
    links.emplace_back(i);
  }
  return kg::KnowledgeGraph(15, 2, std::move(triples), std::move(links));
}

sim::SimulatorModel toy_model(std::size_t users) {
  sim::MfModel mf;
  mf.user_factors = Tensor(users, sim::SimulatorModel::kFactorDimension);
  mf.item_factors = Tensor(12, sim::SimulatorModel::kFactorDimension);
  mf.user_bias.assign(users, 0.0);
  for (int i = 0; i < 12; ++i) mf.item_bias.push_back(i < 4 ? 4.5 : 2.0 + 0.1 * i);
  return sim::SimulatorModel(mf, sim::RewardScale{1.0, 5.0, 3.5}, 0.1);
}

sim::PopularityTable toy_popularity() {
  sim::PopularityTable t;
  for (sim::ItemId i = 0; i < 12; ++i) {
    t.items.push_back(i);
    t.counts.push_back(12 - i);
  }
  return t;
}

AgentConfig small_config(bool kg = true, bool gcn = true, bool cs = true) {
  AgentConfig c;
  c.kg_embeddings = kg;
  c.gcn_propagation = gcn;
  c.candidate_selection = cs;
  c.embedding_dim = 4;
  c.hidden_dim = 3;
  c.head_hidden = 5;
  c.gcn_layers = 2;
  c.hops = 2;
  return c;
}

Tensor base_table(const kg::KnowledgeGraph& g, const AgentConfig& c, std::uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  return Tensor::uniform(c.kg_embeddings ? g.entity_count() : g.item_count(), c.embedding_dim,
                         0.5, rng);
}

std::vector<double> flat(KgqrAgent& a) {
  std::vector<double> out;
  for (Parameter* p : a.all_parameters()) {
    out.insert(out.end(), p->value.values().begin(), p->value.values().end());
  }
  return out;
}

std::vector<Experience> toy_batch() {
  std::vector<Experience> b(4);
  b[0].observation = {0, 1};
  b[0].action = 2;
  b[0].reward = 0.7;
  b[0].next_observation = {0, 1, 2};
  b[0].next_candidates = {3, 5};
  b[1].observation = {};
  b[1].action = 5;
  b[1].reward = -0.3;
  b[1].next_observation = {};
  b[1].next_candidates = {0, 1, 2};
  b[2].observation = {4};
  b[2].action = 9;
  b[2].reward = 0.1;
  b[2].terminal = true;
  b[3].observation = {8, 3, 10};
  b[3].action = 11;
  b[3].reward = -0.9;
  b[3].next_observation = {8, 3, 10};
  b[3].next_candidates = {1, 7};
  return b;
}

std::vector<const Experience*> pointers(const std::vector<Experience>& b) {
  std::vector<const Experience*> out;
  for (const auto& e : b) out.push_back(&e);
  return out;
}

QNetConfig head_config() {
  QNetConfig c;
  c.state_dim = 3;
  c.item_dim = 2;
  c.hidden = 4;
  return c;
}

}  // namespace

TEST_CASE("dueling stub heads") {
  auto q = QNetParameters::zeros(head_config());
  Tensor s{{0.3, -1, 2}};
  Tensor items{{1, 2}, {-3, 0.5}};
  auto zero = score_candidates(q, s, items);
  CHECK(zero == std::vector<double>{0, 0});
  q.v_b2.value(0, 0) = 2.0;
  q.a_b2.value(0, 0) = -0.5;
  auto got = score_candidates(q, s, items);
  CHECK(got[0] == doctest::Approx(1.5));
  CHECK(got[1] == doctest::Approx(1.5));
  auto h = score_heads(q, s, items);
  CHECK(h.value[0] == doctest::Approx(2.0));
  CHECK(h.advantage[1] == doctest::Approx(-0.5));

  Tape t;
  auto vars = bind(t, q);
  Var states = t.constant(Tensor{{0.3, -1, 2}, {0.3, -1, 2}});
  Var it = t.constant(items);
  const Tensor out = t.value(q_value(t, vars, ValueInput::state, states, it));
  CHECK(out(0, 0) == doctest::Approx(1.5));
  CHECK(out(1, 0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(score_heads(q, Tensor(1, 2), items), DimensionError);
}

TEST_CASE("tape heads match forward scoring") {
  std::mt19937_64 rng(5);
  for (auto vi : {ValueInput::state, ValueInput::item}) {
    auto cfg = head_config();
    cfg.value_input = vi;
    auto q = QNetParameters::init(cfg, rng);
    Tensor s = Tensor::uniform(1, 3, 1.0, rng);
    Tensor items = Tensor::uniform(5, 2, 1.0, rng);
    auto fwd = score_candidates(q, s, items);
    Tape t;
    auto vars = bind(t, q);
    Tensor rep(5, 3);
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 3; ++c) rep(r, c) = s(0, c);
    const Tensor out = t.value(q_value(t, vars, vi, t.constant(rep), t.constant(items)));
    for (std::size_t r = 0; r < 5; ++r) CHECK(out(r, 0) == doctest::Approx(fwd[r]).epsilon(1e-12));
    auto mean = score_candidates(q, s, items, true);
    auto h = score_heads(q, s, items);
    double abar = 0;
    for (double a : h.advantage) abar += a / 5.0;
    for (std::size_t r = 0; r < 5; ++r) CHECK(mean[r] == doctest::Approx(fwd[r] - abar));
  }
}

TEST_CASE("head gradients") {
  std::mt19937_64 rng(11);
  for (auto vi : {ValueInput::state, ValueInput::item}) {
    for (int trial = 0; trial < 5; ++trial) {
      auto cfg = head_config();
      cfg.value_input = vi;
      auto q = QNetParameters::init(cfg, rng);
      for (Parameter* p : q.parameters())
        for (auto& v : p->value.values()) v += 0.05;  // off the ReLU kinks for biases
      Parameter s("s", Tensor::uniform(3, 3, 1.0, rng));
      Parameter it("i", Tensor::uniform(3, 2, 1.0, rng));
      auto params = q.parameters();
      params.push_back(&s);
      params.push_back(&it);
      auto r = oracle::gradcheck(params, [&](Tape& t) {
        auto vars = bind(t, q);
        Var out = q_value(t, vars, vi, t.param(s), t.param(it));
        return t.mean(t.mul(out, out));
      });
      CHECK(r.max_rel_error < 1e-5);
      CHECK(r.checked > 0);
    }
  }
}

TEST_CASE("select_action") {
  std::mt19937_64 rng(1);
  const std::vector<ItemId> items{7, 3, 9, 4};
  const std::vector<double> q{0.1, 0.8, 0.8, -1};
  CHECK(select_action(q, items, 0.0, rng) == 3);
  const std::vector<double> tie{1, 1, 1, 1};
  CHECK(select_action(tie, items, 0.0, rng) == 3);
  CHECK(argmax_lowest_id(tie, items) == 1);

  std::map<ItemId, int> counts;
  for (int i = 0; i < 10000; ++i) ++counts[select_action(q, items, 1.0, rng)];
  for (ItemId i : items) CHECK(std::abs(counts[i] / 10000.0 - 0.25) < 0.015);

  CHECK_THROWS_AS(select_action({}, std::span<const ItemId>{}, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(select_action(q, items, 1.5, rng), ConfigError);
  CHECK_THROWS_AS(select_action(q, items, -0.1, rng), ConfigError);
}

TEST_CASE("double-Q target") {
  const std::vector<ItemId> next{4, 8};
  const std::vector<double> online{1, 2}, target{10, -1};
  // online picks item 8, target scores it -1
  CHECK(double_q_target(0.0, false, 0.5, online, target, next) == doctest::Approx(-0.5));
  CHECK(double_q_target(0.7, true, 0.5, online, target, next) == doctest::Approx(0.7));
  CHECK(double_q_target(0.3, false, 0.0, online, target, next) == doctest::Approx(0.3));
  const std::vector<double> tied{2, 2};
  CHECK(double_q_target(0.0, false, 1.0, tied, target, next) == doctest::Approx(10.0));
  CHECK_THROWS_AS(double_q_target(0, false, 0.5, {}, {}, {}), std::invalid_argument);
  const std::vector<double> shorter{1};
  CHECK_THROWS_AS(double_q_target(0, false, 0.5, online, shorter, next), DimensionError);
}

TEST_CASE("squared error examples") {
  Tape t;
  Var q = t.constant(Tensor{{1}, {2}, {3}});
  const std::vector<double> same{1, 2, 3}, one{2, 3, 4}, mixed{1, 4, 2};
  CHECK(t.value(squared_error(t, q, same)).item() == doctest::Approx(0.0));
  CHECK(t.value(squared_error(t, q, one)).item() == doctest::Approx(1.0));
  CHECK(t.value(squared_error(t, q, mixed)).item() == doctest::Approx(5.0 / 3.0));
  CHECK_THROWS_AS(squared_error(t, q, std::span<const double>{}), std::invalid_argument);
  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(squared_error(t, q, two), DimensionError);
}

TEST_CASE("soft update") {
  auto cfg = head_config();
  std::mt19937_64 rng(2);
  auto online = QNetParameters::init(cfg, rng);
  auto target = QNetParameters::zeros(cfg);
  soft_update(target, online, 0.0);
  for (Parameter* p : target.parameters())
    for (double v : p->value.values()) CHECK(v == 0.0);
  soft_update(target, online, 1.0);
  auto tp = target.parameters();
  auto op = online.parameters();
  for (std::size_t i = 0; i < tp.size(); ++i) CHECK(tp[i]->value == op[i]->value);

  Parameter a("a", Tensor{{0.0}}), b("b", Tensor{{2.0}});
  Parameter* ta[] = {&a};
  const Parameter* ob[] = {&b};
  soft_update(ta, ob, 0.5);
  CHECK(a.value(0, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(soft_update(ta, ob, 1.5), ConfigError);
  Parameter c("c", Tensor(1, 2));
  const Parameter* oc[] = {&c};
  CHECK_THROWS_AS(soft_update(ta, oc, 0.5), DimensionError);
  CHECK_THROWS_AS(soft_update(std::span<Parameter* const>{}, ob, 0.5), DimensionError);

  // target lags: after n updates toward a fixed online value, gap = (1-τ)^n
  Parameter lag("l", Tensor{{0.0}});
  Parameter* tl[] = {&lag};
  Parameter one("o", Tensor{{1.0}});
  const Parameter* oo[] = {&one};
  for (int n = 0; n < 10; ++n) soft_update(tl, oo, 0.1);
  CHECK(1.0 - lag.value(0, 0) == doctest::Approx(std::pow(0.9, 10)));
}

TEST_CASE("replay buffer") {
  CHECK_THROWS_AS(ReplayBuffer(0), ConfigError);
  ReplayBuffer buf(3);
  for (ItemId i = 0; i < 5; ++i) {
    Experience e;
    e.action = i;
    buf.push(e);
  }
  CHECK(buf.size() == 3);
  CHECK(buf.at(0).action == 2);
  CHECK(buf.at(1).action == 3);
  CHECK(buf.at(2).action == 4);
  CHECK_THROWS_AS(buf.at(3), std::out_of_range);

  std::mt19937_64 rng(4);
  auto all = buf.sample(10, rng);
  CHECK(all.size() == 3);
  std::set<const Experience*> distinct(all.begin(), all.end());
  CHECK(distinct.size() == 3);

  ReplayBuffer big(10);
  for (ItemId i = 0; i < 10; ++i) {
    Experience e;
    e.action = i;
    big.push(e);
  }
  std::map<ItemId, int> hits;
  for (int k = 0; k < 4000; ++k) {
    auto s = big.sample(2, rng);
    REQUIRE(s.size() == 2);
    CHECK(s[0] != s[1]);
    for (auto* e : s) ++hits[e->action];
  }
  for (ItemId i = 0; i < 10; ++i) CHECK(std::abs(hits[i] / 8000.0 - 0.1) < 0.015);
}

TEST_CASE("variant wiring") {
  auto g = toy_graph();
  struct Row {
    bool kg, gcn, cs;
    const char* name;
    bool table_trainable;
  };
  for (Row r : {Row{false, false, false, "KGQR-KG", false}, Row{true, false, false, "KGQR-GCN-CS", false},
                Row{true, true, false, "KGQR-CS", true}, Row{true, true, true, "KGQR", true}}) {
    auto cfg = small_config(r.kg, r.gcn, r.cs);
    KgqrAgent a(g, cfg, base_table(g, cfg), 1);
    CHECK(a.config().variant_name() == r.name);
    bool has_table = false, has_gcn = false;
    for (Parameter* p : a.trainable_parameters()) {
      if (p->name == "embedding.table") has_table = true;
      if (p->name.rfind("gcn.", 0) == 0) has_gcn = true;
    }
    CHECK(has_table == r.table_trainable);
    CHECK(has_gcn == r.gcn);
    CHECK(a.action_space().size() == 12);
    const std::vector<ItemId> history{0}, excluded{0};
    auto c = a.candidates(history, excluded).items;
    if (r.cs) {
      // 2 hops: item 0 -> attribute 12 -> items 1..3
      CHECK(c == std::vector<ItemId>{1, 2, 3});
    } else {
      CHECK(c.size() == 11);
    }
  }
  auto bad = small_config(false, true, false);
  CHECK_THROWS_AS(KgqrAgent(g, bad, Tensor(15, 4), 1), ConfigError);
  CHECK_THROWS_AS(KgqrAgent(g, small_config(false, false, false), Tensor(15, 4), 1), DimensionError);
  CHECK_THROWS_AS(KgqrAgent(g, small_config(), Tensor(15, 5), 1), DimensionError);
}

TEST_CASE("frozen MF table stays put through an update") {
  auto g = toy_graph();
  auto cfg = small_config(false, false, false);
  KgqrAgent a(g, cfg, base_table(g, cfg), 1);
  const Tensor before = a.encoder().parameters().front()->value;
  numerics::Adam opt(a.trainable_parameters());
  auto b = toy_batch();
  update_step(a, opt, pointers(b), 0.9, 0.1);
  CHECK(a.encoder().parameters().front()->value == before);
}

TEST_CASE("compute_targets against hand evaluation") {
  auto g = toy_graph();
  auto cfg = small_config();
  KgqrAgent a(g, cfg, base_table(g, cfg), 2);
  // make target heads differ from online
  for (Parameter* p : a.target().parameters())
    for (auto& v : p->value.values()) v *= -0.5;
  a.mark_updated();
  auto b = toy_batch();
  auto y = compute_targets(a, pointers(b), 0.9);
  REQUIRE(y.size() == 4);
  CHECK(y[2] == doctest::Approx(0.1));
  for (std::size_t k : {0u, 1u, 3u}) {
    Tensor s = a.state_of(b[k].next_observation);
    auto on = a.q_values(s, b[k].next_candidates);
    auto tg = a.q_values(s, b[k].next_candidates, true);
    const std::size_t best = argmax_lowest_id(on, b[k].next_candidates);
    CHECK(y[k] == doctest::Approx(b[k].reward + 0.9 * tg[best]).epsilon(1e-12));
  }
  Experience broken;
  broken.action = 1;
  const Experience* one[] = {&broken};
  CHECK_THROWS_AS(compute_targets(a, one, 0.9), std::invalid_argument);
}

TEST_CASE("td_loss gradients reach every trainable group") {
  auto g = toy_graph();
  auto cfg = small_config();
  KgqrAgent a(g, cfg, base_table(g, cfg), 3);
  auto b = toy_batch();
  auto ptrs = pointers(b);
  auto y = compute_targets(a, ptrs, 0.9);
  for (Parameter* p : a.all_parameters()) p->zero_grad();
  Tape t;
  Var loss = td_loss(t, a, ptrs, y);
  t.backward(loss);
  for (Parameter* p : a.trainable_parameters()) {
    double n = 0;
    for (double v : p->grad.values()) n += v * v;
    INFO(p->name);
    CHECK(n > 0.0);
  }
  for (Parameter* p : a.target().parameters()) {
    for (double v : p->grad.values()) CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(td_loss(t, a, std::span<const Experience* const>{}, y), std::invalid_argument);
}

TEST_CASE("td_loss gradcheck through the full encoder") {
  auto g = toy_graph();
  for (bool mean_adv : {false, true}) {
    auto cfg = small_config();
    cfg.mean_advantage = mean_adv;
    KgqrAgent a(g, cfg, base_table(g, cfg), 4);
    auto b = toy_batch();
    if (mean_adv) {
      for (auto& e : b) e.candidates = {e.action, 6, 7};
    }
    auto ptrs = pointers(b);
    auto y = compute_targets(a, ptrs, 0.9);
    // empty history gives a zero state, which sits on the ReLU kink at b1 = 0
    for (auto& v : a.online().v_b1.value.values()) v = 0.05;
    auto params = a.trainable_parameters();
    auto r = oracle::gradcheck(params, [&](Tape& t) { return td_loss(t, a, ptrs, y); });
    CHECK(r.max_rel_error < 1e-4);
    CHECK(r.checked > 100);
  }
}

TEST_CASE("epsilon schedule") {
  TrainConfig c;
  c.budget = 1000;
  CHECK(c.decay_steps() == 200);
  CHECK(c.epsilon_at(0) == doctest::Approx(1.0));
  CHECK(c.epsilon_at(100) == doctest::Approx(0.525));
  CHECK(c.epsilon_at(200) == doctest::Approx(0.05));
  CHECK(c.epsilon_at(5000) == doctest::Approx(0.05));
  c.epsilon_decay_steps = 10;
  CHECK(c.epsilon_at(5) == doctest::Approx(0.525));
  c.gamma = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("episodes never repeat items and store consistent transitions") {
  auto g = toy_graph();
  auto model = toy_model(3);
  auto pop = toy_popularity();
  for (bool cs : {false, true}) {
    auto cfg = small_config(true, true, cs);
    KgqrAgent a(g, cfg, base_table(g, cfg), 5);
    std::mt19937_64 rng(6);
    std::vector<Experience> stored;
    auto log = run_episode(a, model, pop, 1, 10, [](std::size_t) { return 0.5; }, rng,
                           [&](Experience&& e) { stored.push_back(std::move(e)); });
    REQUIRE(log.steps.size() == 10);
    CHECK(log.steps[0].item == 0);
    std::set<ItemId> seen;
    for (const auto& s : log.steps) CHECK(seen.insert(s.item).second);
    REQUIRE(stored.size() == 10);
    CHECK(stored[0].observation.empty());
    CHECK(stored.back().terminal);
    CHECK(stored.back().next_candidates.empty());
    for (std::size_t t = 0; t < stored.size(); ++t) {
      const auto& e = stored[t];
      CHECK(e.action == log.steps[t].item);
      CHECK(e.reward == log.steps[t].reward);
      auto grown = e.observation;
      if (log.steps[t].hit) grown.push_back(e.action);
      CHECK(e.next_observation == grown);
      if (t + 1 < stored.size()) CHECK(stored[t + 1].observation == e.next_observation);
      for (ItemId c : e.next_candidates) {
        for (std::size_t k = 0; k <= t; ++k) CHECK(c != log.steps[k].item);
      }
    }
  }
  auto cfg = small_config();
  KgqrAgent a(g, cfg, base_table(g, cfg), 5);
  CHECK_THROWS_AS(greedy_episode(a, model, pop, 0, 13), ConfigError);
}

TEST_CASE("training") {
  auto g = toy_graph();
  auto model = toy_model(6);
  auto pop = toy_popularity();
  TrainConfig tc;
  tc.batch_size = 8;
  tc.budget = 300;
  tc.horizon = 6;
  tc.tau = 0.1;
  tc.learning_rate = 0.01;
  tc.eval_every = 60;

  SUBCASE("no users leaves parameters unchanged") {
    auto cfg = small_config();
    KgqrAgent a(g, cfg, base_table(g, cfg), 7);
    auto before = flat(a);
    Environment env{&model, &pop, {}};
    auto stats = train(a, env, tc, 1);
    CHECK(stats.interactions == 0);
    CHECK(flat(a) == before);
  }
  SUBCASE("same seed, same parameters") {
    auto cfg = small_config();
    Environment env{&model, &pop, {0, 1, 2, 3}};
    KgqrAgent a(g, cfg, base_table(g, cfg), 7);
    KgqrAgent b(g, cfg, base_table(g, cfg), 7);
    std::vector<std::size_t> evals;
    auto sa = train(a, env, tc, 9, [&](KgqrAgent&, std::size_t n) { evals.push_back(n); });
    auto sb = train(b, env, tc, 9);
    CHECK(sa.interactions >= 300);
    CHECK(sa.updates > 0);
    CHECK(sa.updates == sb.updates);
    CHECK(flat(a) == flat(b));
    REQUIRE(evals.size() >= 3);
    CHECK(evals.front() == 0);
    CHECK(evals.back() == sa.interactions);
    CHECK(std::is_sorted(evals.begin(), evals.end()));
    KgqrAgent c(g, cfg, base_table(g, cfg), 7);
    train(c, env, tc, 10);
    CHECK(flat(a) != flat(c));
  }
  SUBCASE("unfitted simulator") {
    auto cfg = small_config();
    KgqrAgent a(g, cfg, base_table(g, cfg), 7);
    sim::SimulatorModel empty;
    Environment env{&empty, &pop, {0}};
    CHECK_THROWS_AS(train(a, env, tc, 1), StateError);
  }
}

TEST_CASE("checkpoint round trip") {
  auto g = toy_graph();
  auto cfg = small_config();
  KgqrAgent a(g, cfg, base_table(g, cfg), 8);
  const auto dir = std::filesystem::temp_directory_path() / "kgqr_test_agent";
  std::filesystem::create_directories(dir);
  const auto path = dir / "a.ckpt";
  save_checkpoint(path, a, "embedding_dim = 4\n");
  auto header = read_checkpoint_header(path);
  CHECK(header.config_text == "embedding_dim = 4\n");
  CHECK(header.config_hash == fnv1a64("embedding_dim = 4\n"));

  KgqrAgent b(g, cfg, base_table(g, cfg, 99), 123);
  load_checkpoint(path, b);
  CHECK(flat(a) == flat(b));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    std::vector<ItemId> hist;
    std::uniform_int_distribution<int> len(0, 4), item(0, 11);
    for (int n = len(rng); n > 0; --n) hist.push_back(static_cast<ItemId>(item(rng)));
    auto cand = a.candidates(hist, {}).items;
    CHECK(a.greedy_action(a.state_of(hist), cand) == b.greedy_action(b.state_of(hist), cand));
  }

  auto other = small_config();
  other.head_hidden = 6;
  KgqrAgent c(g, other, base_table(g, other), 1);
  CHECK_THROWS_AS(load_checkpoint(path, c), ParseError);

  std::ofstream(dir / "junk.ckpt") << "not a checkpoint";
  CHECK_THROWS_AS(load_checkpoint(dir / "junk.ckpt", b), ParseError);
  {
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), {});
    std::ofstream(dir / "cut.ckpt", std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  }
  CHECK_THROWS_AS(load_checkpoint(dir / "cut.ckpt", b), ParseError);
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.ckpt", b), ParseError);
  std::filesystem::remove_all(dir);
}
