#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "kgqr/error.hpp"
#include "kgqr/metrics/metrics.hpp"
#include "kgqr/metrics/wilcoxon.hpp"
#include "oracles.hpp"

using namespace kgqr;
using namespace kgqr::metrics;
using sim::EpisodeLog;
using sim::StepRecord;

namespace {

EpisodeLog log_of(sim::UserId user, std::vector<double> rewards, std::vector<bool> hits = {}) {
  EpisodeLog l;
  l.user = user;
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    StepRecord s;
    s.item = static_cast<sim::ItemId>(t);
    s.reward = rewards[t];
    s.hit = t < hits.size() && hits[t];
    l.steps.push_back(s);
  }
  return l;
}

}  // namespace

TEST_CASE("average reward examples") {
  std::vector<EpisodeLog> one{log_of(0, {1, 1})};
  CHECK(average_reward(one, 1.0) == 1.0);
  std::vector<EpisodeLog> two{log_of(0, {1, 0}), log_of(1, {0, 1})};
  CHECK(std::abs(average_reward(two, 0.5) - 0.375) < 1e-12);
  std::vector<EpisodeLog> g0{log_of(0, {0.6, 5}), log_of(1, {0.2, -3})};
  CHECK(std::abs(average_reward(g0, 0.0) - (0.6 + 0.2) / 2 / 2) < 1e-12);
}

TEST_CASE("metric errors") {
  std::vector<EpisodeLog> ragged{log_of(0, {1, 1}), log_of(1, {1})};
  CHECK_THROWS_AS(average_reward(ragged, 1.0), DimensionError);
  CHECK_THROWS_AS(precision_at_T(ragged), DimensionError);
  CHECK_THROWS(average_reward({}, 1.0));
  std::vector<EpisodeLog> ok{log_of(0, {1})};
  CHECK_THROWS(recall_at_T(ok, {}));
}

TEST_CASE("precision examples") {
  std::vector<EpisodeLog> all{log_of(0, {0, 0}, {true, true})};
  CHECK(precision_at_T(all) == 1.0);
  std::vector<EpisodeLog> none{log_of(0, {0, 0})};
  CHECK(precision_at_T(none) == 0.0);
  std::vector<EpisodeLog> mixed{log_of(0, {0, 0, 0, 0}, {true, true, false, true}),
                                log_of(1, {0, 0, 0, 0}, {false, true, false, false})};
  CHECK(precision_at_T(mixed) == 0.5);
}

TEST_CASE("precision equals average reward of the hit stream at gamma 1") {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution hit(0.4);
  std::vector<EpisodeLog> logs, hit_stream;
  for (sim::UserId u = 0; u < 7; ++u) {
    std::vector<bool> h(9);
    std::vector<double> r(9);
    for (std::size_t t = 0; t < 9; ++t) r[t] = (h[t] = hit(rng)) ? 1.0 : 0.0;
    logs.push_back(log_of(u, std::vector<double>(9, -1.0), h));
    hit_stream.push_back(log_of(u, r, h));
  }
  CHECK(std::abs(precision_at_T(logs) - average_reward(hit_stream, 1.0)) < 1e-12);
}

TEST_CASE("recall examples") {
  std::vector<bool> five(10, false);
  for (int i = 0; i < 5; ++i) five[i] = true;
  std::vector<EpisodeLog> l{log_of(0, std::vector<double>(10, 0), five)};
  const std::size_t ten[] = {10};
  CHECK(recall_at_T(l, ten) == 0.5);
  std::vector<EpisodeLog> miss{log_of(0, std::vector<double>(10, 0))};
  CHECK(recall_at_T(miss, ten) == 0.0);
  const std::size_t zero[] = {0};
  CHECK(recall_at_T(l, zero) == 0.0);
  auto report = evaluate_logs(l, zero, 1.0);
  CHECK(report.per_user[0].zero_preferences);
}

TEST_CASE("recall against brute-force enumeration of a toy simulator") {
  std::mt19937_64 rng(2);
  sim::MfModel mf;
  mf.user_factors = numerics::Tensor::uniform(3, 20, 0.5, rng);
  mf.item_factors = numerics::Tensor::uniform(12, 20, 0.5, rng);
  mf.user_bias = {0.3, -0.4, 0.1};
  mf.item_bias.assign(12, 0.0);
  for (auto& b : mf.item_bias) b = std::uniform_real_distribution<double>(-1, 1)(rng);
  mf.global_mean = 3.3;
  sim::SimulatorModel model(mf, sim::RewardScale{1, 5, 3.5}, 0.1);
  sim::PopularityTable pop;
  pop.items = {0};
  pop.counts = {1};
  std::vector<EpisodeLog> logs;
  std::vector<std::size_t> prefs;
  double want = 0;
  for (sim::UserId u = 0; u < 3; ++u) {
    auto s = sim::reset(model, u, pop, 6);
    for (sim::ItemId i = 11; !s.done; --i) sim::step(s, model, i);
    logs.push_back(s.log);
    std::size_t n = 0, hits = 0;
    for (sim::ItemId i = 0; i < 12; ++i) {
      if (std::clamp(mf.predict(u, i), 1.0, 5.0) > 3.5) ++n;
    }
    for (const auto& st : s.log.steps) hits += st.hit;
    prefs.push_back(model.preference_count(u));
    CHECK(prefs.back() == n);
    want += n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
  }
  CHECK(std::abs(recall_at_T(logs, prefs) - want / 3) < 1e-12);
}

TEST_CASE("recall is at most one") {
  std::vector<EpisodeLog> l{log_of(0, {0, 0, 0}, {true, true, true})};
  const std::size_t three[] = {3};
  CHECK(recall_at_T(l, three) == 1.0);
}

TEST_CASE("metrics are permutation invariant and per-user means match") {
  std::vector<EpisodeLog> a{log_of(0, {1, 0.5, -1}, {true, false, false}),
                            log_of(1, {0.2, 0.2, 0.9}, {false, true, true}),
                            log_of(2, {-0.3, 0.1, 0}, {true, true, true})};
  std::vector<EpisodeLog> b{a[2], a[0], a[1]};
  std::vector<std::size_t> pa{4, 2, 5}, pb{5, 4, 2};
  auto ra = evaluate_logs(a, pa, 0.9);
  auto rb = evaluate_logs(b, pb, 0.9);
  CHECK(std::abs(ra.average_reward - rb.average_reward) < 1e-12);
  CHECK(std::abs(ra.precision - rb.precision) < 1e-12);
  CHECK(std::abs(ra.recall - rb.recall) < 1e-12);
  double m = 0;
  for (const auto& u : ra.per_user) m += u.reward;
  CHECK(std::abs(m / 3 - ra.average_reward) < 1e-12);
  CHECK(std::abs(ra.average_reward - average_reward(a, 0.9)) < 1e-12);
  CHECK(std::abs(ra.recall - recall_at_T(a, pa)) < 1e-12);
}

TEST_CASE("report serialization") {
  std::vector<EpisodeLog> a{log_of(4, {1, 0}, {true, false}), log_of(9, {0, 1}, {false, true})};
  std::vector<std::size_t> p{2, 1};
  auto r = evaluate_logs(a, p, 1.0);
  r.config_hash = 0xabcdef;
  auto text = report_to_text(r);
  CHECK(text.find("reward = ") == 0);
  CHECK(text.find("users = 2") != std::string::npos);
  CHECK(text.find("abcdef") != std::string::npos);
  auto csv = per_user_csv(r);
  CHECK(csv.rfind("user,reward,precision,recall,preferences\n", 0) == 0);
  std::istringstream in(csv);
  auto back = parse_per_user_csv(in, "csv");
  REQUIRE(back.size() == 2);
  CHECK(back[1].user == 9);
  CHECK(back[1].recall == r.per_user[1].recall);
  std::istringstream bad("user,reward\n1,2\n");
  CHECK_THROWS_AS(parse_per_user_csv(bad, "csv"), ParseError);
}

TEST_CASE("wilcoxon identical samples are degenerate") {
  std::vector<double> a{1, 2, 3, 4, 5, 6};
  auto r = wilcoxon_signed_rank(a, a);
  CHECK(r.degenerate);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("wilcoxon shift by one") {
  std::vector<double> a{0.3, 1.2, 2.5, 0.1, 4.4, 3.3, 2.2, 1.1, 0.7, 5.0};
  std::vector<double> b;
  for (double v : a) b.push_back(v + 1);
  auto r = wilcoxon_signed_rank(b, a);
  CHECK(r.exact);
  CHECK(r.n == 10);
  CHECK(r.p_value < 0.01);
  CHECK(std::abs(r.p_value - 2.0 / 1024.0) < 1e-15);
}

TEST_CASE("wilcoxon errors") {
  std::vector<double> a{1, 2, 3}, b{1, 2};
  CHECK_THROWS_AS(wilcoxon_signed_rank(a, b), DimensionError);
  std::vector<double> c{1, 2, 3}, d{2, 3, 4};
  CHECK_THROWS(wilcoxon_signed_rank(c, d));
}

TEST_CASE("wilcoxon exact path matches the sign-pattern oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(5, 12);
  std::uniform_int_distribution<int> val(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = len(rng);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = val(rng) * 0.5;
      b[i] = val(rng) * 0.5;
    }
    auto want = oracle::brute_wilcoxon(a, b);
    if (want.n < 5) {
      if (want.n == 0) CHECK(wilcoxon_signed_rank(a, b).p_value == 1.0);
      continue;
    }
    auto got = wilcoxon_signed_rank(a, b);
    CHECK(got.n == want.n);
    CHECK(std::abs(got.w_plus - want.w_plus) < 1e-9);
    CHECK(std::abs(got.statistic - std::min(want.w_plus, want.w_minus)) < 1e-9);
    CHECK(std::abs(got.p_value - want.p_value) < 1e-12);
  }
}

TEST_CASE("wilcoxon normal approximation above 25 pairs") {
  std::vector<double> a(30), b(30, 0.0);
  for (int i = 0; i < 30; ++i) a[i] = i + 1;
  auto r = wilcoxon_signed_rank(a, b);
  CHECK_FALSE(r.exact);
  const double n = 30, mean = n * (n + 1) / 4, var = n * (n + 1) * (2 * n + 1) / 24;
  const double z = (465 - mean - 0.5) / std::sqrt(var);
  CHECK(std::abs(r.p_value - std::erfc(z / std::sqrt(2.0))) < 1e-12);
}
