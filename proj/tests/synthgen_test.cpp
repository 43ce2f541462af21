#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "dialseg/error.hpp"
#include "dialseg/evaluator.hpp"
#include "dialseg/synthgen.hpp"
#include "dialseg/user_register.hpp"

using namespace dialseg;

namespace {

std::string data_path(const std::string& name) {
  return std::string(DIALSEG_DATA_DIR) + "/" + name;
}

GeneratorConfig zeronoise() {
  return read_generator_config_file(data_path("zeronoise.gen.json"));
}

}  // namespace

TEST_CASE("generated corpora have the configured shape and validate") {
  GeneratorConfig cfg = zeronoise();
  cfg.num_dialogs = 50;
  Corpus c = generate_corpus(cfg, 9);
  CHECK(c.dialogs.size() == 50);
  for (const auto& d : c.dialogs) CHECK(d.user_turn_count() >= 1);
  c.validate();
}

TEST_CASE("generation is deterministic") {
  GeneratorConfig cfg = zeronoise();
  cfg.num_dialogs = 40;
  CHECK(save_corpus(generate_corpus(cfg, 123)) ==
        save_corpus(generate_corpus(cfg, 123)));
  CHECK(save_corpus(generate_corpus(cfg, 123)) !=
        save_corpus(generate_corpus(cfg, 124)));
}

TEST_CASE("zero-noise: (register codes, previous task) -> task is single-valued") {
  GeneratorConfig cfg = zeronoise();
  cfg.num_dialogs = 300;
  Corpus c = generate_corpus(cfg, 31);
  std::map<std::pair<std::string, std::string>, std::string> mapping;
  for (const auto& d : c.dialogs) {
    UserRegister reg = initial_register(c.schema);
    std::string prev = "<none>";
    for (const auto& turn : d.turns) {
      if (turn.speaker != Speaker::User) continue;
      reg = update_register(reg, turn.observation, c.schema.threshold,
                            c.schema);
      auto key = std::make_pair(register_codes_string(reg), prev);
      auto [it, inserted] = mapping.emplace(key, turn.task);
      if (!inserted) CHECK(it->second == turn.task);
      prev = turn.task;
    }
  }
}

TEST_CASE("empirical transitions and lengths track the configuration") {
  GeneratorConfig cfg = zeronoise();
  cfg.num_dialogs = 12000;  // ~100k user turns
  Corpus c = generate_corpus(cfg, 77);

  std::map<std::pair<std::string, std::string>, std::size_t> bigram;
  std::map<std::string, std::size_t> from_count;
  std::size_t turns = 0;
  for (const auto& d : c.dialogs) {
    std::string prev;
    for (const auto& turn : d.turns) {
      if (turn.speaker != Speaker::User) continue;
      ++turns;
      if (!prev.empty()) {
        ++bigram[{prev, turn.task}];
        ++from_count[prev];
      }
      prev = turn.task;
    }
  }
  double avg = static_cast<double>(turns) /
               static_cast<double>(c.dialogs.size());
  CHECK(avg == doctest::Approx(cfg.mean_user_turns).epsilon(0.02));
  for (const auto& [from, row] : cfg.transition) {
    if (from == "__start__" || !from_count.count(from)) continue;
    for (const auto& [to, p] : row) {
      double emp = static_cast<double>(bigram[{from, to}]) /
                   static_cast<double>(from_count[from]);
      CHECK(std::abs(emp - p) < 0.01);
    }
  }
}

TEST_CASE("out-of-task injection hits the configured rate") {
  GeneratorConfig cfg = read_generator_config_file(
      data_path("softhard_hh.gen.json"));
  cfg.num_dialogs = 8000;  // ~100k user turns
  Corpus c = generate_corpus(cfg, 5);
  std::size_t oot = 0, turns = 0;
  for (const auto& d : c.dialogs)
    for (const auto& turn : d.turns) {
      if (turn.speaker != Speaker::User) continue;
      ++turns;
      if (turn.task == cfg.out_of_task_label) ++oot;
    }
  double rate = static_cast<double>(oot) / static_cast<double>(turns);
  CHECK(std::abs(rate - cfg.out_of_task_rate) < 0.01);
}

TEST_CASE("invalid configurations are rejected") {
  GeneratorConfig cfg = zeronoise();
  SUBCASE("bad transition sum") {
    cfg.transition["Opening"] = {{"Request", 0.6}};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
  }
  SUBCASE("unknown emission slot") {
    cfg.emission["Opening"][0].slots = {"no-such-slot"};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
  }
  SUBCASE("out-of-task label missing from schema") {
    cfg.out_of_task_rate = 0.2;
    cfg.out_of_task_label = "Chitchat";
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
  }
  SUBCASE("reachable task without transition row") {
    cfg.transition.erase("Closing");
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
  }
}

TEST_CASE("zero-noise oracle is perfect on fresh data") {
  GeneratorConfig cfg = zeronoise();
  OracleOptions opt;
  AnyModel oracle = bayes_oracle(cfg, 3, FeatureSet::FULL, opt);

  cfg.num_dialogs = 100;
  Corpus test = generate_corpus(cfg, 424243);
  EvalReport r =
      evaluate_model(oracle, test, HistoryMode::Gold, cfg.schema.threshold);
  CHECK(r.macro_f == doctest::Approx(1.0));
  CHECK(r.accuracy == doctest::Approx(1.0));
}

TEST_CASE("oracle construction is deterministic") {
  GeneratorConfig cfg = zeronoise();
  OracleOptions opt;
  opt.monte_carlo = true;
  opt.sample_dialogs = 500;
  opt.seed = 8;
  AnyModel a = bayes_oracle(cfg, 3, FeatureSet::FULL, opt);
  AnyModel b = bayes_oracle(cfg, 3, FeatureSet::FULL, opt);
  const auto& ta = std::get<TableModel>(a.impl);
  const auto& tb = std::get<TableModel>(b.impl);
  CHECK(ta.fallback == tb.fallback);
  REQUIRE(ta.table.size() == tb.table.size());
  for (const auto& [k, v] : ta.table) {
    auto it = tb.table.find(k);
    REQUIRE(it != tb.table.end());
    CHECK(it->second == v);
  }
}

TEST_CASE("exact oracle refuses noisy configurations") {
  GeneratorConfig cfg = read_generator_config_file(data_path("noisy.gen.json"));
  OracleOptions opt;
  CHECK_THROWS_AS(bayes_oracle(cfg, 3, FeatureSet::FULL, opt),
                  ValidationError);
  opt.monte_carlo = true;
  opt.sample_dialogs = 200;
  AnyModel mc = bayes_oracle(cfg, 3, FeatureSet::FULL, opt);
  CHECK(std::get<TableModel>(mc.impl).table.size() > 0);
}

TEST_CASE("exact and Monte-Carlo oracles agree on the zero-noise domain") {
  GeneratorConfig cfg = zeronoise();
  OracleOptions exact;
  AnyModel a = bayes_oracle(cfg, 3, FeatureSet::FULL, exact);
  OracleOptions mc;
  mc.monte_carlo = true;
  mc.sample_dialogs = 4000;
  mc.seed = 99;
  AnyModel b = bayes_oracle(cfg, 3, FeatureSet::FULL, mc);

  cfg.num_dialogs = 80;
  Corpus test = generate_corpus(cfg, 1001);
  for (const auto& d : test.dialogs) {
    auto ta = segment_dialog(a, d, HistoryMode::Gold, test.schema, 0.5);
    auto tb = segment_dialog(b, d, HistoryMode::Gold, test.schema, 0.5);
    for (std::size_t i = 0; i < ta.entries.size(); ++i)
      CHECK(ta.entries[i].predicted == tb.entries[i].predicted);
  }
}
