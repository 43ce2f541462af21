#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dialseg/error.hpp"
#include "dialseg/evaluator.hpp"
#include "dialseg/report.hpp"
#include "test_util.hpp"

using namespace dialseg;
using namespace dialseg::testutil;

TEST_CASE("prf on a hand confusion") {
  Confusion c({"a", "b"});
  c.add("a", "a");
  c.add("a", "a");
  c.add("a", "b");
  c.add("b", "b");
  EvalReport r = prf(c);
  CHECK(r.per_task[0].precision == doctest::Approx(1.0));
  CHECK(r.per_task[0].recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_task[0].f_measure == doctest::Approx(0.8));
  CHECK(r.per_task[1].precision == doctest::Approx(0.5));
  CHECK(r.per_task[1].recall == doctest::Approx(1.0));
  CHECK(r.accuracy == doctest::Approx(0.75));
  CHECK_THROWS_AS(prf(Confusion({"a"})), ValidationError);
}

TEST_CASE("published average rows recompute within rounding") {
  auto f = [](double p, double r) { return 2.0 * p * r / (p + r); };
  CHECK(f(0.97, 0.93) == doctest::Approx(0.95).epsilon(0.005));
  CHECK(f(0.88, 0.84) == doctest::Approx(0.86).epsilon(0.005));
  CHECK(f(0.92, 0.89) == doctest::Approx(0.90).epsilon(0.005));
  // the monotone feature-ablation trend on the human-machine rows
  CHECK(0.88 < 0.93);
  CHECK(0.93 < 0.95);
}

TEST_CASE("perfect predictions score 1 everywhere") {
  Confusion c({"a", "b", "c"});
  for (int i = 0; i < 5; ++i) {
    c.add("a", "a");
    c.add("b", "b");
    c.add("c", "c");
  }
  EvalReport r = prf(c);
  for (const auto& m : r.per_task) {
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f_measure == 1.0);
  }
  CHECK(r.macro_f == 1.0);
  CHECK(r.accuracy == 1.0);
}

TEST_CASE("macro averages skip tasks without gold occurrences") {
  Confusion c({"a", "b", "ghost"});
  c.add("a", "a");
  c.add("b", "a");
  EvalReport r = prf(c);
  // ghost has no gold turns: macro over a and b only
  CHECK(r.macro_recall == doctest::Approx((1.0 + 0.0) / 2.0));
  CHECK(r.per_task[2].gold_count == 0);
}

TEST_CASE("confusion row/column sums track gold and prediction counts") {
  Confusion c({"x", "y"});
  c.add("x", "y");
  c.add("x", "y");
  c.add("y", "y");
  CHECK(c.total() == 3);
  CHECK(c.at(0, 0) + c.at(0, 1) == 2);  // gold x row
  CHECK(c.at(0, 1) + c.at(1, 1) == 3);  // predicted y column
}

TEST_CASE("cross-validation evaluates every dialog exactly once") {
  Corpus corpus = synthetic_mini_corpus(10, 4, 31);
  TrainSpec spec;
  spec.kind = ClassifierKind::Tree;
  spec.window = 2;
  EvalReport r = cross_validate(corpus, spec, 5, 7);
  CHECK(r.confusion.total() == corpus_stats(corpus).num_user_turns);
  CHECK(r.config.folds == 5);

  // determinism: byte-identical structured reports
  EvalReport r2 = cross_validate(corpus, spec, 5, 7);
  CHECK(report_json(r) == report_json(r2));
}

TEST_CASE("ablation shares the fold assignment across feature sets") {
  Corpus corpus = synthetic_mini_corpus(12, 4, 5);
  TrainSpec spec;
  spec.kind = ClassifierKind::Tree;
  spec.window = 2;
  auto reports = ablation_study(
      corpus, spec, {FeatureSet::AV, FeatureSet::DA_AV, FeatureSet::FULL}, 3,
      11);
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports)
    CHECK(r.confusion.total() == corpus_stats(corpus).num_user_turns);
  CHECK(reports[0].config.feature_set == "av");
  CHECK(reports[2].config.feature_set == "full");
}

TEST_CASE("cross-corpus: memorizing tree on its own corpus is perfect") {
  // consistent corpus: task fully determined by (register, history)
  Corpus corpus;
  corpus.schema = mini_schema();
  for (int i = 0; i < 8; ++i) {
    Dialog d;
    d.id = "d" + std::to_string(i);
    d.turns.push_back(user_turn(0, "greet", {{"origin", "v", 0.9}}));
    d.turns.push_back(user_turn(1, "ask", {{"destination", "v", 0.9}}));
    d.turns.push_back(user_turn(2, "bye", {{"origin", "v", 0.2}}));
    corpus.dialogs.push_back(std::move(d));
  }
  TrainSpec spec;
  spec.kind = ClassifierKind::Tree;
  spec.tree.min_leaf = 1;
  spec.window = 2;
  EvalReport r = cross_corpus_eval(corpus, corpus, spec, 3);
  CHECK(r.macro_f == doctest::Approx(1.0));
  EvalReport r2 = cross_corpus_eval(corpus, corpus, spec, 3);
  CHECK(report_json(r) == report_json(r2));
}

TEST_CASE("cross-corpus: tasks unseen in training have zero recall") {
  Corpus train;
  train.schema = mini_schema();
  for (int i = 0; i < 6; ++i) {
    Dialog d;
    d.id = "t" + std::to_string(i);
    d.turns.push_back(user_turn(0, "greet", {{"origin", "v", 0.9}}));
    d.turns.push_back(user_turn(1, "ask", {{"destination", "v", 0.9}}));
    train.dialogs.push_back(std::move(d));
  }
  Corpus test = train;
  test.schema.tasks.push_back("chitchat");  // extra task, same slot vocabulary
  for (auto& d : test.dialogs) d.id = "e" + d.id;
  Dialog extra;
  extra.id = "extra";
  extra.turns.push_back(user_turn(0, "chitchat"));
  extra.turns.push_back(user_turn(1, "greet", {{"origin", "v", 0.9}}));
  test.dialogs.push_back(std::move(extra));

  TrainSpec spec;
  spec.kind = ClassifierKind::Tree;
  spec.window = 2;
  EvalReport r = cross_corpus_eval(train, test, spec, 1);

  const TaskMetrics* chitchat = nullptr;
  for (const auto& m : r.per_task)
    if (m.task == "chitchat") chitchat = &m;
  REQUIRE(chitchat != nullptr);
  CHECK(chitchat->recall == 0.0);
  CHECK(chitchat->gold_count == 1);
  // the model never outputs the unseen label: its confusion column is empty
  std::size_t col = 0;
  for (std::size_t i = 0; i < r.confusion.labels.size(); ++i)
    if (r.confusion.labels[i] == "chitchat") col = i;
  for (std::size_t g = 0; g < r.confusion.size(); ++g)
    CHECK(r.confusion.at(g, col) == 0);
}

TEST_CASE("cross-corpus requires a shared slot vocabulary") {
  Corpus train = synthetic_mini_corpus(4, 3, 1);
  Corpus test = train;
  test.schema.slots.push_back("extra-slot");
  TrainSpec spec;
  CHECK_THROWS_AS(cross_corpus_eval(train, test, spec, 1), ValidationError);
}
