#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "dialseg/error.hpp"
#include "dialseg/rng.hpp"
#include "dialseg/tree.hpp"
#include "test_util.hpp"

using namespace dialseg;

namespace {

// Independent oracle: materializes the partition explicitly and recomputes
// both entropies from scratch.
double oracle_entropy(const std::vector<std::size_t>& counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double oracle_gain(const std::vector<TrainingSample>& samples,
                   std::size_t attr, std::size_t arity,
                   std::size_t num_classes) {
  std::vector<std::size_t> parent(num_classes, 0);
  for (const auto& s : samples)
    ++parent[static_cast<std::size_t>(s.label)];
  double gain = oracle_entropy(parent);
  for (std::size_t v = 0; v < arity; ++v) {
    std::vector<std::size_t> child(num_classes, 0);
    std::size_t nv = 0;
    for (const auto& s : samples)
      if (static_cast<std::size_t>(s.features.symbolic[attr]) == v) {
        ++child[static_cast<std::size_t>(s.label)];
        ++nv;
      }
    if (nv == 0) continue;
    gain -= (static_cast<double>(nv) / static_cast<double>(samples.size())) *
            oracle_entropy(child);
  }
  return gain;
}

TrainingSample sym_sample(std::vector<int> symbolic, int label) {
  TrainingSample s;
  s.features.symbolic = std::move(symbolic);
  s.label = label;
  return s;
}

/// Minimal layout stand-in: `arities[i]` symbolic values per attribute, all
/// attributes ternary unless stated.  Bits left empty (tree ignores them).
FeatureLayout fake_layout(const std::vector<std::size_t>& arities,
                          std::size_t num_classes) {
  FeatureLayout layout;
  for (std::size_t i = 0; i < num_classes; ++i)
    layout.tasks.push_back("c" + std::to_string(i));
  std::size_t offset = 0;
  for (std::size_t a = 0; a < arities.size(); ++a) {
    layout.groups.push_back({"attr" + std::to_string(a), GroupKind::Slot,
                             offset, 3, arities[a]});
    offset += 3;
  }
  layout.dimension = offset;
  return layout;
}

}  // namespace

TEST_CASE("entropy") {
  using counts = std::vector<std::size_t>;
  CHECK(entropy(counts{4, 4}) == doctest::Approx(1.0));
  CHECK(entropy(counts{8, 0}) == doctest::Approx(0.0));
  CHECK(entropy(counts{9, 5}) == doctest::Approx(0.94029).epsilon(1e-5));
  CHECK_THROWS_AS(entropy(counts{0, 0}), ValidationError);
  CHECK_THROWS_AS(entropy(counts{}), ValidationError);
}

TEST_CASE("information gain: perfect separation and constant attribute") {
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 4; ++i)
    samples.push_back(sym_sample({i % 2, 1}, i % 2));
  // attribute 0 separates the classes exactly
  CHECK(information_gain(samples, 0, 3, 2) ==
        doctest::Approx(entropy(std::vector<std::size_t>{2, 2})));
  // attribute 1 is constant
  CHECK(information_gain(samples, 1, 3, 2) == doctest::Approx(0.0));
}

TEST_CASE("information gain matches the brute-force oracle exactly") {
  Rng rng(2025);
  for (int it = 0; it < 2000; ++it) {
    std::size_t n = 1 + rng.below(6);
    std::vector<TrainingSample> samples;
    for (std::size_t i = 0; i < n; ++i)
      samples.push_back(sym_sample({static_cast<int>(rng.below(3)),
                                    static_cast<int>(rng.below(3)),
                                    static_cast<int>(rng.below(3))},
                                   static_cast<int>(rng.below(2))));
    for (std::size_t a = 0; a < 3; ++a) {
      double got = information_gain(samples, a, 3, 2);
      double want = oracle_gain(samples, a, 3, 2);
      CHECK(got == want);  // bitwise: same arithmetic on the same counts
      CHECK(got >= -1e-12);
    }
  }
}

TEST_CASE("training grows to purity on consistent data") {
  // labels depend on attributes in a way single attributes cannot capture
  std::vector<TrainingSample> samples;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int rep = 0; rep < 2; ++rep)
        samples.push_back(sym_sample({a, b}, (a + b) % 2));  // xor-ish

  FeatureLayout layout = fake_layout({3, 3}, 2);
  TreeModel model = train_tree(samples, layout, {.min_leaf = 1});
  for (const auto& s : samples) {
    auto scores = tree_predict(model, s.features);
    CHECK(argmax_lowest(scores) == s.label);
  }
}

TEST_CASE("single-class samples produce a single leaf") {
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 5; ++i) samples.push_back(sym_sample({i % 3, 1}, 0));
  TreeModel model = train_tree(samples, fake_layout({3, 3}, 2), {});
  CHECK(model.nodes.size() == 1);
  CHECK(model.nodes[0].attr == -1);
}

TEST_CASE("induction is deterministic") {
  Rng rng(10);
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 60; ++i)
    samples.push_back(sym_sample({static_cast<int>(rng.below(3)),
                                  static_cast<int>(rng.below(3)),
                                  static_cast<int>(rng.below(4))},
                                 static_cast<int>(rng.below(3))));
  FeatureLayout layout = fake_layout({3, 3, 4}, 3);
  TreeModel a = train_tree(samples, layout, {});
  TreeModel b = train_tree(samples, layout, {});
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].attr == b.nodes[i].attr);
    CHECK(a.nodes[i].class_counts == b.nodes[i].class_counts);
    CHECK(a.nodes[i].children == b.nodes[i].children);
  }
}

TEST_CASE("leaf scores are Laplace-smoothed counts") {
  // all samples identical -> one leaf with counts [3,1]
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 3; ++i) samples.push_back(sym_sample({1}, 0));
  samples.push_back(sym_sample({1}, 1));
  TreeModel model = train_tree(samples, fake_layout({3}, 2), {});
  auto scores = tree_predict(model, samples[0].features);
  CHECK(scores[0] == doctest::Approx(4.0 / 6.0));
  CHECK(scores[1] == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("unseen attribute value falls back to the node distribution") {
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 4; ++i) samples.push_back(sym_sample({0, 0}, 0));
  for (int i = 0; i < 4; ++i) samples.push_back(sym_sample({1, 0}, 1));
  TreeModel model = train_tree(samples, fake_layout({3, 3}, 2), {});
  // value 2 of the split attribute never occurred
  auto scores = tree_predict(model, sym_sample({2, 0}, 0).features);
  CHECK(scores[0] == doctest::Approx(5.0 / 10.0));
  CHECK(scores[1] == doctest::Approx(5.0 / 10.0));
}

TEST_CASE("min_leaf stops growth") {
  std::vector<TrainingSample> samples;
  samples.push_back(sym_sample({0}, 0));
  samples.push_back(sym_sample({1}, 1));
  samples.push_back(sym_sample({2}, 0));
  TreeModel grown = train_tree(samples, fake_layout({3}, 2), {.min_leaf = 1});
  CHECK(grown.nodes.size() > 1);
  TreeModel stopped = train_tree(samples, fake_layout({3}, 2), {.min_leaf = 4});
  CHECK(stopped.nodes.size() == 1);
}
