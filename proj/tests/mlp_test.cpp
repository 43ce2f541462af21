#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dialseg/error.hpp"
#include "dialseg/mlp.hpp"
#include "dialseg/rng.hpp"

using namespace dialseg;

namespace {

TrainingSample bit_sample(std::vector<double> bits, int label) {
  TrainingSample s;
  s.features.bits = std::move(bits);
  s.label = label;
  return s;
}

MlpModel random_model(Rng& rng, std::size_t in, std::size_t hidden,
                      std::size_t out) {
  MlpModel m;
  m.input_dim = in;
  m.hidden = hidden;
  m.outputs = out;
  m.w1.resize(hidden * in);
  m.b1.resize(hidden);
  m.w2.resize(out * hidden);
  m.b2.resize(out);
  for (auto& w : m.w1) w = rng.uniform(-0.5, 0.5);
  for (auto& w : m.b1) w = rng.uniform(-0.5, 0.5);
  for (auto& w : m.w2) w = rng.uniform(-0.5, 0.5);
  for (auto& w : m.b2) w = rng.uniform(-0.5, 0.5);
  return m;
}

}  // namespace

TEST_CASE("all-zero weights score 0.5 everywhere") {
  MlpModel m;
  m.input_dim = 4;
  m.hidden = 3;
  m.outputs = 2;
  m.w1.assign(12, 0.0);
  m.b1.assign(3, 0.0);
  m.w2.assign(6, 0.0);
  m.b2.assign(2, 0.0);
  auto scores = mlp_predict(m, bit_sample({1, 0, 1, 0}, 0).features);
  CHECK(scores[0] == doctest::Approx(0.5));
  CHECK(scores[1] == doctest::Approx(0.5));
}

TEST_CASE("linearly separable data trains to full accuracy") {
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 20; ++i) {
    samples.push_back(bit_sample({1, 0, static_cast<double>(i % 2)}, 0));
    samples.push_back(bit_sample({0, 1, static_cast<double>(i % 2)}, 1));
  }
  MlpHyperparams hp;
  hp.hidden = 4;
  hp.max_epochs = 300;
  hp.seed = 3;
  auto result = train_mlp(samples, 2, hp);
  for (const auto& s : samples)
    CHECK(argmax_lowest(mlp_predict(result.model, s.features)) == s.label);
}

TEST_CASE("xor needs the hidden layer and learns for some seed") {
  std::vector<TrainingSample> samples;
  for (int rep = 0; rep < 8; ++rep) {
    samples.push_back(bit_sample({0, 0}, 0));
    samples.push_back(bit_sample({1, 1}, 0));
    samples.push_back(bit_sample({0, 1}, 1));
    samples.push_back(bit_sample({1, 0}, 1));
  }
  bool solved = false;
  for (std::uint64_t seed = 1; seed <= 5 && !solved; ++seed) {
    MlpHyperparams hp;
    hp.hidden = 4;
    hp.max_epochs = 5000;
    hp.patience = 5000;  // run to the epoch budget
    hp.seed = seed;
    auto result = train_mlp(samples, 2, hp);
    if (result.final_train_mse < 0.05) solved = true;
  }
  CHECK(solved);
}

TEST_CASE("identical hyperparameters give bitwise-identical weights") {
  Rng rng(8);
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 40; ++i) {
    std::vector<double> bits(6);
    for (auto& b : bits) b = rng.chance(0.5) ? 1.0 : 0.0;
    samples.push_back(bit_sample(std::move(bits),
                                 static_cast<int>(rng.below(3))));
  }
  MlpHyperparams hp;
  hp.hidden = 5;
  hp.max_epochs = 40;
  hp.seed = 77;
  auto a = train_mlp(samples, 3, hp);
  auto b = train_mlp(samples, 3, hp);
  CHECK(a.model.w1 == b.model.w1);
  CHECK(a.model.b1 == b.model.b1);
  CHECK(a.model.w2 == b.model.w2);
  CHECK(a.model.b2 == b.model.b2);
  CHECK(a.best_val_mse == b.best_val_mse);
  CHECK(a.epochs_run == b.epochs_run);
}

TEST_CASE("gradient check on random models") {
  Rng rng(314);
  for (int it = 0; it < 5; ++it) {
    std::size_t in = 2 + rng.below(8);
    MlpModel m = random_model(rng, in, 2 + rng.below(6), 2 + rng.below(4));
    std::vector<double> bits(in);
    for (auto& b : bits) b = rng.chance(0.5) ? 1.0 : 0.0;
    TrainingSample s =
        bit_sample(std::move(bits), static_cast<int>(rng.below(m.outputs)));
    double err = gradient_check(m, s);
    CHECK(err <= 1e-4);
    CHECK(gradient_check(m, s) == err);  // deterministic
  }
}

TEST_CASE("zero input leaves input-to-hidden weights untouched") {
  std::vector<TrainingSample> samples{bit_sample({0, 0, 0}, 0),
                                      bit_sample({0, 0, 0}, 1)};
  MlpHyperparams hp;
  hp.hidden = 3;
  hp.max_epochs = 10;
  hp.seed = 5;
  auto slow = train_mlp(samples, 2, hp);
  hp.learning_rate = 0.9;  // different updates, but only through biases
  auto fast = train_mlp(samples, 2, hp);
  CHECK(slow.model.w1 == fast.model.w1);  // only gradients via x, which is 0
  CHECK(slow.model.b2 != fast.model.b2);
}

TEST_CASE("invalid hyperparameters are rejected") {
  std::vector<TrainingSample> samples{bit_sample({1}, 0)};
  MlpHyperparams hp;
  hp.learning_rate = 0.0;
  CHECK_THROWS_AS(train_mlp(samples, 2, hp), ValidationError);
  hp = {};
  hp.validation_fraction = 0.9;
  CHECK_THROWS_AS(train_mlp(samples, 2, hp), ValidationError);
  CHECK_THROWS_AS(train_mlp({}, 2, {}), ValidationError);
}
