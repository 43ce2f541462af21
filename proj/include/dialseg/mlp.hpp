#pragma once

#include <cstdint>
#include <vector>

#include "dialseg/classifier.hpp"

namespace dialseg {

struct MlpHyperparams {
  std::size_t hidden = 32;
  double learning_rate = 0.3;
  double momentum = 0.0;
  std::size_t max_epochs = 500;
  std::size_t patience = 20;
  double validation_fraction = 0.2;
  std::uint64_t seed = 1;
};

/// One hidden layer, logistic sigmoid on hidden and output units.
/// Weight matrices are row-major: w1 is hidden x input, w2 is output x hidden.
struct MlpModel {
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  std::size_t outputs = 0;
  std::vector<double> w1, b1, w2, b2;
};

struct MlpTrainResult {
  MlpModel model;
  double best_val_mse = 0.0;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
  double final_train_mse = 0.0;
};

/// Incremental (per-sample) backpropagation on the squared error against
/// 1-of-C targets; per-epoch shuffling and the validation split both derive
/// from hp.seed, so training is fully reproducible.  Stops early when the
/// validation MSE has not improved for `patience` epochs and returns the
/// best-validation snapshot.  Throws TrainingError if the loss leaves the
/// finite range.
MlpTrainResult train_mlp(const std::vector<TrainingSample>& samples,
                         std::size_t num_classes, const MlpHyperparams& hp);

/// Output activations.
TaskDistribution mlp_predict(const MlpModel& model, const Encoded& input);

/// Maximum relative deviation between analytic gradients of the per-sample
/// squared error and central finite differences (step 1e-5) over all
/// weights and biases.
double gradient_check(const MlpModel& model, const TrainingSample& sample);

}  // namespace dialseg
