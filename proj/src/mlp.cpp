#include "dialseg/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dialseg/error.hpp"
#include "dialseg/kernels.hpp"
#include "dialseg/rng.hpp"

namespace dialseg {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Workspace {
  std::vector<double> hidden, output, delta_out, delta_hidden;
  void resize(std::size_t h, std::size_t c) {
    hidden.resize(h);
    output.resize(c);
    delta_out.resize(c);
    delta_hidden.resize(h);
  }
};

void forward(const MlpModel& m, const std::vector<double>& x, Workspace& ws) {
  const auto& k = kernels::ops();
  for (std::size_t j = 0; j < m.hidden; ++j)
    ws.hidden[j] =
        sigmoid(m.b1[j] + k.dot(&m.w1[j * m.input_dim], x.data(), m.input_dim));
  for (std::size_t c = 0; c < m.outputs; ++c)
    ws.output[c] = sigmoid(
        m.b2[c] + k.dot(&m.w2[c * m.hidden], ws.hidden.data(), m.hidden));
}

/// Half squared error of one sample: E = 1/2 sum_c (y_c - t_c)^2.
double sample_loss(const MlpModel& m, const TrainingSample& s, Workspace& ws) {
  forward(m, s.features.bits, ws);
  double e = 0.0;
  for (std::size_t c = 0; c < m.outputs; ++c) {
    double t = (static_cast<std::size_t>(s.label) == c) ? 1.0 : 0.0;
    double d = ws.output[c] - t;
    e += d * d;
  }
  return 0.5 * e;
}

/// Mean squared error over a sample set, normalized per output unit.
double mean_mse(const MlpModel& m, const std::vector<TrainingSample>& samples,
                const std::vector<std::size_t>& idx, Workspace& ws) {
  if (idx.empty()) return 0.0;
  double sum = 0.0;
  for (auto i : idx) sum += 2.0 * sample_loss(m, samples[i], ws);
  return sum / (static_cast<double>(idx.size()) *
                static_cast<double>(m.outputs));
}

struct Velocities {
  std::vector<double> w1, b1, w2, b2;
};

void backprop_step(MlpModel& m, Velocities& vel, const TrainingSample& s,
                   double lr, double mu, Workspace& ws) {
  const auto& k = kernels::ops();
  const auto& x = s.features.bits;
  forward(m, x, ws);

  for (std::size_t c = 0; c < m.outputs; ++c) {
    double t = (static_cast<std::size_t>(s.label) == c) ? 1.0 : 0.0;
    double y = ws.output[c];
    ws.delta_out[c] = (y - t) * y * (1.0 - y);
  }
  for (std::size_t j = 0; j < m.hidden; ++j) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.outputs; ++c)
      acc += m.w2[c * m.hidden + j] * ws.delta_out[c];
    double h = ws.hidden[j];
    ws.delta_hidden[j] = acc * h * (1.0 - h);
  }

  for (std::size_t c = 0; c < m.outputs; ++c) {
    double a = -lr * ws.delta_out[c];
    k.momentum_update(&m.w2[c * m.hidden], &vel.w2[c * m.hidden], mu, a,
                      ws.hidden.data(), m.hidden);
    vel.b2[c] = mu * vel.b2[c] + a;
    m.b2[c] += vel.b2[c];
  }
  for (std::size_t j = 0; j < m.hidden; ++j) {
    double a = -lr * ws.delta_hidden[j];
    k.momentum_update(&m.w1[j * m.input_dim], &vel.w1[j * m.input_dim], mu, a,
                      x.data(), m.input_dim);
    vel.b1[j] = mu * vel.b1[j] + a;
    m.b1[j] += vel.b1[j];
  }
}

}  // namespace

MlpTrainResult train_mlp(const std::vector<TrainingSample>& samples,
                         std::size_t num_classes, const MlpHyperparams& hp) {
  if (samples.empty()) throw ValidationError("cannot train on empty sample set");
  if (hp.hidden == 0) throw ValidationError("hidden width must be positive");
  if (!(hp.learning_rate > 0.0))
    throw ValidationError("learning rate must be positive");
  if (!(hp.validation_fraction > 0.0 && hp.validation_fraction <= 0.5))
    throw ValidationError("validation fraction must be in (0, 0.5]");

  const std::size_t dim = samples[0].features.bits.size();
  for (const auto& s : samples)
    if (s.features.bits.size() != dim)
      throw ValidationError("inconsistent feature dimensions");

  MlpModel m;
  m.input_dim = dim;
  m.hidden = hp.hidden;
  m.outputs = num_classes;
  m.w1.resize(m.hidden * m.input_dim);
  m.b1.resize(m.hidden);
  m.w2.resize(m.outputs * m.hidden);
  m.b2.resize(m.outputs);

  Rng init_rng(derive_seed(hp.seed, 0));
  for (auto& w : m.w1) w = init_rng.uniform(-0.05, 0.05);
  for (auto& w : m.b1) w = init_rng.uniform(-0.05, 0.05);
  for (auto& w : m.w2) w = init_rng.uniform(-0.05, 0.05);
  for (auto& w : m.b2) w = init_rng.uniform(-0.05, 0.05);

  // Deterministic validation split: shuffle indices, hold out the prefix.
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(derive_seed(hp.seed, 1));
  split_rng.shuffle(order);
  std::size_t val_count = 0;
  if (samples.size() >= 2) {
    val_count = static_cast<std::size_t>(
        std::floor(static_cast<double>(samples.size()) *
                   hp.validation_fraction));
    val_count = std::clamp<std::size_t>(val_count, 1, samples.size() - 1);
  }
  std::vector<std::size_t> val_idx(order.begin(),
                                   order.begin() + static_cast<long>(val_count));
  std::vector<std::size_t> train_idx(order.begin() + static_cast<long>(val_count),
                                     order.end());

  Velocities vel;
  vel.w1.assign(m.w1.size(), 0.0);
  vel.b1.assign(m.b1.size(), 0.0);
  vel.w2.assign(m.w2.size(), 0.0);
  vel.b2.assign(m.b2.size(), 0.0);

  Workspace ws;
  ws.resize(m.hidden, m.outputs);

  Rng epoch_rng(derive_seed(hp.seed, 2));
  MlpTrainResult result;
  MlpModel best = m;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  std::size_t since_improvement = 0;

  std::size_t epoch = 0;
  for (; epoch < hp.max_epochs; ++epoch) {
    epoch_rng.shuffle(train_idx);
    for (auto i : train_idx)
      backprop_step(m, vel, samples[i], hp.learning_rate, hp.momentum, ws);

    // With no validation split the training error drives early stopping.
    double val = val_idx.empty() ? mean_mse(m, samples, train_idx, ws)
                                 : mean_mse(m, samples, val_idx, ws);
    if (!std::isfinite(val))
      throw TrainingError("training diverged: non-finite validation MSE");
    if (val < best_val) {
      best_val = val;
      best = m;
      best_epoch = epoch + 1;
      since_improvement = 0;
    } else if (++since_improvement >= hp.patience) {
      ++epoch;
      break;
    }
  }

  result.model = std::move(best);
  result.best_val_mse = best_val;
  result.best_epoch = best_epoch;
  result.epochs_run = epoch;
  result.final_train_mse = mean_mse(result.model, samples, train_idx, ws);
  if (!std::isfinite(result.final_train_mse))
    throw TrainingError("training diverged: non-finite training MSE");
  return result;
}

TaskDistribution mlp_predict(const MlpModel& model, const Encoded& input) {
  if (input.bits.size() != model.input_dim)
    throw ValidationError("input does not match the model's feature dimension");
  Workspace ws;
  ws.resize(model.hidden, model.outputs);
  forward(model, input.bits, ws);
  return ws.output;
}

double gradient_check(const MlpModel& model, const TrainingSample& sample) {
  const double h = 1e-5;
  Workspace ws;
  ws.resize(model.hidden, model.outputs);

  // Analytic gradients of the per-sample loss.
  MlpModel m = model;
  forward(m, sample.features.bits, ws);
  std::vector<double> delta_out(m.outputs), delta_hidden(m.hidden);
  for (std::size_t c = 0; c < m.outputs; ++c) {
    double t = (static_cast<std::size_t>(sample.label) == c) ? 1.0 : 0.0;
    double y = ws.output[c];
    delta_out[c] = (y - t) * y * (1.0 - y);
  }
  for (std::size_t j = 0; j < m.hidden; ++j) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.outputs; ++c)
      acc += m.w2[c * m.hidden + j] * delta_out[c];
    delta_hidden[j] = acc * ws.hidden[j] * (1.0 - ws.hidden[j]);
  }

  struct Param {
    double* value;
    double analytic;
  };
  std::vector<Param> params;
  params.reserve(m.w1.size() + m.b1.size() + m.w2.size() + m.b2.size());
  for (std::size_t j = 0; j < m.hidden; ++j)
    for (std::size_t i = 0; i < m.input_dim; ++i)
      params.push_back({&m.w1[j * m.input_dim + i],
                        delta_hidden[j] * sample.features.bits[i]});
  for (std::size_t j = 0; j < m.hidden; ++j)
    params.push_back({&m.b1[j], delta_hidden[j]});
  for (std::size_t c = 0; c < m.outputs; ++c)
    for (std::size_t j = 0; j < m.hidden; ++j)
      params.push_back({&m.w2[c * m.hidden + j], delta_out[c] * ws.hidden[j]});
  for (std::size_t c = 0; c < m.outputs; ++c)
    params.push_back({&m.b2[c], delta_out[c]});

  double max_rel = 0.0;
  for (auto& p : params) {
    double saved = *p.value;
    *p.value = saved + h;
    double up = sample_loss(m, sample, ws);
    *p.value = saved - h;
    double down = sample_loss(m, sample, ws);
    *p.value = saved;
    double numeric = (up - down) / (2.0 * h);
    double rel = std::abs(p.analytic - numeric) /
                 std::max(std::abs(p.analytic) + std::abs(numeric), 1e-6);
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

}  // namespace dialseg
