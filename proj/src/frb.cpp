#include "dialseg/frb.hpp"

#include <algorithm>
#include <cmath>

#include "dialseg/error.hpp"
#include "dialseg/kernels.hpp"

namespace dialseg {

namespace {

std::vector<double> normalized(std::span<const double> x) {
  double n2 = kernels::ops().squared_norm(x.data(), x.size());
  std::vector<double> out(x.begin(), x.end());
  if (n2 > 0.0) {
    double inv = 1.0 / std::sqrt(n2);
    for (auto& v : out) v *= inv;
  }
  return out;
}

}  // namespace

double cosine_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ValidationError("cosine distance of vectors with different lengths");
  const auto& k = kernels::ops();
  double nx = k.squared_norm(x.data(), x.size());
  double ny = k.squared_norm(y.data(), y.size());
  if (nx == 0.0 || ny == 0.0) return 1.0;
  double sim = k.dot(x.data(), y.data(), x.size()) / std::sqrt(nx * ny);
  return 1.0 - sim;
}

double potential_direct(std::span<const double> x,
                        const std::vector<std::vector<double>>& priors) {
  if (priors.empty()) return 1.0;
  double sum = 0.0;
  for (const auto& p : priors) sum += cosine_distance(x, p);
  return 1.0 / (1.0 + sum / static_cast<double>(priors.size()));
}

double potential_accumulated(std::span<const double> x,
                             std::span<const double> accum,
                             std::size_t count) {
  if (count == 0) return 1.0;
  if (x.size() != accum.size())
    throw ValidationError("accumulator does not match vector length");
  const auto& k = kernels::ops();
  double n2 = k.squared_norm(x.data(), x.size());
  double m = static_cast<double>(count);
  double sum = m;
  if (n2 > 0.0)
    sum = m - k.dot(x.data(), accum.data(), x.size()) / std::sqrt(n2);
  sum = std::clamp(sum, 0.0, m);  // reduction rounding guard
  return 1.0 / (1.0 + sum / m);
}

FrbModel train_frb(const std::vector<TrainingSample>& samples,
                   std::size_t num_classes) {
  if (samples.empty()) throw ValidationError("cannot train on empty sample set");
  FrbModel model;
  model.dimension = samples[0].features.bits.size();
  model.classes.resize(num_classes);

  for (const auto& s : samples) {
    if (s.features.bits.size() != model.dimension)
      throw ValidationError("inconsistent feature dimensions in stream");
    auto& cls = model.classes[static_cast<std::size_t>(s.label)];
    const auto& x = s.features.bits;

    if (cls.count == 0) {
      cls.accum.assign(model.dimension, 0.0);
      cls.prototypes.push_back({x, normalized(x), 1.0, 1});
    } else {
      double pot_new = potential_accumulated(x, cls.accum, cls.count);
      double best_proto_pot = 0.0;
      for (auto& proto : cls.prototypes) {
        proto.potential =
            potential_accumulated(proto.values, cls.accum, cls.count);
        best_proto_pot = std::max(best_proto_pot, proto.potential);
      }
      if (pot_new > best_proto_pot) {
        cls.prototypes.push_back({x, normalized(x), pot_new, 1});
      } else {
        std::size_t nearest = 0;
        double best_dist = cosine_distance(x, cls.prototypes[0].values);
        for (std::size_t p = 1; p < cls.prototypes.size(); ++p) {
          double d = cosine_distance(x, cls.prototypes[p].values);
          if (d < best_dist) {
            best_dist = d;
            nearest = p;
          }
        }
        ++cls.prototypes[nearest].support;
      }
    }

    auto xn = normalized(x);
    kernels::ops().axpy(1.0, xn.data(), cls.accum.data(), model.dimension);
    ++cls.count;
  }
  return model;
}

TaskDistribution frb_predict(const FrbModel& model, const Encoded& input) {
  if (input.bits.size() != model.dimension)
    throw ValidationError("input does not match the model's feature dimension");
  TaskDistribution scores(model.classes.size(), 0.0);
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    double best = 0.0;
    for (const auto& proto : model.classes[c].prototypes)
      best = std::max(best, 1.0 - cosine_distance(input.bits, proto.values));
    scores[c] = best;
  }
  return scores;
}

}  // namespace dialseg
