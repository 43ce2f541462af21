#include "dialseg/tree.hpp"

#include <algorithm>
#include <cmath>

#include "dialseg/error.hpp"

namespace dialseg {

double entropy(std::span<const std::size_t> class_counts) {
  if (class_counts.empty())
    throw ValidationError("entropy of empty class counts");
  std::size_t total = 0;
  for (auto c : class_counts) total += c;
  if (total == 0) throw ValidationError("entropy of all-zero class counts");
  double h = 0.0;
  for (auto c : class_counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

double entropy_raw(const std::size_t* counts, std::size_t num_classes,
                   std::size_t total) {
  double h = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) continue;
    double p = static_cast<double>(counts[c]) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

// Gain over an index subset; scratch reused across calls to keep induction
// and bulk evaluation allocation-free.
double gain_on_subset(std::span<const TrainingSample> samples,
                      const std::vector<std::uint32_t>& idx, std::size_t attr,
                      std::size_t arity, std::size_t num_classes) {
  thread_local std::vector<std::size_t> scratch;
  const std::size_t cells = arity * num_classes + num_classes + arity;
  if (scratch.size() < cells) scratch.resize(cells);
  std::fill(scratch.begin(), scratch.begin() + static_cast<long>(cells), 0);
  std::size_t* value_class = scratch.data();            // arity x C
  std::size_t* parent = value_class + arity * num_classes;  // C
  std::size_t* value_total = parent + num_classes;      // arity

  for (auto i : idx) {
    const auto& s = samples[i];
    auto v = static_cast<std::size_t>(s.features.symbolic[attr]);
    auto c = static_cast<std::size_t>(s.label);
    ++value_class[v * num_classes + c];
    ++parent[c];
    ++value_total[v];
  }
  const std::size_t n = idx.size();
  double gain = entropy_raw(parent, num_classes, n);
  for (std::size_t v = 0; v < arity; ++v) {
    if (value_total[v] == 0) continue;
    double w = static_cast<double>(value_total[v]) / static_cast<double>(n);
    gain -= w * entropy_raw(value_class + v * num_classes, num_classes,
                            value_total[v]);
  }
  return gain;
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<TrainingSample>& samples,
              const std::vector<std::size_t>& arities,
              std::size_t num_classes, const TreeParams& params)
      : samples_(samples),
        arities_(arities),
        num_classes_(num_classes),
        params_(params) {}

  int build(std::vector<std::uint32_t>& idx, std::vector<bool>& used) {
    const int node_id = static_cast<int>(model_.nodes.size());
    model_.nodes.emplace_back();
    {
      std::vector<std::size_t> counts(num_classes_, 0);
      for (auto i : idx) ++counts[static_cast<std::size_t>(samples_[i].label)];
      model_.nodes[static_cast<std::size_t>(node_id)].class_counts =
          std::move(counts);
    }

    const auto& counts =
        model_.nodes[static_cast<std::size_t>(node_id)].class_counts;
    bool pure = std::count_if(counts.begin(), counts.end(),
                              [](std::size_t c) { return c > 0; }) <= 1;
    if (pure || idx.size() < params_.min_leaf) return node_id;

    // Best usable attribute: unused on this path and non-constant here.
    int best_attr = -1;
    double best_gain = -1.0;
    for (std::size_t a = 0; a < arities_.size(); ++a) {
      if (used[a]) continue;
      int first = samples_[idx[0]].features.symbolic[a];
      bool constant = std::all_of(idx.begin(), idx.end(), [&](std::uint32_t i) {
        return samples_[i].features.symbolic[a] == first;
      });
      if (constant) continue;
      double g = gain_on_subset(samples_, idx, a, arities_[a], num_classes_);
      if (g > best_gain) {
        best_gain = g;
        best_attr = static_cast<int>(a);
      }
    }
    if (best_attr < 0) return node_id;  // attributes exhausted

    const auto attr = static_cast<std::size_t>(best_attr);
    std::vector<std::vector<std::uint32_t>> buckets(arities_[attr]);
    for (auto i : idx)
      buckets[static_cast<std::size_t>(samples_[i].features.symbolic[attr])]
          .push_back(i);
    idx.clear();
    idx.shrink_to_fit();

    model_.nodes[static_cast<std::size_t>(node_id)].attr = best_attr;
    model_.nodes[static_cast<std::size_t>(node_id)].children.assign(
        arities_[attr], -1);
    used[attr] = true;
    for (std::size_t v = 0; v < buckets.size(); ++v) {
      if (buckets[v].empty()) continue;
      int child = build(buckets[v], used);
      model_.nodes[static_cast<std::size_t>(node_id)].children[v] = child;
    }
    used[attr] = false;
    return node_id;
  }

  TreeModel take() { return std::move(model_); }

 private:
  const std::vector<TrainingSample>& samples_;
  const std::vector<std::size_t>& arities_;
  std::size_t num_classes_;
  TreeParams params_;
  TreeModel model_;
};

}  // namespace

double information_gain(std::span<const TrainingSample> samples,
                        std::size_t attr, std::size_t arity,
                        std::size_t num_classes) {
  if (samples.empty())
    throw ValidationError("information gain of empty sample set");
  thread_local std::vector<std::uint32_t> all;
  all.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    all[i] = static_cast<std::uint32_t>(i);
  return gain_on_subset(samples, all, attr, arity, num_classes);
}

TreeModel train_tree(const std::vector<TrainingSample>& samples,
                     const FeatureLayout& layout, const TreeParams& params) {
  if (samples.empty()) throw ValidationError("cannot train on empty sample set");
  std::vector<std::size_t> arities;
  arities.reserve(layout.groups.size());
  for (const auto& g : layout.groups) arities.push_back(g.arity);

  TreeBuilder builder(samples, arities, layout.num_classes(), params);
  std::vector<std::uint32_t> idx(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    idx[i] = static_cast<std::uint32_t>(i);
  std::vector<bool> used(arities.size(), false);
  builder.build(idx, used);

  TreeModel model = builder.take();
  model.arities = std::move(arities);
  model.num_classes = layout.num_classes();
  return model;
}

TaskDistribution tree_predict(const TreeModel& model, const Encoded& input) {
  if (input.symbolic.size() != model.arities.size())
    throw ValidationError("input does not match the model's attribute view");
  const TreeModel::Node* node = &model.nodes[0];
  while (node->attr >= 0) {
    auto attr = static_cast<std::size_t>(node->attr);
    int v = input.symbolic[attr];
    if (v < 0 || static_cast<std::size_t>(v) >= model.arities[attr])
      throw ValidationError("attribute value out of range");
    int child = node->children[static_cast<std::size_t>(v)];
    if (child < 0) break;  // unseen value: this node's own distribution
    node = &model.nodes[static_cast<std::size_t>(child)];
  }
  std::size_t total = 0;
  for (auto c : node->class_counts) total += c;
  TaskDistribution scores(model.num_classes);
  for (std::size_t c = 0; c < model.num_classes; ++c)
    scores[c] = static_cast<double>(node->class_counts[c] + 1) /
                static_cast<double>(total + model.num_classes);
  return scores;
}

}  // namespace dialseg
