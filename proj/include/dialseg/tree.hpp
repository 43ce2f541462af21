#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dialseg/classifier.hpp"

namespace dialseg {

/// Shannon entropy in bits of a class-count histogram.
/// Throws on empty/all-zero counts.
double entropy(std::span<const std::size_t> class_counts);

/// entropy(parent) - sum_v |S_v|/|S| * entropy(S_v) for a multiway split on
/// the symbolic attribute `attr` with value domain [0, arity).
double information_gain(std::span<const TrainingSample> samples,
                        std::size_t attr, std::size_t arity,
                        std::size_t num_classes);

struct TreeParams {
  std::size_t min_leaf = 2;
};

/// Multiway decision tree over the symbolic attribute view.  Every node
/// keeps its class counts; an absent child (no training sample had that
/// attribute value) falls back to the node's own distribution.
struct TreeModel {
  struct Node {
    int attr = -1;  // -1 for leaves
    std::vector<std::size_t> class_counts;
    std::vector<int> children;  // per attribute value; -1 = fall back here
  };
  std::vector<Node> nodes;  // nodes[0] is the root
  std::vector<std::size_t> arities;
  std::size_t num_classes = 0;
};

/// Greedy top-down induction splitting on maximum information gain (ties to
/// the lowest attribute index, each attribute at most once per path).
/// Growth stops on purity, exhausted attributes, or fewer than `min_leaf`
/// samples.
TreeModel train_tree(const std::vector<TrainingSample>& samples,
                     const FeatureLayout& layout, const TreeParams& params);

/// Laplace-smoothed class frequencies of the reached node:
/// (count_c + 1) / (total + C).
TaskDistribution tree_predict(const TreeModel& model, const Encoded& input);

}  // namespace dialseg
