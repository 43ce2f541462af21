#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dialseg/classifier.hpp"

namespace dialseg {

/// 1 - x.y / (|x||y|); 1 by convention if either operand is the zero vector.
/// In [0,1] for nonnegative inputs.
double cosine_distance(std::span<const double> x, std::span<const double> y);

/// Cauchy-type potential of x against the k-1 previously seen vectors:
/// 1 / (1 + mean cosine distance).  First sample (no priors) has potential 1.
double potential_direct(std::span<const double> x,
                        const std::vector<std::vector<double>>& priors);

/// Same value computed from the running accumulator of normalized prior
/// vectors: sum_i cosDist(x, x_i) = count - (x/|x|) . accum.
double potential_accumulated(std::span<const double> x,
                             std::span<const double> accum, std::size_t count);

/// Zero-order evolving fuzzy-rule classifier.  Each class keeps the
/// prototypes of its rules plus the accumulator that makes the potential of
/// any vector against the class history an O(dim) evaluation.
struct FrbModel {
  struct Prototype {
    std::vector<double> values;
    std::vector<double> normalized;
    double potential = 1.0;
    std::size_t support = 1;
  };
  struct ClassState {
    std::vector<Prototype> prototypes;
    std::vector<double> accum;  // sum of normalized class samples
    std::size_t count = 0;      // class samples seen
  };
  std::vector<ClassState> classes;
  std::size_t dimension = 0;
};

/// Single streaming pass: a sample founds its class's first rule; a later
/// sample founds a new rule iff its potential strictly exceeds the updated
/// potentials of every existing prototype of its class, and otherwise
/// reinforces the nearest prototype.
FrbModel train_frb(const std::vector<TrainingSample>& samples,
                   std::size_t num_classes);

/// Per class: best firing degree max(0, 1 - cosDist(x, prototype)) over its
/// rules; 0 for classes never seen in training.
TaskDistribution frb_predict(const FrbModel& model, const Encoded& input);

}  // namespace dialseg
