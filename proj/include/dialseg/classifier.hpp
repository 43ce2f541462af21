#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "dialseg/encoder.hpp"

namespace dialseg {

enum class ClassifierKind { Tree, Frb, Mlp, Table };

ClassifierKind classifier_kind_from_string(const std::string& s);
const char* to_string(ClassifierKind kind);

struct TrainingSample {
  Encoded features;
  int label = 0;  // index into layout.tasks
};

/// Per-task scores; nonnegative, not necessarily normalized.
using TaskDistribution = std::vector<double>;

/// Argmax with ties broken toward the lowest task index.
int argmax_lowest(const TaskDistribution& scores);

/// Lookup classifier over exact encoded contexts; rows are posterior
/// distributions, with a marginal fallback for contexts never tabulated.
/// Built by the synthetic-corpus oracle.
struct TableModel {
  std::unordered_map<std::string, TaskDistribution> table;
  TaskDistribution fallback;
};

/// Bit vector as a hash/map key.
std::string bits_key(const std::vector<double>& bits);

TaskDistribution table_predict(const TableModel& model, const Encoded& input);

}  // namespace dialseg
