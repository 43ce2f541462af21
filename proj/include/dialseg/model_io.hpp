#pragma once

#include <string>
#include <variant>

#include "dialseg/classifier.hpp"
#include "dialseg/frb.hpp"
#include "dialseg/mlp.hpp"
#include "dialseg/tree.hpp"

namespace dialseg {

/// A trained model together with the feature layout it was trained on.
/// Prediction rejects inputs produced under a different layout.
struct AnyModel {
  FeatureLayout layout;
  double threshold = 0.5;  // register threshold used when training
  std::variant<TreeModel, FrbModel, MlpModel, TableModel> impl;

  ClassifierKind kind() const;
};

TaskDistribution predict_scores(const AnyModel& model, const Encoded& input);

/// Versioned model file: magic string, format version, model kind, layout
/// descriptor, parameters.  Floating-point values survive the round trip
/// bit-exactly.  Table models are in-memory only and cannot be saved.
std::string save_model(const AnyModel& model);
AnyModel load_model(const std::string& text);

AnyModel read_model_file(const std::string& path);
void write_model_file(const AnyModel& model, const std::string& path);

}  // namespace dialseg
