#include "dialseg/classifier.hpp"

#include "dialseg/error.hpp"

namespace dialseg {

ClassifierKind classifier_kind_from_string(const std::string& s) {
  if (s == "tree") return ClassifierKind::Tree;
  if (s == "frb") return ClassifierKind::Frb;
  if (s == "mlp") return ClassifierKind::Mlp;
  if (s == "table") return ClassifierKind::Table;
  throw ValidationError("unknown classifier \"" + s +
                        "\" (expected tree, frb, or mlp)");
}

const char* to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Tree: return "tree";
    case ClassifierKind::Frb: return "frb";
    case ClassifierKind::Mlp: return "mlp";
    case ClassifierKind::Table: return "table";
  }
  return "?";
}

int argmax_lowest(const TaskDistribution& scores) {
  if (scores.empty()) throw ValidationError("empty score vector");
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[static_cast<std::size_t>(best)])
      best = static_cast<int>(i);
  return best;
}

std::string bits_key(const std::vector<double>& bits) {
  std::string key(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] != 0.0) key[i] = '1';
  return key;
}

TaskDistribution table_predict(const TableModel& model, const Encoded& input) {
  auto it = model.table.find(bits_key(input.bits));
  if (it != model.table.end()) return it->second;
  return model.fallback;
}

}  // namespace dialseg
