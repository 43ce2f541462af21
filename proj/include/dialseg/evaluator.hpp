#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dialseg/model_io.hpp"
#include "dialseg/segmenter.hpp"

namespace dialseg {

/// Everything needed to train one classifier on one encoder configuration.
struct TrainSpec {
  ClassifierKind kind = ClassifierKind::Tree;
  FeatureSet feature_set = FeatureSet::FULL;
  std::size_t window = 3;
  std::optional<double> threshold;  // default: schema threshold
  HistoryMode mode = HistoryMode::Predicted;
  TreeParams tree;
  MlpHyperparams mlp;

  double resolve_threshold(const TaskSchema& schema) const {
    return threshold.value_or(schema.threshold);
  }
};

/// Gold-history training samples for a set of dialogs: replay each dialog
/// through the register, encode every user turn, label it with its gold task.
std::vector<TrainingSample> build_samples(
    const TaskSchema& schema, const std::vector<const Dialog*>& dialogs,
    const FeatureLayout& layout, double threshold);

/// Trains one model on the given dialogs; `seed` drives the stochastic
/// trainers (the tree and rule learners are deterministic and ignore it).
AnyModel train_model(const TaskSchema& schema,
                     const std::vector<const Dialog*>& dialogs,
                     const TrainSpec& spec, std::uint64_t seed);

/// Square count matrix, gold on rows, predicted on columns.
struct Confusion {
  std::vector<std::string> labels;
  std::vector<std::size_t> counts;  // labels.size()^2, row-major

  explicit Confusion(std::vector<std::string> label_set = {});
  std::size_t size() const { return labels.size(); }
  std::size_t& at(std::size_t gold, std::size_t pred);
  std::size_t at(std::size_t gold, std::size_t pred) const;
  void add(const std::string& gold, const std::string& predicted);
  std::size_t total() const;
  void merge(const Confusion& other);
};

struct TaskMetrics {
  std::string task;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::size_t gold_count = 0;
};

struct EvalConfig {
  std::string classifier;
  std::string feature_set;
  std::size_t window = 3;
  double threshold = 0.5;
  std::string history_mode;
  int folds = 0;  // 0 when not a cross-validation run
  std::uint64_t seed = 0;
};

struct EvalReport {
  EvalConfig config;
  std::vector<TaskMetrics> per_task;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f = 0.0;
  double accuracy = 0.0;
  Confusion confusion;
};

/// F = 2PR/(P+R) per task (0 where undefined); macro averages ignore tasks
/// without gold occurrences.  Throws on an empty confusion.
EvalReport prf(const Confusion& confusion);

/// Segments a corpus with an already-trained model and scores it.
EvalReport evaluate_model(const AnyModel& model, const Corpus& corpus,
                          HistoryMode mode, double threshold);

/// Dialog-level k-fold cross-validation with one pooled confusion.  The seed
/// fixes both the fold split and the per-fold training seeds.
EvalReport cross_validate(const Corpus& corpus, const TrainSpec& spec, int k,
                          std::uint64_t seed);

/// One cross-validation per feature set, all sharing the same fold split.
std::vector<EvalReport> ablation_study(const Corpus& corpus,
                                       const TrainSpec& spec,
                                       const std::vector<FeatureSet>& sets,
                                       int k, std::uint64_t seed);

/// Train on all of `train`, evaluate on all of `test`.  Test tasks unseen in
/// training stay out of the model's output space and score zero recall.
EvalReport cross_corpus_eval(const Corpus& train, const Corpus& test,
                             const TrainSpec& spec, std::uint64_t seed);

}  // namespace dialseg
