#include "dialseg/evaluator.hpp"

#include <algorithm>

#include "dialseg/error.hpp"
#include "dialseg/rng.hpp"

namespace dialseg {

std::vector<TrainingSample> build_samples(
    const TaskSchema& schema, const std::vector<const Dialog*>& dialogs,
    const FeatureLayout& layout, double threshold) {
  std::vector<TrainingSample> samples;
  for (const Dialog* d : dialogs) {
    UserRegister reg = initial_register(schema);
    TaskHistory history = TaskHistory::empty(layout.window);
    for (const auto& turn : d->turns) {
      if (turn.speaker != Speaker::User) continue;
      reg = update_register(reg, turn.observation, threshold, schema);
      int label = schema.task_index(turn.task);
      if (label < 0)
        throw ValidationError("task \"" + turn.task + "\" not in schema");
      samples.push_back({encode(reg, history, layout), label});
      history.push(label);
    }
  }
  return samples;
}

AnyModel train_model(const TaskSchema& schema,
                     const std::vector<const Dialog*>& dialogs,
                     const TrainSpec& spec, std::uint64_t seed) {
  double threshold = spec.resolve_threshold(schema);
  AnyModel model;
  model.layout = make_layout(schema, spec.window, spec.feature_set);
  model.threshold = threshold;

  auto samples = build_samples(schema, dialogs, model.layout, threshold);
  if (samples.empty())
    throw ValidationError("no user turns available for training");

  switch (spec.kind) {
    case ClassifierKind::Tree:
      model.impl = train_tree(samples, model.layout, spec.tree);
      break;
    case ClassifierKind::Frb:
      model.impl = train_frb(samples, model.layout.num_classes());
      break;
    case ClassifierKind::Mlp: {
      MlpHyperparams hp = spec.mlp;
      hp.seed = seed;
      model.impl =
          train_mlp(samples, model.layout.num_classes(), hp).model;
      break;
    }
    case ClassifierKind::Table:
      throw ValidationError("table models are built by the oracle, not trained");
  }
  return model;
}

Confusion::Confusion(std::vector<std::string> label_set)
    : labels(std::move(label_set)) {
  counts.assign(labels.size() * labels.size(), 0);
}

std::size_t& Confusion::at(std::size_t gold, std::size_t pred) {
  return counts[gold * labels.size() + pred];
}
std::size_t Confusion::at(std::size_t gold, std::size_t pred) const {
  return counts[gold * labels.size() + pred];
}

void Confusion::add(const std::string& gold, const std::string& predicted) {
  auto find = [this](const std::string& s) {
    auto it = std::find(labels.begin(), labels.end(), s);
    if (it == labels.end())
      throw ValidationError("label \"" + s + "\" not in confusion universe");
    return static_cast<std::size_t>(it - labels.begin());
  };
  ++at(find(gold), find(predicted));
}

std::size_t Confusion::total() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

void Confusion::merge(const Confusion& other) {
  if (labels != other.labels)
    throw ValidationError("cannot merge confusions over different labels");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

EvalReport prf(const Confusion& confusion) {
  if (confusion.total() == 0)
    throw ValidationError("empty confusion matrix");
  const std::size_t n = confusion.size();
  EvalReport report;
  report.confusion = confusion;

  std::size_t correct = 0;
  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  std::size_t scored = 0;
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t tp = confusion.at(t, t);
    std::size_t gold = 0, predicted = 0;
    for (std::size_t j = 0; j < n; ++j) {
      gold += confusion.at(t, j);
      predicted += confusion.at(j, t);
    }
    correct += tp;

    TaskMetrics m;
    m.task = confusion.labels[t];
    m.gold_count = gold;
    m.precision = predicted == 0 ? 0.0
                                 : static_cast<double>(tp) /
                                       static_cast<double>(predicted);
    m.recall = gold == 0 ? 0.0
                         : static_cast<double>(tp) / static_cast<double>(gold);
    m.f_measure = (m.precision + m.recall) == 0.0
                      ? 0.0
                      : 2.0 * m.precision * m.recall /
                            (m.precision + m.recall);
    if (gold > 0) {
      sum_p += m.precision;
      sum_r += m.recall;
      sum_f += m.f_measure;
      ++scored;
    }
    report.per_task.push_back(std::move(m));
  }
  if (scored > 0) {
    report.macro_precision = sum_p / static_cast<double>(scored);
    report.macro_recall = sum_r / static_cast<double>(scored);
    report.macro_f = sum_f / static_cast<double>(scored);
  }
  report.accuracy =
      static_cast<double>(correct) / static_cast<double>(confusion.total());
  return report;
}

namespace {

Confusion score_traces(const std::vector<SegmentationTrace>& traces,
                       std::vector<std::string> labels) {
  Confusion confusion(std::move(labels));
  for (const auto& trace : traces)
    for (const auto& e : trace.entries) confusion.add(e.gold, e.predicted);
  return confusion;
}

EvalConfig make_config(const TrainSpec& spec, const TaskSchema& schema, int k,
                       std::uint64_t seed) {
  EvalConfig c;
  c.classifier = to_string(spec.kind);
  c.feature_set = to_string(spec.feature_set);
  c.window = spec.window;
  c.threshold = spec.resolve_threshold(schema);
  c.history_mode = to_string(spec.mode);
  c.folds = k;
  c.seed = seed;
  return c;
}

}  // namespace

EvalReport evaluate_model(const AnyModel& model, const Corpus& corpus,
                          HistoryMode mode, double threshold) {
  auto traces = segment_corpus(model, corpus, mode, threshold);

  // Union label universe: test schema first, then model-only tasks.
  std::vector<std::string> labels = corpus.schema.tasks;
  for (const auto& t : model.layout.tasks)
    if (std::find(labels.begin(), labels.end(), t) == labels.end())
      labels.push_back(t);

  EvalReport report = prf(score_traces(traces, std::move(labels)));
  report.config.classifier = to_string(model.kind());
  report.config.feature_set = to_string(model.layout.feature_set);
  report.config.window = model.layout.window;
  report.config.threshold = threshold;
  report.config.history_mode = to_string(mode);
  return report;
}

EvalReport cross_validate(const Corpus& corpus, const TrainSpec& spec, int k,
                          std::uint64_t seed) {
  corpus.validate();
  FoldAssignment folds = split_folds(corpus, k, derive_seed(seed, 0));
  double threshold = spec.resolve_threshold(corpus.schema);

  Confusion pooled(corpus.schema.tasks);
  for (int fold = 0; fold < k; ++fold) {
    std::vector<const Dialog*> train_dialogs;
    std::vector<const Dialog*> test_dialogs;
    for (const auto& d : corpus.dialogs) {
      if (folds.fold_of.at(d.id) == fold)
        test_dialogs.push_back(&d);
      else
        train_dialogs.push_back(&d);
    }
    AnyModel model = train_model(corpus.schema, train_dialogs, spec,
                                 derive_seed(seed, 1 + static_cast<std::uint64_t>(fold)));
    for (const Dialog* d : test_dialogs) {
      auto trace =
          segment_dialog(model, *d, spec.mode, corpus.schema, threshold);
      for (const auto& e : trace.entries) pooled.add(e.gold, e.predicted);
    }
  }

  EvalReport report = prf(pooled);
  report.config = make_config(spec, corpus.schema, k, seed);
  return report;
}

std::vector<EvalReport> ablation_study(const Corpus& corpus,
                                       const TrainSpec& spec,
                                       const std::vector<FeatureSet>& sets,
                                       int k, std::uint64_t seed) {
  // Same seed everywhere: the fold split (and the trainer streams) are
  // shared, so only the feature set varies between rows.
  std::vector<EvalReport> reports;
  for (FeatureSet fs : sets) {
    TrainSpec s = spec;
    s.feature_set = fs;
    reports.push_back(cross_validate(corpus, s, k, seed));
  }
  return reports;
}

EvalReport cross_corpus_eval(const Corpus& train, const Corpus& test,
                             const TrainSpec& spec, std::uint64_t seed) {
  train.validate();
  test.validate();
  if (train.schema.slots != test.schema.slots ||
      train.schema.frames != test.schema.frames ||
      train.schema.tiacts != test.schema.tiacts)
    throw ValidationError(
        "train and test corpora do not share the slot/frame vocabulary");

  std::vector<const Dialog*> train_dialogs;
  for (const auto& d : train.dialogs) train_dialogs.push_back(&d);
  AnyModel model =
      train_model(train.schema, train_dialogs, spec, derive_seed(seed, 1));

  EvalReport report = evaluate_model(model, test, spec.mode,
                                     spec.resolve_threshold(train.schema));
  report.config = make_config(spec, train.schema, 0, seed);
  return report;
}

}  // namespace dialseg
