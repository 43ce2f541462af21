#include "dialseg/segmenter.hpp"

#include <cstdio>

#include "dialseg/error.hpp"

namespace dialseg {

HistoryMode history_mode_from_string(const std::string& s) {
  if (s == "predicted") return HistoryMode::Predicted;
  if (s == "gold") return HistoryMode::Gold;
  throw ValidationError("unknown history mode \"" + s +
                        "\" (expected predicted or gold)");
}

const char* to_string(HistoryMode mode) {
  return mode == HistoryMode::Predicted ? "predicted" : "gold";
}

int predict_task(const AnyModel& model, const UserRegister& reg,
                 const TaskHistory& history) {
  Encoded enc = encode(reg, history, model.layout);
  return argmax_lowest(predict_scores(model, enc));
}

SegmentationTrace segment_dialog(const AnyModel& model, const Dialog& dialog,
                                 HistoryMode mode, const TaskSchema& schema,
                                 double threshold) {
  // The model's layout must be realizable from this schema's slot/frame
  // vocabulary; tasks may differ (cross-corpus transfer).
  if (model.layout.slots != schema.slots ||
      model.layout.frames != schema.frames ||
      model.layout.tiacts != schema.tiacts)
    throw ValidationError(
        "slot/frame vocabulary of the corpus does not match the model");

  SegmentationTrace trace;
  trace.dialog_id = dialog.id;
  UserRegister reg = initial_register(schema);
  TaskHistory history = TaskHistory::empty(model.layout.window);

  int model_task_index = -1;
  for (const auto& turn : dialog.turns) {
    if (turn.speaker != Speaker::User) continue;
    reg = update_register(reg, turn.observation, threshold, schema);

    Encoded enc = encode(reg, history, model.layout);
    TaskDistribution scores = predict_scores(model, enc);
    int predicted = argmax_lowest(scores);

    TraceEntry entry;
    entry.turn_index = turn.index;
    entry.gold = turn.task;
    entry.predicted = model.layout.tasks[static_cast<std::size_t>(predicted)];
    entry.scores = std::move(scores);
    entry.register_codes = register_codes_string(reg);
    entry.history = history.window;
    trace.entries.push_back(std::move(entry));

    if (mode == HistoryMode::Predicted) {
      model_task_index = predicted;
    } else {
      // Gold mode: labels outside the model's inventory become "none".
      int gi = -1;
      for (std::size_t t = 0; t < model.layout.tasks.size(); ++t)
        if (model.layout.tasks[t] == turn.task) gi = static_cast<int>(t);
      model_task_index = gi;
    }
    history.push(model_task_index);
  }
  return trace;
}

std::vector<SegmentationTrace> segment_corpus(const AnyModel& model,
                                              const Corpus& corpus,
                                              HistoryMode mode,
                                              double threshold) {
  std::vector<SegmentationTrace> traces;
  traces.reserve(corpus.dialogs.size());
  for (const auto& d : corpus.dialogs)
    traces.push_back(segment_dialog(model, d, mode, corpus.schema, threshold));
  return traces;
}

std::string render_trace(const std::vector<SegmentationTrace>& traces,
                         const FeatureLayout& layout) {
  std::string out = "dialog\tturn\tgold\tpredicted\tregister\thistory";
  for (const auto& t : layout.tasks) out += "\tscore:" + t;
  out.push_back('\n');

  char buf[32];
  for (const auto& trace : traces) {
    for (const auto& e : trace.entries) {
      out += trace.dialog_id;
      out.push_back('\t');
      out += std::to_string(e.turn_index);
      out.push_back('\t');
      out += e.gold;
      out.push_back('\t');
      out += e.predicted;
      out.push_back('\t');
      out += e.register_codes;
      out.push_back('\t');
      for (std::size_t i = 0; i < e.history.size(); ++i) {
        if (i) out.push_back(',');
        out += e.history[i] < 0
                   ? "-"
                   : layout.tasks[static_cast<std::size_t>(e.history[i])];
      }
      for (double s : e.scores) {
        std::snprintf(buf, sizeof buf, "\t%.6f", s);
        out += buf;
      }
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace dialseg
