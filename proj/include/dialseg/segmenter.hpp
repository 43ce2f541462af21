#pragma once

#include <string>
#include <vector>

#include "dialseg/model_io.hpp"

namespace dialseg {

/// What feeds the task-history window during segmentation: the model's own
/// predictions (realistic, errors propagate) or the gold labels (oracle
/// history).
enum class HistoryMode { Predicted, Gold };

HistoryMode history_mode_from_string(const std::string& s);
const char* to_string(HistoryMode mode);

struct TraceEntry {
  int turn_index = 0;
  std::string gold;
  std::string predicted;
  TaskDistribution scores;
  std::string register_codes;
  std::vector<int> history;  // window content at prediction time
};

struct SegmentationTrace {
  std::string dialog_id;
  std::vector<TraceEntry> entries;
};

/// Argmax task of the model's score vector for (register, history);
/// ties break to the lowest task index.
int predict_task(const AnyModel& model, const UserRegister& reg,
                 const TaskHistory& history);

/// Turn-by-turn segmentation of one dialog: each user turn first updates the
/// register with its observation, then is classified, then pushes a label
/// (per `mode`) into the history window.  Gold labels missing from the
/// model's task inventory enter the history as "none".
SegmentationTrace segment_dialog(const AnyModel& model, const Dialog& dialog,
                                 HistoryMode mode, const TaskSchema& schema,
                                 double threshold);

std::vector<SegmentationTrace> segment_corpus(const AnyModel& model,
                                              const Corpus& corpus,
                                              HistoryMode mode,
                                              double threshold);

/// Tab-separated trace export, one row per user turn, stable column order.
std::string render_trace(const std::vector<SegmentationTrace>& traces,
                         const FeatureLayout& layout);

}  // namespace dialseg
