#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dialseg/evaluator.hpp"

namespace dialseg {

/// Task rows with Prec./Rec./F-Meas. columns, one column group per
/// classifier, macro averages and accuracy at the bottom.  Values are
/// rounded to two decimals; the structured report keeps full precision.
std::string render_metrics_table(
    const std::vector<std::pair<std::string, EvalReport>>& reports);

/// Feature-set rows with macro Prec./Rec./F-Meas. columns.
std::string render_ablation_table(
    const std::vector<std::pair<std::string, EvalReport>>& reports);

/// Structured report: configuration echo, per-task metrics, confusion.
/// Stable field ordering.
std::string report_json(const EvalReport& report);

std::string render_stats(const CorpusStats& stats);
std::string stats_json(const CorpusStats& stats);

}  // namespace dialseg
