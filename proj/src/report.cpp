#include "dialseg/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace dialseg {

using json = nlohmann::ordered_json;

namespace {

std::string fixed(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

void pad_to(std::string& line, std::size_t column) {
  while (line.size() < column) line.push_back(' ');
}

}  // namespace

std::string render_metrics_table(
    const std::vector<std::pair<std::string, EvalReport>>& reports) {
  if (reports.empty()) return "";
  const auto& tasks = reports.front().second.per_task;
  std::size_t name_width = std::string("Macro average").size();
  for (const auto& m : tasks) name_width = std::max(name_width, m.task.size());
  const std::size_t group_width = 24;

  std::string out;
  std::string head1;
  std::string head2 = "Task";
  pad_to(head2, name_width + 2);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    pad_to(head1, name_width + 2 + i * group_width);
    head1 += reports[i].first;
    head2 += "Prec.   Rec.    F-Meas. ";
  }
  out += head1 + "\n" + head2 + "\n";

  for (std::size_t t = 0; t < tasks.size(); ++t) {
    std::string line = tasks[t].task;
    pad_to(line, name_width + 2);
    for (const auto& [_, r] : reports) {
      const auto& m = r.per_task[t];
      line += fixed(m.precision, 2) + "    " + fixed(m.recall, 2) + "    " +
              fixed(m.f_measure, 2) + "    ";
    }
    out += line + "\n";
  }

  std::string macro = "Macro average";
  pad_to(macro, name_width + 2);
  std::string acc = "Accuracy";
  pad_to(acc, name_width + 2);
  for (const auto& [_, r] : reports) {
    macro += fixed(r.macro_precision, 2) + "    " + fixed(r.macro_recall, 2) +
             "    " + fixed(r.macro_f, 2) + "    ";
    acc += fixed(r.accuracy, 2) + "                    ";
  }
  out += macro + "\n" + acc + "\n";
  return out;
}

std::string render_ablation_table(
    const std::vector<std::pair<std::string, EvalReport>>& reports) {
  std::size_t name_width = std::string("Feature set").size();
  for (const auto& [name, _] : reports)
    name_width = std::max(name_width, name.size());

  std::string out = "Feature set";
  pad_to(out, name_width + 2);
  out += "Prec.   Rec.    F-Meas.\n";
  for (const auto& [name, r] : reports) {
    std::string line = name;
    pad_to(line, name_width + 2);
    line += fixed(r.macro_precision, 2) + "    " + fixed(r.macro_recall, 2) +
            "    " + fixed(r.macro_f, 2);
    out += line + "\n";
  }
  return out;
}

std::string report_json(const EvalReport& report) {
  json j;
  j["format"] = "dialseg-report";
  j["version"] = 1;
  json cfg;
  cfg["classifier"] = report.config.classifier;
  cfg["features"] = report.config.feature_set;
  cfg["window"] = report.config.window;
  cfg["threshold"] = report.config.threshold;
  cfg["history_mode"] = report.config.history_mode;
  cfg["folds"] = report.config.folds;
  cfg["seed"] = report.config.seed;
  j["config"] = std::move(cfg);
  j["accuracy"] = report.accuracy;
  j["macro_precision"] = report.macro_precision;
  j["macro_recall"] = report.macro_recall;
  j["macro_f"] = report.macro_f;
  json tasks = json::array();
  for (const auto& m : report.per_task) {
    json jt;
    jt["task"] = m.task;
    jt["precision"] = m.precision;
    jt["recall"] = m.recall;
    jt["f_measure"] = m.f_measure;
    jt["gold_turns"] = m.gold_count;
    tasks.push_back(std::move(jt));
  }
  j["tasks"] = std::move(tasks);
  json confusion;
  confusion["labels"] = report.confusion.labels;
  json rows = json::array();
  const std::size_t n = report.confusion.size();
  for (std::size_t g = 0; g < n; ++g) {
    json row = json::array();
    for (std::size_t p = 0; p < n; ++p) row.push_back(report.confusion.at(g, p));
    rows.push_back(std::move(row));
  }
  confusion["rows"] = std::move(rows);
  j["confusion"] = std::move(confusion);
  return j.dump(2) + "\n";
}

std::string render_stats(const CorpusStats& stats) {
  std::string out;
  out += "Number of dialogs                        " +
         std::to_string(stats.num_dialogs) + "\n";
  out += "Number of user turns                     " +
         std::to_string(stats.num_user_turns) + "\n";
  out += "Average number of user turns per dialog  " +
         fixed(stats.avg_user_turns_per_dialog, 1) + "\n";
  out += "Dialog acts per dialog                   " +
         fixed(stats.avg_dialog_acts_per_dialog, 1) + " +/- " +
         fixed(stats.stddev_dialog_acts_per_dialog, 1) + "\n";
  out += "Turns per task:\n";
  for (const auto& [task, count] : stats.per_task_turn_counts)
    out += "  " + task + ": " + std::to_string(count) + "\n";
  return out;
}

std::string stats_json(const CorpusStats& stats) {
  json j;
  j["format"] = "dialseg-stats";
  j["version"] = 1;
  j["num_dialogs"] = stats.num_dialogs;
  j["num_user_turns"] = stats.num_user_turns;
  j["avg_user_turns_per_dialog"] = stats.avg_user_turns_per_dialog;
  j["avg_dialog_acts_per_dialog"] = stats.avg_dialog_acts_per_dialog;
  j["stddev_dialog_acts_per_dialog"] = stats.stddev_dialog_acts_per_dialog;
  json tasks = json::array();
  for (const auto& [task, count] : stats.per_task_turn_counts) {
    json jt;
    jt["task"] = task;
    jt["user_turns"] = count;
    tasks.push_back(std::move(jt));
  }
  j["per_task_turn_counts"] = std::move(tasks);
  return j.dump(2) + "\n";
}

}  // namespace dialseg
