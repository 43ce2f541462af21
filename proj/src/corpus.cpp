#include "dialseg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "dialseg/error.hpp"
#include "dialseg/rng.hpp"

namespace dialseg {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kCorpusFormat = "dialseg-corpus";
constexpr int kCorpusVersion = 1;

int index_of(const std::vector<std::string>& v, const std::string& s) {
  auto it = std::find(v.begin(), v.end(), s);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

[[noreturn]] void fail_line(std::size_t line, const std::string& msg) {
  throw ValidationError("line " + std::to_string(line) + ": " + msg);
}

void check_conf(double conf, std::size_t line, const std::string& what) {
  if (!(conf >= 0.0 && conf <= 1.0))
    fail_line(line, what + " confidence " + std::to_string(conf) +
                        " outside [0,1]");
}

json parse_line(const std::string& text, std::size_t line) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail_line(line, "malformed JSON");
  if (!j.is_object()) fail_line(line, "expected a JSON object");
  return j;
}

std::string get_string(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j[key].is_string())
    fail_line(line, std::string("missing or non-string field \"") + key +
                        "\"");
  return j[key].get<std::string>();
}

std::vector<std::string> get_string_array(const json& j, const char* key,
                                          std::size_t line) {
  if (!j.contains(key) || !j[key].is_array())
    fail_line(line, std::string("missing or non-array field \"") + key +
                        "\"");
  std::vector<std::string> out;
  for (const auto& e : j[key]) {
    if (!e.is_string())
      fail_line(line, std::string("non-string entry in \"") + key + "\"");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<ActMention> parse_mentions(const json& turn, const char* key,
                                       std::size_t line) {
  std::vector<ActMention> out;
  if (!turn.contains(key)) return out;
  if (!turn[key].is_array())
    fail_line(line, std::string("field \"") + key + "\" must be an array");
  for (const auto& m : turn[key]) {
    ActMention am;
    am.name = get_string(m, "name", line);
    if (!m.contains("conf") || !m["conf"].is_number())
      fail_line(line, std::string("mention in \"") + key +
                          "\" lacks numeric \"conf\"");
    am.conf = m["conf"].get<double>();
    check_conf(am.conf, line, am.name);
    out.push_back(std::move(am));
  }
  return out;
}

json mention_json(const ActMention& m) {
  return json{{"name", m.name}, {"conf", m.conf}};
}

json schema_json(const TaskSchema& s) {
  json j;
  j["name"] = s.name;
  j["tasks"] = s.tasks;
  j["slots"] = s.slots;
  j["frames"] = s.frames;
  j["tiacts"] = json::array({s.tiacts[0], s.tiacts[1], s.tiacts[2]});
  j["threshold"] = s.threshold;
  return j;
}

TaskSchema schema_from_json(const json& j, std::size_t line) {
  TaskSchema s;
  s.name = get_string(j, "name", line);
  s.tasks = get_string_array(j, "tasks", line);
  s.slots = get_string_array(j, "slots", line);
  s.frames = get_string_array(j, "frames", line);
  if (j.contains("tiacts")) {
    auto t = get_string_array(j, "tiacts", line);
    if (t.size() != 3)
      fail_line(line, "\"tiacts\" must list exactly three act names");
    s.tiacts = {t[0], t[1], t[2]};
  }
  if (j.contains("threshold")) {
    if (!j["threshold"].is_number())
      fail_line(line, "\"threshold\" must be a number");
    s.threshold = j["threshold"].get<double>();
  }
  try {
    s.validate();
  } catch (const ValidationError& e) {
    fail_line(line, e.what());
  }
  return s;
}

Turn turn_from_json(const json& jt, const TaskSchema& schema,
                    std::size_t line) {
  Turn t;
  if (!jt.contains("index") || !jt["index"].is_number_integer())
    fail_line(line, "turn lacks integer \"index\"");
  t.index = jt["index"].get<int>();
  std::string sp = get_string(jt, "speaker", line);
  if (sp == "user") {
    t.speaker = Speaker::User;
  } else if (sp == "system") {
    t.speaker = Speaker::System;
  } else {
    fail_line(line, "speaker must be \"user\" or \"system\", got \"" + sp +
                        "\"");
  }

  if (t.speaker == Speaker::User) {
    t.observation.acts = parse_mentions(jt, "acts", line);
    t.observation.frames = parse_mentions(jt, "frames", line);
    t.observation.tiacts = parse_mentions(jt, "tiacts", line);
    if (jt.contains("slots")) {
      if (!jt["slots"].is_array())
        fail_line(line, "field \"slots\" must be an array");
      for (const auto& m : jt["slots"]) {
        SlotMention sm;
        sm.name = get_string(m, "name", line);
        sm.value = get_string(m, "value", line);
        if (!m.contains("conf") || !m["conf"].is_number())
          fail_line(line, "slot mention lacks numeric \"conf\"");
        sm.conf = m["conf"].get<double>();
        check_conf(sm.conf, line, sm.name);
        t.observation.slots.push_back(std::move(sm));
      }
    }
    if (!jt.contains("task"))
      fail_line(line, "user turn " + std::to_string(t.index) +
                          " lacks required \"task\"");
    t.task = get_string(jt, "task", line);
    if (schema.task_index(t.task) < 0)
      fail_line(line, "task \"" + t.task + "\" not in schema");
    for (const auto& m : t.observation.slots)
      if (schema.slot_index(m.name) < 0)
        fail_line(line, "slot \"" + m.name + "\" not in schema");
    for (const auto& m : t.observation.frames)
      if (schema.frame_index(m.name) < 0)
        fail_line(line, "frame \"" + m.name + "\" not in schema");
    for (const auto& m : t.observation.tiacts)
      if (schema.tiact_index(m.name) < 0)
        fail_line(line, "task-independent act \"" + m.name +
                            "\" not in schema");
    if (jt.contains("sysacts"))
      fail_line(line, "user turn carries \"sysacts\"");
  } else {
    if (jt.contains("task") || jt.contains("acts") || jt.contains("slots") ||
        jt.contains("frames") || jt.contains("tiacts"))
      fail_line(line, "system turn carries user-only fields");
    if (jt.contains("sysacts")) t.system_acts = get_string_array(jt, "sysacts", line);
  }
  return t;
}

json turn_json(const Turn& t) {
  json j;
  j["index"] = t.index;
  j["speaker"] = t.speaker == Speaker::User ? "user" : "system";
  if (t.speaker == Speaker::User) {
    json acts = json::array();
    for (const auto& m : t.observation.acts) acts.push_back(mention_json(m));
    j["acts"] = std::move(acts);
    json slots = json::array();
    for (const auto& m : t.observation.slots)
      slots.push_back(json{{"name", m.name}, {"value", m.value}, {"conf", m.conf}});
    j["slots"] = std::move(slots);
    json frames = json::array();
    for (const auto& m : t.observation.frames) frames.push_back(mention_json(m));
    j["frames"] = std::move(frames);
    json tiacts = json::array();
    for (const auto& m : t.observation.tiacts) tiacts.push_back(mention_json(m));
    j["tiacts"] = std::move(tiacts);
    j["task"] = t.task;
  } else {
    j["sysacts"] = t.system_acts;
  }
  return j;
}

/// Dialog-act annotations on a dialog: user acts + task-independent acts +
/// system acts.  Feeds the per-dialog act statistics.
std::size_t dialog_act_count(const Dialog& d) {
  std::size_t n = 0;
  for (const auto& t : d.turns) {
    if (t.speaker == Speaker::User)
      n += t.observation.acts.size() + t.observation.tiacts.size();
    else
      n += t.system_acts.size();
  }
  return n;
}

class StatsAccumulator {
 public:
  explicit StatsAccumulator(const TaskSchema& schema) : schema_(&schema) {
    task_counts_.assign(schema.tasks.size(), 0);
  }

  void add(const Dialog& d) {
    ++dialogs_;
    for (const auto& t : d.turns) {
      if (t.speaker != Speaker::User) continue;
      ++user_turns_;
      int ti = schema_->task_index(t.task);
      if (ti >= 0) ++task_counts_[static_cast<std::size_t>(ti)];
    }
    double acts = static_cast<double>(dialog_act_count(d));
    act_sum_ += acts;
    act_sq_sum_ += acts * acts;
  }

  CorpusStats finish() const {
    if (dialogs_ == 0) throw ValidationError("empty corpus has no statistics");
    CorpusStats s;
    s.num_dialogs = dialogs_;
    s.num_user_turns = user_turns_;
    s.avg_user_turns_per_dialog =
        static_cast<double>(user_turns_) / static_cast<double>(dialogs_);
    for (std::size_t i = 0; i < schema_->tasks.size(); ++i)
      s.per_task_turn_counts.emplace_back(schema_->tasks[i], task_counts_[i]);
    double n = static_cast<double>(dialogs_);
    s.avg_dialog_acts_per_dialog = act_sum_ / n;
    double var = act_sq_sum_ / n -
                 s.avg_dialog_acts_per_dialog * s.avg_dialog_acts_per_dialog;
    s.stddev_dialog_acts_per_dialog = std::sqrt(std::max(0.0, var));
    return s;
  }

 private:
  const TaskSchema* schema_;
  std::size_t dialogs_ = 0;
  std::size_t user_turns_ = 0;
  std::vector<std::size_t> task_counts_;
  double act_sum_ = 0.0;
  double act_sq_sum_ = 0.0;
};

}  // namespace

int TaskSchema::task_index(const std::string& label) const {
  return index_of(tasks, label);
}
int TaskSchema::slot_index(const std::string& n) const {
  return index_of(slots, n);
}
int TaskSchema::frame_index(const std::string& n) const {
  return index_of(frames, n);
}
int TaskSchema::tiact_index(const std::string& n) const {
  for (std::size_t i = 0; i < tiacts.size(); ++i)
    if (tiacts[i] == n) return static_cast<int>(i);
  return -1;
}

void TaskSchema::validate() const {
  auto check_unique = [](const std::vector<std::string>& v,
                         const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].empty())
        throw ValidationError(std::string("empty ") + what + " name");
      for (std::size_t j = i + 1; j < v.size(); ++j)
        if (v[i] == v[j])
          throw ValidationError(std::string("duplicate ") + what + " \"" +
                                v[i] + "\"");
    }
  };
  if (tasks.size() < 2)
    throw ValidationError("schema needs at least two tasks");
  check_unique(tasks, "task");
  check_unique(slots, "slot");
  check_unique(frames, "frame");
  for (const auto& t : tiacts)
    if (t.empty()) throw ValidationError("empty task-independent act name");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw ValidationError("threshold outside [0,1]");
}

std::size_t Dialog::user_turn_count() const {
  return static_cast<std::size_t>(
      std::count_if(turns.begin(), turns.end(), [](const Turn& t) {
        return t.speaker == Speaker::User;
      }));
}

void Corpus::validate() const {
  schema.validate();
  std::vector<std::string> ids;
  for (const auto& d : dialogs) ids.push_back(d.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw ValidationError("duplicate dialog id");
  for (const auto& d : dialogs) {
    if (d.id.empty()) throw ValidationError("empty dialog id");
    for (std::size_t i = 0; i < d.turns.size(); ++i) {
      const Turn& t = d.turns[i];
      if (t.index != static_cast<int>(i))
        throw ValidationError("dialog " + d.id +
                              ": turn indices not consecutive from 0");
      if (t.speaker == Speaker::User) {
        if (schema.task_index(t.task) < 0)
          throw ValidationError("dialog " + d.id + ": task \"" + t.task +
                                "\" not in schema");
        for (const auto& m : t.observation.slots) {
          if (schema.slot_index(m.name) < 0)
            throw ValidationError("dialog " + d.id + ": slot \"" + m.name +
                                  "\" not in schema");
          if (!(m.conf >= 0.0 && m.conf <= 1.0))
            throw ValidationError("dialog " + d.id + ": confidence outside [0,1]");
        }
        for (const auto& m : t.observation.frames)
          if (schema.frame_index(m.name) < 0)
            throw ValidationError("dialog " + d.id + ": frame \"" + m.name +
                                  "\" not in schema");
        for (const auto& m : t.observation.tiacts)
          if (schema.tiact_index(m.name) < 0)
            throw ValidationError("dialog " + d.id + ": tiact \"" + m.name +
                                  "\" not in schema");
      } else {
        if (!t.task.empty())
          throw ValidationError("dialog " + d.id + ": system turn has a task");
      }
    }
  }
}

TaskSchema load_schema(const std::string& json_text) {
  return schema_from_json(parse_line(json_text, 1), 1);
}

std::string save_schema(const TaskSchema& schema) {
  return schema_json(schema).dump() + "\n";
}

TaskSchema read_schema_file(const std::string& path) {
  return load_schema(read_text_file(path));
}

std::pair<Corpus, CorpusStats> load_corpus_with_stats(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ValidationError("empty corpus document");
  ++lineno;
  json header = parse_line(line, lineno);
  if (get_string(header, "format", lineno) != kCorpusFormat)
    fail_line(lineno, "not a dialseg corpus document");
  if (!header.contains("version") ||
      header["version"].get<int>() != kCorpusVersion)
    fail_line(lineno, "unsupported corpus format version");
  if (!header.contains("schema"))
    fail_line(lineno, "header lacks \"schema\"");

  Corpus corpus;
  corpus.schema = schema_from_json(header["schema"], lineno);
  StatsAccumulator stats(corpus.schema);

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json jd = parse_line(line, lineno);
    Dialog d;
    d.id = get_string(jd, "id", lineno);
    if (!jd.contains("turns") || !jd["turns"].is_array())
      fail_line(lineno, "dialog lacks \"turns\" array");
    int expected = 0;
    for (const auto& jt : jd["turns"]) {
      Turn t = turn_from_json(jt, corpus.schema, lineno);
      if (t.index != expected)
        fail_line(lineno, "dialog " + d.id +
                              ": turn indices not consecutive from 0");
      ++expected;
      d.turns.push_back(std::move(t));
    }
    stats.add(d);
    corpus.dialogs.push_back(std::move(d));
  }

  for (std::size_t i = 0; i < corpus.dialogs.size(); ++i)
    for (std::size_t j = i + 1; j < corpus.dialogs.size(); ++j)
      if (corpus.dialogs[i].id == corpus.dialogs[j].id)
        throw ValidationError("duplicate dialog id \"" +
                              corpus.dialogs[i].id + "\"");

  CorpusStats s{};
  if (!corpus.dialogs.empty()) s = stats.finish();
  return {std::move(corpus), s};
}

Corpus load_corpus(const std::string& text) {
  return load_corpus_with_stats(text).first;
}

std::string save_corpus(const Corpus& corpus) {
  json header;
  header["format"] = kCorpusFormat;
  header["version"] = kCorpusVersion;
  header["schema"] = schema_json(corpus.schema);
  std::string out = header.dump();
  out.push_back('\n');
  for (const auto& d : corpus.dialogs) {
    json jd;
    jd["id"] = d.id;
    json turns = json::array();
    for (const auto& t : d.turns) turns.push_back(turn_json(t));
    jd["turns"] = std::move(turns);
    out += jd.dump();
    out.push_back('\n');
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

Corpus read_corpus_file(const std::string& path) {
  return load_corpus(read_text_file(path));
}

void write_corpus_file(const Corpus& corpus, const std::string& path) {
  write_text_file(path, save_corpus(corpus));
}

CorpusStats corpus_stats(const Corpus& corpus) {
  if (corpus.dialogs.empty())
    throw ValidationError("empty corpus has no statistics");
  StatsAccumulator acc(corpus.schema);
  for (const auto& d : corpus.dialogs) acc.add(d);
  return acc.finish();
}

FoldAssignment split_folds(const Corpus& corpus, int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("fold count must be at least 2");
  if (static_cast<std::size_t>(k) > corpus.dialogs.size())
    throw ValidationError("fold count exceeds number of dialogs");
  std::vector<std::size_t> order(corpus.dialogs.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  FoldAssignment fa;
  fa.k = k;
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    fa.fold_of[corpus.dialogs[order[pos]].id] = static_cast<int>(pos % k);
  return fa;
}

}  // namespace dialseg
