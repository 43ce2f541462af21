#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dialseg {

/// Static description of a dialog domain: the task inventory, the
/// task-dependent slots and predicate frames the understander can emit, the
/// three task-independent acts, and the confidence threshold that separates
/// high- from low-confidence mentions.
struct TaskSchema {
  std::string name;
  std::vector<std::string> tasks;
  std::vector<std::string> slots;
  std::vector<std::string> frames;
  std::array<std::string, 3> tiacts{"Affirmation", "Negation",
                                    "Not-Understood"};
  double threshold = 0.5;

  int task_index(const std::string& label) const;
  int slot_index(const std::string& name) const;
  int frame_index(const std::string& name) const;
  int tiact_index(const std::string& name) const;

  /// Throws ValidationError on duplicate/empty labels or a bad threshold.
  void validate() const;

  bool operator==(const TaskSchema&) const = default;
};

struct ActMention {
  std::string name;
  double conf = 0.0;
  bool operator==(const ActMention&) const = default;
};

struct SlotMention {
  std::string name;
  std::string value;
  double conf = 0.0;
  bool operator==(const SlotMention&) const = default;
};

/// Per-turn output of the (simulated) understanding module.
struct SluObservation {
  std::vector<ActMention> acts;
  std::vector<SlotMention> slots;
  std::vector<ActMention> frames;
  std::vector<ActMention> tiacts;
  bool operator==(const SluObservation&) const = default;
};

enum class Speaker { User, System };

struct Turn {
  int index = 0;
  Speaker speaker = Speaker::User;
  SluObservation observation;            // user turns only
  std::vector<std::string> system_acts;  // system turns only
  std::string task;                      // gold label, user turns only
  bool operator==(const Turn&) const = default;
};

struct Dialog {
  std::string id;
  std::vector<Turn> turns;
  std::size_t user_turn_count() const;
  bool operator==(const Dialog&) const = default;
};

struct Corpus {
  TaskSchema schema;
  std::vector<Dialog> dialogs;

  /// Full structural validation (schema cross-references, turn indices,
  /// confidence ranges).  Throws ValidationError.
  void validate() const;

  bool operator==(const Corpus&) const = default;
};

struct CorpusStats {
  std::size_t num_dialogs = 0;
  std::size_t num_user_turns = 0;
  double avg_user_turns_per_dialog = 0.0;
  /// Gold-label occurrence counts, in schema task order.
  std::vector<std::pair<std::string, std::size_t>> per_task_turn_counts;
  double avg_dialog_acts_per_dialog = 0.0;
  double stddev_dialog_acts_per_dialog = 0.0;
};

struct FoldAssignment {
  int k = 0;
  std::map<std::string, int> fold_of;  // dialog id -> fold in [0, k)
};

TaskSchema load_schema(const std::string& json_text);
std::string save_schema(const TaskSchema& schema);
TaskSchema read_schema_file(const std::string& path);

/// Parses the line-delimited corpus format (see FORMAT.md): a header line
/// with the schema followed by one dialog object per line.  Errors carry the
/// offending line number.
Corpus load_corpus(const std::string& text);

/// Same parse, plus the statistics accumulated incrementally while reading.
std::pair<Corpus, CorpusStats> load_corpus_with_stats(const std::string& text);

/// Canonical serialization: fixed key order, compact separators, one dialog
/// per line.  Structurally equal corpora serialize to identical bytes.
std::string save_corpus(const Corpus& corpus);

Corpus read_corpus_file(const std::string& path);
void write_corpus_file(const Corpus& corpus, const std::string& path);

CorpusStats corpus_stats(const Corpus& corpus);

/// Dialog-level k-fold partition: ids are shuffled with the seeded generator
/// and dealt round-robin, so fold sizes differ by at most one.
FoldAssignment split_folds(const Corpus& corpus, int k, std::uint64_t seed);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dialseg
