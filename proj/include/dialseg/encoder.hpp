#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dialseg/corpus.hpp"
#include "dialseg/user_register.hpp"

namespace dialseg {

/// Which register groups enter the feature vector, mirroring the three
/// ablation configurations: slot codes only; slot + task-independent-act
/// codes; or the complete set including frame codes.
enum class FeatureSet { AV, DA_AV, FULL };

FeatureSet feature_set_from_string(const std::string& s);
const char* to_string(FeatureSet fs);

/// Fixed-length window over the most recent task labels, most recent last.
/// -1 marks "no task yet".
struct TaskHistory {
  std::vector<int> window;

  static TaskHistory empty(std::size_t w) {
    TaskHistory h;
    h.window.assign(w, -1);
    return h;
  }
  void push(int task_index) {
    window.erase(window.begin());
    window.push_back(task_index);
  }
  bool operator==(const TaskHistory&) const = default;
};

enum class GroupKind { History, Slot, TiAct, Frame };

/// One named bit group: a C-wide task one-hot for history positions, or a
/// 3-wide one-hot for a ternary code.  `arity` is the size of the symbolic
/// value domain of the same group (C+1 for history: the task indices plus
/// "none"; 3 for ternary groups).
struct FeatureGroup {
  std::string name;
  GroupKind kind = GroupKind::Slot;
  std::size_t offset = 0;
  std::size_t width = 0;
  std::size_t arity = 0;
  bool operator==(const FeatureGroup&) const = default;
};

/// Complete description of the encoding: enough to rebuild feature vectors,
/// interpret them, and reject models applied to a different encoder
/// configuration.
struct FeatureLayout {
  std::vector<std::string> tasks;
  std::vector<std::string> slots;
  std::vector<std::string> frames;
  std::array<std::string, 3> tiacts;
  FeatureSet feature_set = FeatureSet::FULL;
  std::size_t window = 3;

  std::vector<FeatureGroup> groups;
  std::size_t dimension = 0;

  std::size_t num_classes() const { return tasks.size(); }

  /// Structural compatibility; group tables are derived so comparing the
  /// defining fields suffices.
  bool compatible(const FeatureLayout& other) const {
    return tasks == other.tasks && slots == other.slots &&
           frames == other.frames && tiacts == other.tiacts &&
           feature_set == other.feature_set && window == other.window;
  }
};

FeatureLayout make_layout(const TaskSchema& schema, std::size_t window,
                          FeatureSet fs);

/// W*C + 3*|slots| (+9 with task-independent acts) (+3*|frames| complete).
std::size_t feature_dimension(const TaskSchema& schema, std::size_t window,
                              FeatureSet fs);

/// Both views of one encoded turn: the 0/1 vector consumed by the numeric
/// classifiers and the per-group symbolic values consumed by the tree.
struct Encoded {
  std::vector<double> bits;
  std::vector<int> symbolic;
  bool operator==(const Encoded&) const = default;
};

/// Layout order: history (oldest to newest), slots, task-independent acts,
/// frames.  History entries one-hot over C (all zero for none); each ternary
/// code v sets bit v of its group.
Encoded encode(const UserRegister& reg, const TaskHistory& history,
               const FeatureLayout& layout);

struct DecodedFeatures {
  TaskHistory history;
  std::vector<TernaryCode> slot_codes;
  std::array<TernaryCode, 3> tiact_codes;
  std::vector<TernaryCode> frame_codes;
};

/// Inverse of encode over the groups present in the layout.
DecodedFeatures decode(const std::vector<double>& bits,
                       const FeatureLayout& layout);

}  // namespace dialseg
