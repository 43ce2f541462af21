#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dialseg/corpus.hpp"

namespace dialseg {

/// Ternary confidence state of one slot/frame/act:
///   Unknown - never mentioned (or reset),
///   High    - mentioned with confidence at or above the threshold,
///   Low     - mentioned with confidence below the threshold.
enum class TernaryCode : std::uint8_t { Unknown = 0, High = 1, Low = 2 };

/// Accumulated, confidence-coded record of what the user has provided so
/// far.  Slot and frame codes persist across turns (latest mention wins);
/// the three task-independent act codes describe the current turn only.
struct UserRegister {
  std::vector<TernaryCode> slot_codes;   // parallel to schema.slots
  std::vector<TernaryCode> frame_codes;  // parallel to schema.frames
  std::array<TernaryCode, 3> tiact_codes{TernaryCode::Unknown,
                                         TernaryCode::Unknown,
                                         TernaryCode::Unknown};
  bool operator==(const UserRegister&) const = default;
};

UserRegister initial_register(const TaskSchema& schema);

/// Absent mention -> Unknown; confidence >= threshold -> High; else Low.
TernaryCode code_value(std::optional<double> confidence, double threshold);

/// Returns the register after one user turn: every slot/frame mentioned in
/// the observation is recoded (latest mention wins), everything else keeps
/// its code; task-independent acts are recoded from this turn alone.
UserRegister update_register(const UserRegister& reg,
                             const SluObservation& obs, double threshold,
                             const TaskSchema& schema);

/// Compact digit string "slots|frames|tiacts", e.g. "102|00|100".
std::string register_codes_string(const UserRegister& reg);

}  // namespace dialseg
