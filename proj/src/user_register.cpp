#include "dialseg/user_register.hpp"

#include "dialseg/error.hpp"

namespace dialseg {

UserRegister initial_register(const TaskSchema& schema) {
  UserRegister r;
  r.slot_codes.assign(schema.slots.size(), TernaryCode::Unknown);
  r.frame_codes.assign(schema.frames.size(), TernaryCode::Unknown);
  return r;
}

TernaryCode code_value(std::optional<double> confidence, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw ValidationError("threshold outside [0,1]");
  if (!confidence.has_value()) return TernaryCode::Unknown;
  double c = *confidence;
  if (!(c >= 0.0 && c <= 1.0))
    throw ValidationError("confidence outside [0,1]");
  return c >= threshold ? TernaryCode::High : TernaryCode::Low;
}

UserRegister update_register(const UserRegister& reg,
                             const SluObservation& obs, double threshold,
                             const TaskSchema& schema) {
  UserRegister out = reg;
  for (const auto& m : obs.slots) {
    int i = schema.slot_index(m.name);
    if (i < 0) throw ValidationError("unknown slot \"" + m.name + "\"");
    out.slot_codes[static_cast<std::size_t>(i)] = code_value(m.conf, threshold);
  }
  for (const auto& m : obs.frames) {
    int i = schema.frame_index(m.name);
    if (i < 0) throw ValidationError("unknown frame \"" + m.name + "\"");
    out.frame_codes[static_cast<std::size_t>(i)] =
        code_value(m.conf, threshold);
  }
  out.tiact_codes.fill(TernaryCode::Unknown);
  for (const auto& m : obs.tiacts) {
    int i = schema.tiact_index(m.name);
    if (i < 0)
      throw ValidationError("unknown task-independent act \"" + m.name + "\"");
    out.tiact_codes[static_cast<std::size_t>(i)] =
        code_value(m.conf, threshold);
  }
  return out;
}

std::string register_codes_string(const UserRegister& reg) {
  std::string s;
  s.reserve(reg.slot_codes.size() + reg.frame_codes.size() + 5);
  for (auto c : reg.slot_codes) s.push_back(static_cast<char>('0' + static_cast<int>(c)));
  s.push_back('|');
  for (auto c : reg.frame_codes) s.push_back(static_cast<char>('0' + static_cast<int>(c)));
  s.push_back('|');
  for (auto c : reg.tiact_codes) s.push_back(static_cast<char>('0' + static_cast<int>(c)));
  return s;
}

}  // namespace dialseg
