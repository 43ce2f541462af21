#include "dialseg/encoder.hpp"

#include "dialseg/error.hpp"

namespace dialseg {

FeatureSet feature_set_from_string(const std::string& s) {
  if (s == "av") return FeatureSet::AV;
  if (s == "da_av") return FeatureSet::DA_AV;
  if (s == "full") return FeatureSet::FULL;
  throw ValidationError("unknown feature set \"" + s +
                        "\" (expected av, da_av, or full)");
}

const char* to_string(FeatureSet fs) {
  switch (fs) {
    case FeatureSet::AV: return "av";
    case FeatureSet::DA_AV: return "da_av";
    case FeatureSet::FULL: return "full";
  }
  return "?";
}

FeatureLayout make_layout(const TaskSchema& schema, std::size_t window,
                          FeatureSet fs) {
  if (window < 1) throw ValidationError("history window must be at least 1");
  schema.validate();
  FeatureLayout layout;
  layout.tasks = schema.tasks;
  layout.slots = schema.slots;
  layout.frames = schema.frames;
  layout.tiacts = schema.tiacts;
  layout.feature_set = fs;
  layout.window = window;

  const std::size_t c = schema.tasks.size();
  std::size_t offset = 0;
  auto add = [&](std::string name, GroupKind kind, std::size_t width,
                 std::size_t arity) {
    layout.groups.push_back({std::move(name), kind, offset, width, arity});
    offset += width;
  };

  for (std::size_t i = 0; i < window; ++i)
    add("history[-" + std::to_string(window - i) + "]", GroupKind::History, c,
        c + 1);
  for (const auto& s : schema.slots) add("slot:" + s, GroupKind::Slot, 3, 3);
  if (fs != FeatureSet::AV)
    for (const auto& a : schema.tiacts)
      add("tiact:" + a, GroupKind::TiAct, 3, 3);
  if (fs == FeatureSet::FULL)
    for (const auto& f : schema.frames)
      add("frame:" + f, GroupKind::Frame, 3, 3);

  layout.dimension = offset;
  return layout;
}

std::size_t feature_dimension(const TaskSchema& schema, std::size_t window,
                              FeatureSet fs) {
  return make_layout(schema, window, fs).dimension;
}

Encoded encode(const UserRegister& reg, const TaskHistory& history,
               const FeatureLayout& layout) {
  if (history.window.size() != layout.window)
    throw ValidationError("history length does not match layout window");
  if (reg.slot_codes.size() != layout.slots.size() ||
      reg.frame_codes.size() != layout.frames.size())
    throw ValidationError("register does not match layout");

  const int c = static_cast<int>(layout.num_classes());
  Encoded enc;
  enc.bits.assign(layout.dimension, 0.0);
  enc.symbolic.reserve(layout.groups.size());

  std::size_t hist_pos = 0, slot_pos = 0, tiact_pos = 0, frame_pos = 0;
  for (const auto& g : layout.groups) {
    int value = 0;
    switch (g.kind) {
      case GroupKind::History: {
        int t = history.window[hist_pos++];
        if (t >= c || t < -1)
          throw ValidationError("history task index out of range");
        if (t >= 0) enc.bits[g.offset + static_cast<std::size_t>(t)] = 1.0;
        value = t >= 0 ? t : c;  // symbolic: task index, or C for none
        break;
      }
      case GroupKind::Slot:
        value = static_cast<int>(reg.slot_codes[slot_pos++]);
        enc.bits[g.offset + static_cast<std::size_t>(value)] = 1.0;
        break;
      case GroupKind::TiAct:
        value = static_cast<int>(reg.tiact_codes[tiact_pos++]);
        enc.bits[g.offset + static_cast<std::size_t>(value)] = 1.0;
        break;
      case GroupKind::Frame:
        value = static_cast<int>(reg.frame_codes[frame_pos++]);
        enc.bits[g.offset + static_cast<std::size_t>(value)] = 1.0;
        break;
    }
    enc.symbolic.push_back(value);
  }
  return enc;
}

DecodedFeatures decode(const std::vector<double>& bits,
                       const FeatureLayout& layout) {
  if (bits.size() != layout.dimension)
    throw ValidationError("bit vector does not match layout dimension");
  DecodedFeatures out;
  out.history = TaskHistory::empty(layout.window);
  out.slot_codes.assign(layout.slots.size(), TernaryCode::Unknown);
  out.frame_codes.assign(layout.frames.size(), TernaryCode::Unknown);
  out.tiact_codes.fill(TernaryCode::Unknown);

  std::size_t hist_pos = 0, slot_pos = 0, tiact_pos = 0, frame_pos = 0;
  for (const auto& g : layout.groups) {
    int hot = -1;
    for (std::size_t i = 0; i < g.width; ++i)
      if (bits[g.offset + i] != 0.0) hot = static_cast<int>(i);
    switch (g.kind) {
      case GroupKind::History:
        out.history.window[hist_pos++] = hot;
        break;
      case GroupKind::Slot:
        out.slot_codes[slot_pos++] = static_cast<TernaryCode>(hot < 0 ? 0 : hot);
        break;
      case GroupKind::TiAct:
        out.tiact_codes[tiact_pos++] = static_cast<TernaryCode>(hot < 0 ? 0 : hot);
        break;
      case GroupKind::Frame:
        out.frame_codes[frame_pos++] = static_cast<TernaryCode>(hot < 0 ? 0 : hot);
        break;
    }
  }
  return out;
}

}  // namespace dialseg
