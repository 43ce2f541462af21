#pragma once

#include <string>
#include <vector>

#include "dialseg/corpus.hpp"
#include "dialseg/rng.hpp"

namespace dialseg::testutil {

inline TaskSchema mini_schema() {
  TaskSchema s;
  s.name = "mini";
  s.tasks = {"greet", "ask", "answer", "bye"};
  s.slots = {"origin", "destination"};
  s.frames = {"Telling", "Greeting", "Contacting"};
  s.threshold = 0.5;
  return s;
}

inline Turn user_turn(int index, const std::string& task,
                      std::vector<SlotMention> slots = {},
                      std::vector<ActMention> tiacts = {},
                      std::vector<ActMention> frames = {}) {
  Turn t;
  t.index = index;
  t.speaker = Speaker::User;
  t.task = task;
  t.observation.slots = std::move(slots);
  t.observation.tiacts = std::move(tiacts);
  t.observation.frames = std::move(frames);
  return t;
}

inline Turn system_turn(int index,
                        std::vector<std::string> acts = {"Prompt"}) {
  Turn t;
  t.index = index;
  t.speaker = Speaker::System;
  t.system_acts = std::move(acts);
  return t;
}

/// Tiny but structurally rich corpus over mini_schema().
inline Corpus mini_corpus() {
  Corpus c;
  c.schema = mini_schema();
  Dialog d0;
  d0.id = "d0";
  d0.turns.push_back(system_turn(0));
  d0.turns.push_back(user_turn(1, "greet", {{"origin", "valencia", 0.9}}, {},
                               {{"Greeting", 0.8}}));
  d0.turns.push_back(user_turn(2, "ask", {{"destination", "madrid", 0.3}},
                               {{"Affirmation", 0.7}}));
  Dialog d1;
  d1.id = "d1";
  d1.turns.push_back(user_turn(0, "answer", {}, {{"Negation", 0.2}}));
  d1.turns.push_back(system_turn(1, {"Inform", "Ask"}));
  d1.turns.push_back(user_turn(2, "bye"));
  c.dialogs = {d0, d1};
  return c;
}

/// n dialogs of alternating user turns, ~turns_per_dialog each.
inline Corpus synthetic_mini_corpus(std::size_t n_dialogs,
                                    std::size_t turns_per_dialog,
                                    std::uint64_t seed) {
  Corpus c;
  c.schema = mini_schema();
  Rng rng(seed);
  for (std::size_t i = 0; i < n_dialogs; ++i) {
    Dialog d;
    d.id = "d" + std::to_string(i);
    int index = 0;
    for (std::size_t t = 0; t < turns_per_dialog; ++t) {
      auto task = c.schema.tasks[rng.below(c.schema.tasks.size())];
      std::vector<SlotMention> slots;
      if (rng.chance(0.7))
        slots.push_back({c.schema.slots[rng.below(2)], "v", rng.uniform01()});
      std::vector<ActMention> tiacts;
      if (rng.chance(0.3))
        tiacts.push_back({c.schema.tiacts[rng.below(3)], rng.uniform01()});
      d.turns.push_back(user_turn(index++, task, std::move(slots),
                                  std::move(tiacts)));
    }
    c.dialogs.push_back(std::move(d));
  }
  return c;
}

}  // namespace dialseg::testutil
