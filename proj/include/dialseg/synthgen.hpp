#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dialseg/corpus.hpp"
#include "dialseg/model_io.hpp"

namespace dialseg {

/// Confidence scores attached to generated mentions: with probability
/// low_prob a mention draws uniformly from [0, threshold), otherwise from
/// [high_mean - high_spread, high_mean + high_spread] clamped to [0,1].
struct ConfidenceModel {
  double high_mean = 0.9;
  double high_spread = 0.05;
  double low_prob = 0.1;
};

/// One joint emission alternative for a task: which acts/slots/tiacts/frames
/// a user turn of that task mentions.
struct EmissionPattern {
  double prob = 1.0;
  std::vector<std::string> acts;
  std::vector<std::string> slots;
  std::vector<std::string> tiacts;
  std::vector<std::string> frames;
};

/// Declarative description of a synthetic domain: a task-transition chain
/// plus per-task emission distributions and noise knobs.
struct GeneratorConfig {
  TaskSchema schema;
  /// Keys are task labels plus "__start__"; row entries keep file order.
  std::map<std::string, std::vector<std::pair<std::string, double>>>
      transition;
  std::map<std::string, std::vector<EmissionPattern>> emission;
  ConfidenceModel confidence;
  /// Per mention: probability it is corrupted (half dropped, half relabeled
  /// to a uniformly random sibling).
  double slot_noise = 0.0;
  /// Per user turn: probability it is replaced by an out-of-task turn with
  /// an uninformative observation; the task chain does not advance.
  double out_of_task_rate = 0.0;
  std::string out_of_task_label;
  std::size_t num_dialogs = 100;
  double mean_user_turns = 8.0;

  void validate() const;
};

GeneratorConfig load_generator_config(const std::string& json_text,
                                      const std::string& base_dir = "");
GeneratorConfig read_generator_config_file(const std::string& path);

/// Deterministic given (config, seed); dialog lengths are geometric with the
/// configured mean, every dialog has at least one user turn.
Corpus generate_corpus(const GeneratorConfig& cfg, std::uint64_t seed);

struct OracleOptions {
  bool monte_carlo = false;
  std::size_t sample_dialogs = 20000;  // Monte-Carlo estimation size
  std::uint64_t seed = 0;
  std::size_t max_states = 1000000;  // exact-mode guard
};

/// The generator's own conditional P(task | register codes, history window)
/// as a lookup classifier.  Exact mode enumerates the reachable state space
/// (noise-free configurations only); Monte-Carlo mode estimates the table
/// from freshly generated dialogs.  Upper-bounds what any classifier trained
/// on this generator can achieve.
AnyModel bayes_oracle(const GeneratorConfig& cfg, std::size_t window,
                      FeatureSet fs, const OracleOptions& options);

}  // namespace dialseg
