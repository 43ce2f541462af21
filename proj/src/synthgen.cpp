#include "dialseg/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "dialseg/error.hpp"
#include "dialseg/rng.hpp"
#include "dialseg/user_register.hpp"

namespace dialseg {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kGenFormat = "dialseg-gen";
constexpr int kGenVersion = 1;
constexpr const char* kStartKey = "__start__";

void check_distribution(const std::vector<double>& probs,
                        const std::string& what) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError(what + ": probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError(what + ": probabilities sum to " +
                          std::to_string(sum) + ", expected 1");
}

double draw_confidence(Rng& rng, const ConfidenceModel& cm, double threshold) {
  if (rng.uniform01() < cm.low_prob) return rng.uniform(0.0, threshold);
  double c = rng.uniform(cm.high_mean - cm.high_spread,
                         cm.high_mean + cm.high_spread);
  return std::clamp(c, 0.0, 1.0);
}

/// Applies mention noise: returns the (possibly relabeled) name, or nullopt
/// when the mention is dropped.
std::optional<std::string> apply_noise(Rng& rng, double noise,
                                       const std::string& name,
                                       const std::vector<std::string>& pool) {
  if (noise <= 0.0) return name;
  if (rng.uniform01() >= noise) return name;
  if (rng.uniform01() < 0.5 || pool.size() < 2) return std::nullopt;  // drop
  // relabel to a uniformly random sibling
  std::size_t k = rng.below(pool.size() - 1);
  for (std::size_t i = 0, seen = 0; i < pool.size(); ++i) {
    if (pool[i] == name) continue;
    if (seen++ == k) return pool[i];
  }
  return std::nullopt;
}

class DialogSampler {
 public:
  DialogSampler(const GeneratorConfig& cfg, Rng& rng)
      : cfg_(cfg), rng_(rng) {}

  Dialog next(std::size_t ordinal) {
    Dialog d;
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "d%05zu", ordinal);
    d.id = idbuf;

    std::string chain = kStartKey;
    double continue_prob =
        cfg_.mean_user_turns <= 1.0 ? 0.0 : 1.0 - 1.0 / cfg_.mean_user_turns;
    int index = 0;
    while (true) {
      Turn sys;
      sys.index = index++;
      sys.speaker = Speaker::System;
      sys.system_acts = {"Prompt"};
      d.turns.push_back(std::move(sys));

      Turn user;
      user.index = index++;
      user.speaker = Speaker::User;
      bool out_of_task = rng_.uniform01() < cfg_.out_of_task_rate;
      if (out_of_task) {
        user.task = cfg_.out_of_task_label;
        user.observation.acts.push_back(
            {"Other", draw_confidence(rng_, cfg_.confidence,
                                      cfg_.schema.threshold)});
      } else {
        user.task = sample_transition(chain);
        user.observation = sample_emission(user.task);
        chain = user.task;
      }
      d.turns.push_back(std::move(user));

      if (!(rng_.uniform01() < continue_prob)) break;
    }
    return d;
  }

 private:
  std::string sample_transition(const std::string& from) {
    const auto& row = cfg_.transition.at(from);
    std::vector<double> weights;
    weights.reserve(row.size());
    for (const auto& [_, p] : row) weights.push_back(p);
    return row[rng_.categorical(weights)].first;
  }

  SluObservation sample_emission(const std::string& task) {
    const auto& patterns = cfg_.emission.at(task);
    std::vector<double> weights;
    weights.reserve(patterns.size());
    for (const auto& p : patterns) weights.push_back(p.prob);
    const EmissionPattern& pat = patterns[rng_.categorical(weights)];

    SluObservation obs;
    const double threshold = cfg_.schema.threshold;
    for (const auto& a : pat.acts)
      obs.acts.push_back({a, draw_confidence(rng_, cfg_.confidence, threshold)});
    for (const auto& s : pat.slots) {
      auto name = apply_noise(rng_, cfg_.slot_noise, s, cfg_.schema.slots);
      if (!name) continue;
      std::string value = "v" + std::to_string(rng_.below(8));
      obs.slots.push_back(
          {*name, value, draw_confidence(rng_, cfg_.confidence, threshold)});
    }
    for (const auto& t : pat.tiacts) {
      std::vector<std::string> pool(cfg_.schema.tiacts.begin(),
                                    cfg_.schema.tiacts.end());
      auto name = apply_noise(rng_, cfg_.slot_noise, t, pool);
      if (!name) continue;
      obs.tiacts.push_back(
          {*name, draw_confidence(rng_, cfg_.confidence, threshold)});
    }
    for (const auto& f : pat.frames) {
      auto name = apply_noise(rng_, cfg_.slot_noise, f, cfg_.schema.frames);
      if (!name) continue;
      obs.frames.push_back(
          {*name, draw_confidence(rng_, cfg_.confidence, threshold)});
    }
    return obs;
  }

  const GeneratorConfig& cfg_;
  Rng& rng_;
};

}  // namespace

void GeneratorConfig::validate() const {
  schema.validate();
  if (num_dialogs == 0) throw ValidationError("num_dialogs must be positive");
  if (!(mean_user_turns >= 1.0))
    throw ValidationError("mean_user_turns must be at least 1");
  for (double p : {slot_noise, out_of_task_rate, confidence.low_prob})
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError("probability outside [0,1]");
  if (out_of_task_rate > 0.0 &&
      schema.task_index(out_of_task_label) < 0)
    throw ValidationError(
        "out_of_task_rate > 0 requires out_of_task_label to be a schema task");

  if (!transition.count(kStartKey))
    throw ValidationError("transition table lacks \"__start__\"");
  for (const auto& [from, row] : transition) {
    if (from != kStartKey && schema.task_index(from) < 0)
      throw ValidationError("transition source \"" + from +
                            "\" not in schema");
    if (row.empty())
      throw ValidationError("empty transition row for \"" + from + "\"");
    std::vector<double> probs;
    std::set<std::string> seen;
    for (const auto& [to, p] : row) {
      if (schema.task_index(to) < 0)
        throw ValidationError("transition target \"" + to +
                              "\" not in schema");
      if (!seen.insert(to).second)
        throw ValidationError("duplicate transition target \"" + to + "\"");
      probs.push_back(p);
    }
    check_distribution(probs, "transition row \"" + from + "\"");
  }

  // Every task reachable through transitions needs its own outgoing row and
  // emission patterns.
  std::set<std::string> reachable;
  std::vector<std::string> frontier{kStartKey};
  while (!frontier.empty()) {
    std::string from = frontier.back();
    frontier.pop_back();
    auto it = transition.find(from);
    if (it == transition.end())
      throw ValidationError("task \"" + from +
                            "\" is reachable but has no transition row");
    for (const auto& [to, p] : it->second) {
      if (p > 0.0 && reachable.insert(to).second) frontier.push_back(to);
    }
  }
  for (const auto& task : reachable) {
    auto it = emission.find(task);
    if (it == emission.end() || it->second.empty())
      throw ValidationError("task \"" + task + "\" has no emission patterns");
    std::vector<double> probs;
    for (const auto& pat : it->second) {
      probs.push_back(pat.prob);
      for (const auto& s : pat.slots)
        if (schema.slot_index(s) < 0)
          throw ValidationError("emission slot \"" + s + "\" not in schema");
      for (const auto& t : pat.tiacts)
        if (schema.tiact_index(t) < 0)
          throw ValidationError("emission tiact \"" + t + "\" not in schema");
      for (const auto& f : pat.frames)
        if (schema.frame_index(f) < 0)
          throw ValidationError("emission frame \"" + f + "\" not in schema");
    }
    check_distribution(probs, "emission of \"" + task + "\"");
  }
}

GeneratorConfig load_generator_config(const std::string& json_text,
                                      const std::string& base_dir) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ValidationError("malformed generator config");
  if (!j.contains("format") || j["format"] != kGenFormat)
    throw ValidationError("not a dialseg generator config");
  if (j.at("version").get<int>() != kGenVersion)
    throw ValidationError("unsupported generator config version");

  GeneratorConfig cfg;
  if (j.contains("schema")) {
    cfg.schema = load_schema(j["schema"].dump());
  } else if (j.contains("schema_file")) {
    auto rel = j["schema_file"].get<std::string>();
    std::filesystem::path p =
        base_dir.empty() ? std::filesystem::path(rel)
                         : std::filesystem::path(base_dir) / rel;
    cfg.schema = read_schema_file(p.string());
  } else {
    throw ValidationError("generator config needs \"schema\" or \"schema_file\"");
  }

  for (const auto& [from, row] : j.at("transition").items()) {
    std::vector<std::pair<std::string, double>> entries;
    for (const auto& [to, p] : row.items())
      entries.emplace_back(to, p.get<double>());
    cfg.transition[from] = std::move(entries);
  }
  for (const auto& [task, patterns] : j.at("emission").items()) {
    std::vector<EmissionPattern> pats;
    for (const auto& jp : patterns) {
      EmissionPattern pat;
      pat.prob = jp.value("p", 1.0);
      if (jp.contains("acts"))
        pat.acts = jp["acts"].get<std::vector<std::string>>();
      if (jp.contains("slots"))
        pat.slots = jp["slots"].get<std::vector<std::string>>();
      if (jp.contains("tiacts"))
        pat.tiacts = jp["tiacts"].get<std::vector<std::string>>();
      if (jp.contains("frames"))
        pat.frames = jp["frames"].get<std::vector<std::string>>();
      pats.push_back(std::move(pat));
    }
    cfg.emission[task] = std::move(pats);
  }
  if (j.contains("confidence")) {
    const auto& jc = j["confidence"];
    cfg.confidence.high_mean = jc.value("high_mean", 0.9);
    cfg.confidence.high_spread = jc.value("high_spread", 0.05);
    cfg.confidence.low_prob = jc.value("low_prob", 0.1);
  }
  cfg.slot_noise = j.value("slot_noise", 0.0);
  cfg.out_of_task_rate = j.value("out_of_task_rate", 0.0);
  cfg.out_of_task_label = j.value("out_of_task_label", std::string());
  cfg.num_dialogs = j.value("num_dialogs", std::size_t{100});
  cfg.mean_user_turns = j.value("mean_user_turns", 8.0);
  cfg.validate();
  return cfg;
}

GeneratorConfig read_generator_config_file(const std::string& path) {
  auto dir = std::filesystem::path(path).parent_path().string();
  return load_generator_config(read_text_file(path), dir);
}

Corpus generate_corpus(const GeneratorConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Corpus corpus;
  corpus.schema = cfg.schema;
  Rng rng(seed);
  DialogSampler sampler(cfg, rng);
  corpus.dialogs.reserve(cfg.num_dialogs);
  for (std::size_t i = 0; i < cfg.num_dialogs; ++i)
    corpus.dialogs.push_back(sampler.next(i));
  corpus.validate();
  return corpus;
}

namespace {

/// Persistent part of the exact-enumeration state; tiact codes are per-turn
/// and belong to the context, not the state.
struct ChainState {
  std::vector<TernaryCode> slot_codes;
  std::vector<TernaryCode> frame_codes;
  std::vector<int> history;
  int chain = -1;  // -1 = dialog start

  std::string key() const {
    std::string k;
    k.reserve(slot_codes.size() + frame_codes.size() + history.size() * 3 + 4);
    for (auto c : slot_codes) k.push_back(static_cast<char>('0' + static_cast<int>(c)));
    k.push_back('|');
    for (auto c : frame_codes) k.push_back(static_cast<char>('0' + static_cast<int>(c)));
    k.push_back('|');
    for (int h : history) {
      k += std::to_string(h);
      k.push_back(',');
    }
    k += std::to_string(chain);
    return k;
  }
};

AnyModel oracle_shell(const GeneratorConfig& cfg, std::size_t window,
                      FeatureSet fs) {
  AnyModel model;
  model.layout = make_layout(cfg.schema, window, fs);
  model.threshold = cfg.schema.threshold;
  return model;
}

AnyModel oracle_monte_carlo(const GeneratorConfig& cfg, std::size_t window,
                            FeatureSet fs, const OracleOptions& options) {
  AnyModel model = oracle_shell(cfg, window, fs);
  const TaskSchema& schema = cfg.schema;
  const std::size_t c = schema.tasks.size();

  std::unordered_map<std::string, std::vector<double>> counts;
  std::vector<double> marginal(c, 0.0);

  Rng rng(options.seed);
  DialogSampler sampler(cfg, rng);
  for (std::size_t i = 0; i < options.sample_dialogs; ++i) {
    Dialog d = sampler.next(i);
    UserRegister reg = initial_register(schema);
    TaskHistory history = TaskHistory::empty(window);
    for (const auto& turn : d.turns) {
      if (turn.speaker != Speaker::User) continue;
      reg = update_register(reg, turn.observation, schema.threshold, schema);
      Encoded enc = encode(reg, history, model.layout);
      int label = schema.task_index(turn.task);
      auto& row = counts[bits_key(enc.bits)];
      if (row.empty()) row.assign(c, 0.0);
      row[static_cast<std::size_t>(label)] += 1.0;
      marginal[static_cast<std::size_t>(label)] += 1.0;
      history.push(label);
    }
  }

  TableModel table;
  table.table = std::move(counts);
  table.fallback = std::move(marginal);
  model.impl = std::move(table);
  return model;
}

AnyModel oracle_exact(const GeneratorConfig& cfg, std::size_t window,
                      FeatureSet fs, const OracleOptions& options) {
  if (cfg.slot_noise > 0.0 || cfg.confidence.low_prob > 0.0 ||
      cfg.confidence.high_mean - cfg.confidence.high_spread <
          cfg.schema.threshold)
    throw ValidationError(
        "exact oracle requires noise-free deterministic codes; "
        "use Monte-Carlo mode");

  AnyModel model = oracle_shell(cfg, window, fs);
  const TaskSchema& schema = cfg.schema;
  const std::size_t c = schema.tasks.size();
  const double continue_prob =
      cfg.mean_user_turns <= 1.0 ? 0.0 : 1.0 - 1.0 / cfg.mean_user_turns;

  std::unordered_map<std::string, std::vector<double>> table_mass;
  std::vector<double> marginal(c, 0.0);

  ChainState start;
  start.slot_codes.assign(schema.slots.size(), TernaryCode::Unknown);
  start.frame_codes.assign(schema.frames.size(), TernaryCode::Unknown);
  start.history.assign(window, -1);

  std::unordered_map<std::string, std::pair<ChainState, double>> current;
  current.emplace(start.key(), std::make_pair(start, 1.0));

  const int oot_index = cfg.out_of_task_rate > 0.0
                            ? schema.task_index(cfg.out_of_task_label)
                            : -1;

  double alive = 1.0;
  while (alive > 1e-9) {
    std::unordered_map<std::string, std::pair<ChainState, double>> next;
    auto flow = [&](const ChainState& s, double mass) {
      if (mass <= 0.0) return;
      auto key = s.key();
      auto it = next.find(key);
      if (it == next.end())
        next.emplace(key, std::make_pair(s, mass));
      else
        it->second.second += mass;
    };

    for (const auto& [_, entry] : current) {
      const ChainState& s = entry.first;
      double mass = entry.second;
      const std::string from =
          s.chain < 0 ? kStartKey
                      : schema.tasks[static_cast<std::size_t>(s.chain)];

      // branch: the turn is replaced by an out-of-task interruption
      if (oot_index >= 0) {
        ChainState oot = s;
        // empty observation: codes unchanged, per-turn acts all unknown
        UserRegister reg;
        reg.slot_codes = oot.slot_codes;
        reg.frame_codes = oot.frame_codes;
        TaskHistory h;
        h.window = oot.history;
        Encoded enc = encode(reg, h, model.layout);
        double m = mass * cfg.out_of_task_rate;
        auto& row = table_mass[bits_key(enc.bits)];
        if (row.empty()) row.assign(c, 0.0);
        row[static_cast<std::size_t>(oot_index)] += m;
        marginal[static_cast<std::size_t>(oot_index)] += m;
        oot.history.erase(oot.history.begin());
        oot.history.push_back(oot_index);
        flow(oot, m * continue_prob);
      }

      double in_task = mass * (1.0 - cfg.out_of_task_rate);
      for (const auto& [task, tp] : cfg.transition.at(from)) {
        if (tp <= 0.0) continue;
        int label = schema.task_index(task);
        for (const auto& pat : cfg.emission.at(task)) {
          if (pat.prob <= 0.0) continue;
          double m = in_task * tp * pat.prob;
          ChainState ns = s;
          for (const auto& slot : pat.slots)
            ns.slot_codes[static_cast<std::size_t>(schema.slot_index(slot))] =
                TernaryCode::High;
          for (const auto& frame : pat.frames)
            ns.frame_codes[static_cast<std::size_t>(
                schema.frame_index(frame))] = TernaryCode::High;

          UserRegister reg;
          reg.slot_codes = ns.slot_codes;
          reg.frame_codes = ns.frame_codes;
          for (const auto& ti : pat.tiacts)
            reg.tiact_codes[static_cast<std::size_t>(
                schema.tiact_index(ti))] = TernaryCode::High;
          TaskHistory h;
          h.window = ns.history;
          Encoded enc = encode(reg, h, model.layout);
          auto& row = table_mass[bits_key(enc.bits)];
          if (row.empty()) row.assign(c, 0.0);
          row[static_cast<std::size_t>(label)] += m;
          marginal[static_cast<std::size_t>(label)] += m;

          ns.history.erase(ns.history.begin());
          ns.history.push_back(label);
          ns.chain = label;
          flow(ns, m * continue_prob);
        }
      }
    }

    if (next.size() > options.max_states)
      throw ValidationError(
          "state space too large for exact enumeration; use Monte-Carlo mode");
    current = std::move(next);
    alive *= continue_prob;
    if (current.empty()) break;
  }

  TableModel table;
  table.table = std::move(table_mass);
  table.fallback = std::move(marginal);
  model.impl = std::move(table);
  return model;
}

}  // namespace

AnyModel bayes_oracle(const GeneratorConfig& cfg, std::size_t window,
                      FeatureSet fs, const OracleOptions& options) {
  cfg.validate();
  return options.monte_carlo ? oracle_monte_carlo(cfg, window, fs, options)
                             : oracle_exact(cfg, window, fs, options);
}

}  // namespace dialseg
