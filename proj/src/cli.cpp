#include "dialseg/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dialseg/error.hpp"
#include "dialseg/evaluator.hpp"
#include "dialseg/report.hpp"
#include "dialseg/synthgen.hpp"

namespace dialseg::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

/// --out flag, or the DIALSEG_OUT environment variable; empty means
/// "print only, write nothing".
std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DIALSEG_OUT")) return env;
  return "";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create directory: " + dir);
}

std::string classifier_display_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Tree: return "Decision tree classifier";
    case ClassifierKind::Frb: return "FRB-classifier";
    case ClassifierKind::Mlp: return "MLP-classifier";
    case ClassifierKind::Table: return "Oracle";
  }
  return "?";
}

struct CommonTrainFlags {
  std::string features = "full";
  std::size_t window = 3;
  std::optional<double> threshold;
  std::string history = "predicted";
  std::uint64_t seed = 1;
  std::size_t min_leaf = 2;
  std::size_t hidden = 32;
  double learning_rate = 0.3;
  double momentum = 0.0;
  std::size_t epochs = 500;
  std::size_t patience = 20;
  double val_fraction = 0.2;

  void add_encoder_flags(CLI::App* cmd) {
    cmd->add_option("--features", features,
                    "feature set: av, da_av, or full")
        ->check(CLI::IsMember({"av", "da_av", "full"}));
    cmd->add_option("--window", window, "task-history window length")
        ->check(CLI::Range(std::size_t{1}, std::size_t{64}));
    cmd->add_option("--threshold", threshold,
                    "confidence threshold (default: the schema's, 0.5)")
        ->check(CLI::Range(0.0, 1.0));
  }
  void add_trainer_flags(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "run seed");
    cmd->add_option("--min-leaf", min_leaf,
                    "tree: minimum samples to keep splitting");
    cmd->add_option("--hidden", hidden, "mlp: hidden layer width");
    cmd->add_option("--lr", learning_rate, "mlp: learning rate");
    cmd->add_option("--momentum", momentum, "mlp: momentum term");
    cmd->add_option("--epochs", epochs, "mlp: maximum training epochs");
    cmd->add_option("--patience", patience,
                    "mlp: epochs without validation improvement before stop");
    cmd->add_option("--val-fraction", val_fraction,
                    "mlp: fraction of samples held out for validation");
  }
  void add_history_flag(CLI::App* cmd) {
    cmd->add_option("--history", history,
                    "history feedback: predicted or gold")
        ->check(CLI::IsMember({"predicted", "gold"}));
  }

  TrainSpec to_spec(ClassifierKind kind) const {
    TrainSpec spec;
    spec.kind = kind;
    spec.feature_set = feature_set_from_string(features);
    spec.window = window;
    spec.threshold = threshold;
    spec.mode = history_mode_from_string(history);
    spec.tree.min_leaf = min_leaf;
    spec.mlp.hidden = hidden;
    spec.mlp.learning_rate = learning_rate;
    spec.mlp.momentum = momentum;
    spec.mlp.max_epochs = epochs;
    spec.mlp.patience = patience;
    spec.mlp.validation_fraction = val_fraction;
    spec.mlp.seed = seed;
    return spec;
  }
};

std::vector<ClassifierKind> parse_model_list(const std::string& model) {
  if (model == "all")
    return {ClassifierKind::Tree, ClassifierKind::Frb, ClassifierKind::Mlp};
  return {classifier_kind_from_string(model)};
}

void write_reports(const std::string& out_dir, const std::string& table_name,
                   const std::string& table,
                   const std::vector<std::pair<std::string, EvalReport>>& reports,
                   const std::string& file_tag) {
  if (out_dir.empty()) return;
  ensure_dir(out_dir);
  write_text_file((fs::path(out_dir) / table_name).string(), table);
  for (const auto& [name, report] : reports) {
    (void)name;
    std::string fname = "report-" + (file_tag == "features"
                                         ? report.config.feature_set
                                         : report.config.classifier) +
                        ".json";
    write_text_file((fs::path(out_dir) / fname).string(),
                    report_json(report));
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"dialseg: turn-by-turn task segmentation of task-oriented "
               "dialogs"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate",
                                 "generate a synthetic corpus from a config");
  std::string gen_config, gen_out;
  std::uint64_t gen_seed = 1;
  std::size_t gen_dialogs = 0;
  gen->add_option("--config", gen_config, "generator config file")
      ->required()
      ->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--dialogs", gen_dialogs,
                  "override the config's number of dialogs");
  gen->add_option("--out", gen_out, "output corpus file")->required();

  // ---- stats ----
  auto* stats_cmd = app.add_subcommand("stats", "corpus statistics");
  std::string stats_corpus, stats_json_path;
  stats_cmd->add_option("--corpus", stats_corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  stats_cmd->add_option("--json", stats_json_path,
                        "also write statistics as JSON to this file");

  // ---- train ----
  auto* train_cmd = app.add_subcommand("train", "train one classifier");
  std::string train_corpus, train_model_name, train_out;
  CommonTrainFlags train_flags;
  train_cmd->add_option("--corpus", train_corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--model", train_model_name,
                        "classifier: tree, frb, or mlp")
      ->required()
      ->check(CLI::IsMember({"tree", "frb", "mlp"}));
  train_flags.add_encoder_flags(train_cmd);
  train_flags.add_trainer_flags(train_cmd);
  train_cmd->add_option("--out", train_out, "output model file")->required();

  // ---- segment ----
  auto* seg = app.add_subcommand("segment",
                                 "segment a corpus with a trained model");
  std::string seg_corpus, seg_model, seg_out, seg_history = "predicted";
  std::optional<double> seg_threshold;
  seg->add_option("--corpus", seg_corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  seg->add_option("--model-file", seg_model, "trained model file")
      ->required()
      ->check(CLI::ExistingFile);
  seg->add_option("--history", seg_history,
                  "history feedback: predicted or gold")
      ->check(CLI::IsMember({"predicted", "gold"}));
  seg->add_option("--threshold", seg_threshold,
                  "confidence threshold (default: the model's)")
      ->check(CLI::Range(0.0, 1.0));
  seg->add_option("--out", seg_out, "output trace file (TSV)")->required();

  // ---- eval ----
  auto* eval_cmd =
      app.add_subcommand("eval", "k-fold cross-validation evaluation");
  std::string eval_corpus, eval_model = "all", eval_out;
  int eval_cv = 5;
  CommonTrainFlags eval_flags;
  eval_cmd->add_option("--corpus", eval_corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--model", eval_model,
                       "classifier: tree, frb, mlp, or all")
      ->check(CLI::IsMember({"tree", "frb", "mlp", "all"}));
  eval_cmd->add_option("--cv", eval_cv, "number of folds")
      ->check(CLI::Range(2, 1000));
  eval_flags.add_encoder_flags(eval_cmd);
  eval_flags.add_history_flag(eval_cmd);
  eval_flags.add_trainer_flags(eval_cmd);
  eval_cmd->add_option("--out", eval_out,
                       "report directory (default: $DIALSEG_OUT, else none)");

  // ---- ablate ----
  auto* abl = app.add_subcommand(
      "ablate", "cross-validate once per feature set, shared folds");
  std::string abl_corpus, abl_model = "tree", abl_out;
  std::vector<std::string> abl_sets{"av", "da_av", "full"};
  int abl_cv = 5;
  CommonTrainFlags abl_flags;
  abl->add_option("--corpus", abl_corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  abl->add_option("--model", abl_model, "classifier: tree, frb, or mlp")
      ->check(CLI::IsMember({"tree", "frb", "mlp"}));
  abl->add_option("--features", abl_sets, "feature sets to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"av", "da_av", "full"}));
  abl->add_option("--cv", abl_cv, "number of folds")->check(CLI::Range(2, 1000));
  abl->add_option("--window", abl_flags.window, "task-history window length");
  abl->add_option("--threshold", abl_flags.threshold,
                  "confidence threshold (default: the schema's, 0.5)")
      ->check(CLI::Range(0.0, 1.0));
  abl_flags.add_history_flag(abl);
  abl_flags.add_trainer_flags(abl);
  abl->add_option("--out", abl_out,
                  "report directory (default: $DIALSEG_OUT, else none)");

  // ---- crosscorpus ----
  auto* cc = app.add_subcommand(
      "crosscorpus", "train on one corpus, evaluate on another");
  std::string cc_train, cc_test, cc_model = "mlp", cc_out;
  CommonTrainFlags cc_flags;
  cc->add_option("--train-corpus", cc_train, "training corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  cc->add_option("--test-corpus", cc_test, "evaluation corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  cc->add_option("--model", cc_model, "classifier: tree, frb, or mlp")
      ->check(CLI::IsMember({"tree", "frb", "mlp"}));
  cc_flags.add_encoder_flags(cc);
  cc_flags.add_history_flag(cc);
  cc_flags.add_trainer_flags(cc);
  cc->add_option("--out", cc_out,
                 "report directory (default: $DIALSEG_OUT, else none)");

  // ---- sweep ----
  auto* sweep = app.add_subcommand(
      "sweep", "mlp topology search: validation MSE per hidden width");
  std::string sweep_corpus, sweep_out;
  std::vector<std::size_t> sweep_widths{2, 4, 8, 16, 32, 64};
  CommonTrainFlags sweep_flags;
  sweep_flags.learning_rate = 0.2;  // search phase convention
  sweep_flags.epochs = 200;
  sweep->add_option("--corpus", sweep_corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--hidden", sweep_widths, "hidden widths to try")
      ->delimiter(',');
  sweep->add_option("--features", sweep_flags.features,
                    "feature set: av, da_av, or full")
      ->check(CLI::IsMember({"av", "da_av", "full"}));
  sweep->add_option("--window", sweep_flags.window,
                    "task-history window length");
  sweep->add_option("--lr", sweep_flags.learning_rate, "learning rate");
  sweep->add_option("--epochs", sweep_flags.epochs, "maximum training epochs");
  sweep->add_option("--patience", sweep_flags.patience,
                    "early-stopping patience");
  sweep->add_option("--val-fraction", sweep_flags.val_fraction,
                    "validation fraction");
  sweep->add_option("--seed", sweep_flags.seed, "run seed");
  sweep->add_option("--out", sweep_out,
                    "report directory (default: $DIALSEG_OUT, else none)");

  try {
    std::vector<const char*> argv;
    argv.push_back("dialseg");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      GeneratorConfig cfg = read_generator_config_file(gen_config);
      if (gen_dialogs > 0) cfg.num_dialogs = gen_dialogs;
      Corpus corpus = generate_corpus(cfg, gen_seed);
      write_corpus_file(corpus, gen_out);
      CorpusStats s = corpus_stats(corpus);
      out << "wrote " << s.num_dialogs << " dialogs (" << s.num_user_turns
          << " user turns) to " << gen_out << "\n";
    } else if (stats_cmd->parsed()) {
      Corpus corpus = read_corpus_file(stats_corpus);
      CorpusStats s = corpus_stats(corpus);
      out << render_stats(s);
      if (!stats_json_path.empty())
        write_text_file(stats_json_path, stats_json(s));
    } else if (train_cmd->parsed()) {
      Corpus corpus = read_corpus_file(train_corpus);
      corpus.validate();
      TrainSpec spec =
          train_flags.to_spec(classifier_kind_from_string(train_model_name));
      std::vector<const Dialog*> dialogs;
      for (const auto& d : corpus.dialogs) dialogs.push_back(&d);
      AnyModel model =
          train_model(corpus.schema, dialogs, spec, train_flags.seed);
      write_model_file(model, train_out);
      out << "trained " << train_model_name << " on " << dialogs.size()
          << " dialogs; model written to " << train_out << "\n";
    } else if (seg->parsed()) {
      Corpus corpus = read_corpus_file(seg_corpus);
      corpus.validate();
      AnyModel model = read_model_file(seg_model);
      double threshold = seg_threshold.value_or(model.threshold);
      auto traces = segment_corpus(
          model, corpus, history_mode_from_string(seg_history), threshold);
      write_text_file(seg_out, render_trace(traces, model.layout));
      std::size_t turns = 0, correct = 0;
      for (const auto& t : traces)
        for (const auto& e : t.entries) {
          ++turns;
          if (e.gold == e.predicted) ++correct;
        }
      out << "segmented " << turns << " user turns; accuracy "
          << (turns ? static_cast<double>(correct) / static_cast<double>(turns)
                    : 0.0)
          << "; trace written to " << seg_out << "\n";
    } else if (eval_cmd->parsed()) {
      Corpus corpus = read_corpus_file(eval_corpus);
      std::vector<std::pair<std::string, EvalReport>> reports;
      for (ClassifierKind kind : parse_model_list(eval_model)) {
        TrainSpec spec = eval_flags.to_spec(kind);
        reports.emplace_back(
            classifier_display_name(kind),
            cross_validate(corpus, spec, eval_cv, eval_flags.seed));
      }
      std::string table = render_metrics_table(reports);
      out << table;
      write_reports(resolve_out_dir(eval_out), "table.txt", table, reports,
                    "");
    } else if (abl->parsed()) {
      Corpus corpus = read_corpus_file(abl_corpus);
      std::vector<FeatureSet> sets;
      for (const auto& s : abl_sets) sets.push_back(feature_set_from_string(s));
      TrainSpec spec =
          abl_flags.to_spec(classifier_kind_from_string(abl_model));
      auto results = ablation_study(corpus, spec, sets, abl_cv, abl_flags.seed);
      std::vector<std::pair<std::string, EvalReport>> reports;
      for (std::size_t i = 0; i < results.size(); ++i)
        reports.emplace_back(abl_sets[i], std::move(results[i]));
      std::string table = render_ablation_table(reports);
      out << table;
      write_reports(resolve_out_dir(abl_out), "ablation.txt", table, reports,
                    "features");
    } else if (cc->parsed()) {
      Corpus train = read_corpus_file(cc_train);
      Corpus test = read_corpus_file(cc_test);
      TrainSpec spec = cc_flags.to_spec(classifier_kind_from_string(cc_model));
      EvalReport report = cross_corpus_eval(train, test, spec, cc_flags.seed);
      std::vector<std::pair<std::string, EvalReport>> reports;
      reports.emplace_back(classifier_display_name(spec.kind),
                           std::move(report));
      std::string table = render_metrics_table(reports);
      out << table;
      write_reports(resolve_out_dir(cc_out), "crosscorpus.txt", table, reports,
                    "");
    } else if (sweep->parsed()) {
      Corpus corpus = read_corpus_file(sweep_corpus);
      corpus.validate();
      FeatureLayout layout =
          make_layout(corpus.schema, sweep_flags.window,
                      feature_set_from_string(sweep_flags.features));
      std::vector<const Dialog*> dialogs;
      for (const auto& d : corpus.dialogs) dialogs.push_back(&d);
      auto samples = build_samples(corpus.schema, dialogs, layout,
                                   corpus.schema.threshold);
      std::string text = "hidden  val_mse     best_epoch  epochs  train_mse\n";
      json rows = json::array();
      for (std::size_t width : sweep_widths) {
        MlpHyperparams hp;
        hp.hidden = width;
        hp.learning_rate = sweep_flags.learning_rate;
        hp.max_epochs = sweep_flags.epochs;
        hp.patience = sweep_flags.patience;
        hp.validation_fraction = sweep_flags.val_fraction;
        hp.seed = sweep_flags.seed;
        auto result = train_mlp(samples, layout.num_classes(), hp);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-7zu %-11.6f %-11zu %-7zu %.6f\n",
                      width, result.best_val_mse, result.best_epoch,
                      result.epochs_run, result.final_train_mse);
        text += buf;
        json row;
        row["hidden"] = width;
        row["val_mse"] = result.best_val_mse;
        row["best_epoch"] = result.best_epoch;
        row["epochs_run"] = result.epochs_run;
        row["train_mse"] = result.final_train_mse;
        rows.push_back(std::move(row));
      }
      out << text;
      std::string out_dir = resolve_out_dir(sweep_out);
      if (!out_dir.empty()) {
        ensure_dir(out_dir);
        write_text_file((fs::path(out_dir) / "sweep.txt").string(), text);
        json j;
        j["format"] = "dialseg-sweep";
        j["version"] = 1;
        j["learning_rate"] = sweep_flags.learning_rate;
        j["seed"] = sweep_flags.seed;
        j["rows"] = std::move(rows);
        write_text_file((fs::path(out_dir) / "sweep.json").string(),
                        j.dump(2) + "\n");
      }
    }
  } catch (const TrainingError& e) {
    err << "training error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace dialseg::cli
