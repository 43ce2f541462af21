#include "dialseg/model_io.hpp"

#include <cmath>

#include <json.hpp>

#include "dialseg/corpus.hpp"
#include "dialseg/error.hpp"

namespace dialseg {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kModelMagic = "dialseg-model";
constexpr int kModelVersion = 1;

json layout_json(const FeatureLayout& l) {
  json j;
  j["tasks"] = l.tasks;
  j["slots"] = l.slots;
  j["frames"] = l.frames;
  j["tiacts"] = json::array({l.tiacts[0], l.tiacts[1], l.tiacts[2]});
  j["features"] = to_string(l.feature_set);
  j["window"] = l.window;
  return j;
}

FeatureLayout layout_from_json(const json& j) {
  TaskSchema schema;
  schema.name = "model";
  schema.tasks = j.at("tasks").get<std::vector<std::string>>();
  schema.slots = j.at("slots").get<std::vector<std::string>>();
  schema.frames = j.at("frames").get<std::vector<std::string>>();
  auto tiacts = j.at("tiacts").get<std::vector<std::string>>();
  if (tiacts.size() != 3)
    throw ValidationError("model layout lists " +
                          std::to_string(tiacts.size()) +
                          " task-independent acts, expected 3");
  schema.tiacts = {tiacts[0], tiacts[1], tiacts[2]};
  return make_layout(schema, j.at("window").get<std::size_t>(),
                     feature_set_from_string(j.at("features").get<std::string>()));
}

json tree_json(const TreeModel& m) {
  json nodes = json::array();
  for (const auto& n : m.nodes) {
    json jn;
    jn["attr"] = n.attr;
    jn["counts"] = n.class_counts;
    jn["children"] = n.children;
    nodes.push_back(std::move(jn));
  }
  json j;
  j["nodes"] = std::move(nodes);
  return j;
}

TreeModel tree_from_json(const json& j, const FeatureLayout& layout) {
  TreeModel m;
  for (const auto& jn : j.at("nodes")) {
    TreeModel::Node n;
    n.attr = jn.at("attr").get<int>();
    n.class_counts = jn.at("counts").get<std::vector<std::size_t>>();
    n.children = jn.at("children").get<std::vector<int>>();
    m.nodes.push_back(std::move(n));
  }
  for (const auto& g : layout.groups) m.arities.push_back(g.arity);
  m.num_classes = layout.num_classes();
  if (m.nodes.empty()) throw ValidationError("tree model has no nodes");
  return m;
}

json frb_json(const FrbModel& m) {
  json classes = json::array();
  for (const auto& c : m.classes) {
    json jc;
    json protos = json::array();
    for (const auto& p : c.prototypes) {
      json jp;
      jp["values"] = p.values;
      jp["potential"] = p.potential;
      jp["support"] = p.support;
      protos.push_back(std::move(jp));
    }
    jc["prototypes"] = std::move(protos);
    jc["accum"] = c.accum;
    jc["count"] = c.count;
    classes.push_back(std::move(jc));
  }
  json j;
  j["dimension"] = m.dimension;
  j["classes"] = std::move(classes);
  return j;
}

FrbModel frb_from_json(const json& j) {
  FrbModel m;
  m.dimension = j.at("dimension").get<std::size_t>();
  for (const auto& jc : j.at("classes")) {
    FrbModel::ClassState c;
    for (const auto& jp : jc.at("prototypes")) {
      FrbModel::Prototype p;
      p.values = jp.at("values").get<std::vector<double>>();
      p.potential = jp.at("potential").get<double>();
      p.support = jp.at("support").get<std::size_t>();
      double n2 = 0.0;
      for (double v : p.values) n2 += v * v;
      p.normalized = p.values;
      if (n2 > 0.0)
        for (auto& v : p.normalized) v /= std::sqrt(n2);
      c.prototypes.push_back(std::move(p));
    }
    c.accum = jc.at("accum").get<std::vector<double>>();
    c.count = jc.at("count").get<std::size_t>();
    m.classes.push_back(std::move(c));
  }
  return m;
}

json mlp_json(const MlpModel& m) {
  json j;
  j["input_dim"] = m.input_dim;
  j["hidden"] = m.hidden;
  j["outputs"] = m.outputs;
  j["w1"] = m.w1;
  j["b1"] = m.b1;
  j["w2"] = m.w2;
  j["b2"] = m.b2;
  return j;
}

MlpModel mlp_from_json(const json& j) {
  MlpModel m;
  m.input_dim = j.at("input_dim").get<std::size_t>();
  m.hidden = j.at("hidden").get<std::size_t>();
  m.outputs = j.at("outputs").get<std::size_t>();
  m.w1 = j.at("w1").get<std::vector<double>>();
  m.b1 = j.at("b1").get<std::vector<double>>();
  m.w2 = j.at("w2").get<std::vector<double>>();
  m.b2 = j.at("b2").get<std::vector<double>>();
  if (m.w1.size() != m.hidden * m.input_dim || m.b1.size() != m.hidden ||
      m.w2.size() != m.outputs * m.hidden || m.b2.size() != m.outputs)
    throw ValidationError("model weight shapes are inconsistent");
  return m;
}

}  // namespace

ClassifierKind AnyModel::kind() const {
  if (std::holds_alternative<TreeModel>(impl)) return ClassifierKind::Tree;
  if (std::holds_alternative<FrbModel>(impl)) return ClassifierKind::Frb;
  if (std::holds_alternative<MlpModel>(impl)) return ClassifierKind::Mlp;
  return ClassifierKind::Table;
}

TaskDistribution predict_scores(const AnyModel& model, const Encoded& input) {
  if (input.bits.size() != model.layout.dimension)
    throw ValidationError("encoded input does not match the model layout");
  return std::visit(
      [&](const auto& m) -> TaskDistribution {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TreeModel>)
          return tree_predict(m, input);
        else if constexpr (std::is_same_v<T, FrbModel>)
          return frb_predict(m, input);
        else if constexpr (std::is_same_v<T, MlpModel>)
          return mlp_predict(m, input);
        else
          return table_predict(m, input);
      },
      model.impl);
}

std::string save_model(const AnyModel& model) {
  json j;
  j["magic"] = kModelMagic;
  j["version"] = kModelVersion;
  j["kind"] = to_string(model.kind());
  j["layout"] = layout_json(model.layout);
  j["threshold"] = model.threshold;
  switch (model.kind()) {
    case ClassifierKind::Tree:
      j["params"] = tree_json(std::get<TreeModel>(model.impl));
      break;
    case ClassifierKind::Frb:
      j["params"] = frb_json(std::get<FrbModel>(model.impl));
      break;
    case ClassifierKind::Mlp:
      j["params"] = mlp_json(std::get<MlpModel>(model.impl));
      break;
    case ClassifierKind::Table:
      throw ValidationError("table models are in-memory only");
  }
  return j.dump() + "\n";
}

AnyModel load_model(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ValidationError("malformed model file");
  if (!j.contains("magic") || j["magic"] != kModelMagic)
    throw ValidationError("not a dialseg model file");
  if (j.at("version").get<int>() != kModelVersion)
    throw ValidationError("unsupported model format version");

  AnyModel model;
  model.layout = layout_from_json(j.at("layout"));
  model.threshold = j.at("threshold").get<double>();
  auto kind = classifier_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case ClassifierKind::Tree:
      model.impl = tree_from_json(j.at("params"), model.layout);
      break;
    case ClassifierKind::Frb:
      model.impl = frb_from_json(j.at("params"));
      break;
    case ClassifierKind::Mlp:
      model.impl = mlp_from_json(j.at("params"));
      break;
    case ClassifierKind::Table:
      throw ValidationError("table models cannot be loaded from files");
  }
  return model;
}

AnyModel read_model_file(const std::string& path) {
  return load_model(read_text_file(path));
}

void write_model_file(const AnyModel& model, const std::string& path) {
  write_text_file(path, save_model(model));
}

}  // namespace dialseg
