/*
 * Copyright 2026 The rankadapt Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rankadapt/model_io.h"

#include <fstream>

#include "rankadapt/boosting.h"
#include "rankadapt/error.h"
#include "rankadapt/interpolation.h"
#include "rankadapt/linear_ranker.h"

namespace rankadapt {

using nlohmann::json;

namespace {

json tree_to_json(const RegressionTree& tree, std::size_t node) {
  const auto& n = tree.nodes()[node];
  if (n.is_leaf()) return json{{"value", n.value}};
  return json{{"feature_index", n.feature},
              {"threshold", n.threshold},
              {"left", tree_to_json(tree, static_cast<std::size_t>(n.left))},
              {"right", tree_to_json(tree, static_cast<std::size_t>(n.right))}};
}

// Pre-order flattening, so children always follow their parent.
int tree_from_json(const json& doc, std::vector<TreeNode>& nodes) {
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (doc.contains("value")) {
    nodes[index].value = doc.at("value").get<double>();
    return index;
  }
  const int feature = doc.at("feature_index").get<int>();
  if (feature < 0) throw InvalidInput("tree feature_index must be >= 0");
  nodes[index].feature = feature;
  nodes[index].threshold = doc.at("threshold").get<double>();
  const int left = tree_from_json(doc.at("left"), nodes);
  const int right = tree_from_json(doc.at("right"), nodes);
  nodes[index].left = left;
  nodes[index].right = right;
  return index;
}

json sub_model(const ScorerPtr& model, const ModelReferencer& referencer) {
  if (referencer) {
    if (auto path = referencer(*model)) return json(*path);
  }
  return model_to_json(*model, referencer);
}

ScorerPtr load_sub_model(const json& doc, const std::filesystem::path& base) {
  if (doc.is_string()) {
    std::filesystem::path p = doc.get<std::string>();
    return load_model(p.is_absolute() ? p : base / p);
  }
  return model_from_json(doc, base);
}

void check_feature_count(const json& doc, const Scorer& model) {
  const auto declared = doc.at("feature_count").get<std::size_t>();
  if (declared != model.feature_count()) {
    throw InvalidInput("model declares feature_count " +
                       std::to_string(declared) + " but its contents use " +
                       std::to_string(model.feature_count()));
  }
}

}  // namespace

json model_to_json(const Scorer& model, const ModelReferencer& referencer) {
  if (const auto* linear = dynamic_cast<const LinearModel*>(&model)) {
    return json{{"kind", "linear"},
                {"feature_count", linear->feature_count()},
                {"weights", linear->weights()}};
  }
  if (const auto* ens = dynamic_cast<const BoostedEnsemble*>(&model)) {
    json stages = json::array();
    for (const auto& stage : ens->stages()) {
      if (const auto* f = std::get_if<SingleFeatureBasis>(&stage.basis)) {
        stages.push_back({{"type", "feature"},
                          {"feature_index", f->feature_index},
                          {"coefficient", stage.coefficient}});
      } else {
        stages.push_back(
            {{"type", "tree"},
             {"tree", tree_to_json(std::get<RegressionTree>(stage.basis), 0)}});
      }
    }
    return json{{"kind", "ensemble"},
                {"feature_count", ens->feature_count()},
                {"background", sub_model(ens->background(), referencer)},
                {"shrinkage", ens->shrinkage()},
                {"stages", std::move(stages)}};
  }
  if (const auto* interp = dynamic_cast<const InterpolatedModel*>(&model)) {
    json components = json::array();
    for (const auto& c : interp->components()) {
      components.push_back(sub_model(c, referencer));
    }
    return json{{"kind", "interpolated"},
                {"feature_count", interp->feature_count()},
                {"components", std::move(components)},
                {"alphas", interp->alphas()}};
  }
  throw InvalidInput("model type has no serialized form");
}

ScorerPtr model_from_json(const json& doc,
                          const std::filesystem::path& base_dir) {
  try {
    const auto kind = doc.at("kind").get<std::string>();
    ScorerPtr model;
    if (kind == "linear") {
      model = std::make_shared<LinearModel>(
          doc.at("weights").get<std::vector<double>>());
    } else if (kind == "ensemble") {
      auto background = load_sub_model(doc.at("background"), base_dir);
      auto ens = std::make_shared<BoostedEnsemble>(
          background, doc.at("shrinkage").get<double>());
      for (const auto& s : doc.at("stages")) {
        const auto type = s.at("type").get<std::string>();
        if (type == "feature") {
          ens->add_stage(Stage{
              SingleFeatureBasis{s.at("feature_index").get<std::size_t>()},
              s.at("coefficient").get<double>()});
        } else if (type == "tree") {
          std::vector<TreeNode> nodes;
          tree_from_json(s.at("tree"), nodes);
          ens->add_stage(Stage{RegressionTree::from_nodes(
                                   background->feature_count(), std::move(nodes)),
                               1.0});
        } else {
          throw InvalidInput("unknown stage type '" + type + "'");
        }
      }
      model = std::move(ens);
    } else if (kind == "interpolated") {
      std::vector<ScorerPtr> components;
      for (const auto& c : doc.at("components")) {
        components.push_back(load_sub_model(c, base_dir));
      }
      model = std::make_shared<InterpolatedModel>(
          std::move(components), doc.at("alphas").get<std::vector<double>>());
    } else {
      throw InvalidInput("unknown model kind '" + kind + "'");
    }
    check_feature_count(doc, *model);
    return model;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const Scorer& model,
                const ModelReferencer& referencer) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << model_to_json(model, referencer).dump(2) << '\n';
}

ScorerPtr load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  return model_from_json(doc, path.parent_path());
}

}  // namespace rankadapt
