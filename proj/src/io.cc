#include "gamx/io.h"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "gamx/errors.h"

namespace gamx {
namespace {

using nlohmann::json;

[[noreturn]] void Malformed(const std::string& what) { Fail(ErrorKind::kParse, what); }

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) Malformed(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Malformed(where + ": missing field '" + key + "'");
  return *it;
}

const json& ArrayField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_array()) Malformed(where + ": field '" + key + "' must be an array");
  return v;
}

Rational ToRational(const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? Rational(Integer(std::to_string(v.get<std::uint64_t>())))
                                  : Rational(Integer(std::to_string(v.get<std::int64_t>())));
  }
  if (v.is_string()) {
    try {
      return ParseRational(v.get<std::string>());
    } catch (const Error& e) {
      Malformed(where + ": " + e.what());
    }
  }
  if (v.is_number_float()) Malformed(where + ": floating point numbers are not accepted; write \"p/q\"");
  Malformed(where + ": expected a rational");
}

Integer ToInteger(const json& v, const std::string& where) {
  Rational r = ToRational(v, where);
  if (!IsInteger(r)) Malformed(where + ": expected an integer");
  return r.get_num();
}

std::vector<Rational> ToRationals(const json& v, const std::string& where) {
  if (!v.is_array()) Malformed(where + ": expected an array");
  std::vector<Rational> out;
  out.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out.push_back(ToRational(v[j], where + "[" + std::to_string(j) + "]"));
  return out;
}

json FromRational(const Rational& r) {
  if (IsInteger(r) && r.get_num().fits_slong_p()) return r.get_num().get_si();
  return ToString(r);
}

json FromRationals(const std::vector<Rational>& v) {
  json out = json::array();
  for (const Rational& r : v) out.push_back(FromRational(r));
  return out;
}

int ParseTreeNode(const json& node, DecisionTree& tree, const std::string& where, int depth) {
  if (depth > 10000) Malformed(where + ": tree too deep");
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (!node.is_object()) Malformed(where + ": tree node must be an object");
  if (node.contains("leaf")) {
    tree.nodes[index].is_leaf = true;
    tree.nodes[index].value = ToRational(node["leaf"], where + ".leaf");
    return index;
  }
  TreeNode parsed;
  parsed.is_leaf = false;
  const json& test = Field(node, "test", where);
  if (test == ">=") {
    parsed.test = TreeNode::Test::kGreaterEqual;
  } else if (test == "<") {
    parsed.test = TreeNode::Test::kLess;
  } else {
    Malformed(where + ": tree test must be \">=\" or \"<\"");
  }
  parsed.threshold = ToRational(Field(node, "threshold", where), where + ".threshold");
  parsed.if_true = ParseTreeNode(Field(node, "yes", where), tree, where + ".yes", depth + 1);
  parsed.if_false = ParseTreeNode(Field(node, "no", where), tree, where + ".no", depth + 1);
  tree.nodes[index] = std::move(parsed);
  return index;
}

json TreeNodeJson(const DecisionTree& tree, int index) {
  const TreeNode& node = tree.nodes[index];
  if (node.is_leaf) return {{"leaf", FromRational(node.value)}};
  return {{"test", node.test == TreeNode::Test::kGreaterEqual ? ">=" : "<"},
          {"threshold", FromRational(node.threshold)},
          {"yes", TreeNodeJson(tree, node.if_true)},
          {"no", TreeNodeJson(tree, node.if_false)}};
}

Shape ParseShape(const json& s, const std::string& where) {
  const json& kind = Field(s, "kind", where);
  if (kind == "spline") {
    SplineShape spline;
    spline.knots = ToRationals(Field(s, "knots", where), where + ".knots");
    const json& polys = ArrayField(s, "polys", where);
    for (std::size_t j = 0; j < polys.size(); ++j) {
      const std::string w = where + ".polys[" + std::to_string(j) + "]";
      std::vector<Rational> coeffs = ToRationals(polys[j], w);
      if (coeffs.empty() || coeffs.size() > 4) Malformed(w + ": expected 1 to 4 coefficients, highest degree first");
      spline.polys.push_back(Polynomial::FromDescending(coeffs));
    }
    return spline;
  }
  if (kind == "mlp") {
    MlpShape mlp;
    const json& layers = ArrayField(s, "layers", where);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::string w = where + ".layers[" + std::to_string(l) + "]";
      MlpLayer layer;
      const json& weights = ArrayField(layers[l], "weights", w);
      for (std::size_t r = 0; r < weights.size(); ++r) {
        layer.weights.push_back(ToRationals(weights[r], w + ".weights[" + std::to_string(r) + "]"));
      }
      layer.bias = ToRationals(Field(layers[l], "bias", w), w + ".bias");
      mlp.layers.push_back(std::move(layer));
    }
    return mlp;
  }
  if (kind == "tree_ensemble") {
    TreeEnsembleShape ensemble;
    const json& trees = ArrayField(s, "trees", where);
    for (std::size_t t = 0; t < trees.size(); ++t) {
      DecisionTree tree;
      ParseTreeNode(trees[t], tree, where + ".trees[" + std::to_string(t) + "]", 0);
      ensemble.trees.push_back(std::move(tree));
    }
    if (s.contains("weights")) {
      ensemble.tree_weights = ToRationals(s["weights"], where + ".weights");
    } else {
      ensemble.tree_weights.assign(ensemble.trees.size(), Rational(1));
    }
    ensemble.tree_bias = s.contains("bias") ? ToRational(s["bias"], where + ".bias") : Rational(0);
    return ensemble;
  }
  Malformed(where + ": unknown shape kind");
}

json ShapeJson(const Shape& shape) {
  if (const auto* s = std::get_if<SplineShape>(&shape)) {
    json polys = json::array();
    for (const Polynomial& p : s->polys) polys.push_back(FromRationals(p.Descending(4)));
    return {{"kind", "spline"}, {"knots", FromRationals(s->knots)}, {"polys", polys}};
  }
  if (const auto* m = std::get_if<MlpShape>(&shape)) {
    json layers = json::array();
    for (const MlpLayer& layer : m->layers) {
      json weights = json::array();
      for (const auto& row : layer.weights) weights.push_back(FromRationals(row));
      layers.push_back({{"weights", weights}, {"bias", FromRationals(layer.bias)}});
    }
    return {{"kind", "mlp"}, {"layers", layers}};
  }
  const auto& e = std::get<TreeEnsembleShape>(shape);
  json trees = json::array();
  for (const DecisionTree& t : e.trees) trees.push_back(TreeNodeJson(t, 0));
  return {{"kind", "tree_ensemble"},
          {"trees", trees},
          {"weights", FromRationals(e.tree_weights)},
          {"bias", FromRational(e.tree_bias)}};
}

FeatureDomain ParseDomain(const json& d, const std::string& where) {
  const json& kind = Field(d, "kind", where);
  if (kind == "enumerable") {
    Enumerable e{ToRationals(Field(d, "values", where), where + ".values")};
    std::sort(e.values.begin(), e.values.end());
    e.values.erase(std::unique(e.values.begin(), e.values.end()), e.values.end());
    return e;
  }
  if (kind == "int_range") {
    return IntegerRange{ToInteger(Field(d, "lo", where), where + ".lo"),
                        ToInteger(Field(d, "hi", where), where + ".hi")};
  }
  if (kind == "real_interval") {
    return RealInterval{ToRational(Field(d, "lo", where), where + ".lo"),
                        ToRational(Field(d, "hi", where), where + ".hi")};
  }
  Malformed(where + ": unknown domain kind");
}

json DomainJson(const FeatureDomain& domain) {
  if (const auto* e = std::get_if<Enumerable>(&domain)) {
    return {{"kind", "enumerable"}, {"values", FromRationals(e->values)}};
  }
  if (const auto* r = std::get_if<IntegerRange>(&domain)) {
    return {{"kind", "int_range"}, {"lo", FromRational(Rational(r->lo))}, {"hi", FromRational(Rational(r->hi))}};
  }
  const auto& r = std::get<RealInterval>(domain);
  return {{"kind", "real_interval"}, {"lo", FromRational(r.lo)}, {"hi", FromRational(r.hi)}};
}

json Parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    Malformed(std::string(what) + ": " + e.what());
  }
}

}  // namespace

GamModel LoadModel(std::string_view text) {
  const json doc = Parse(text, "model");
  const json& task_field = Field(doc, "task", "model");
  Task task;
  if (task_field == "regression") {
    task = Task::kRegression;
  } else if (task_field == "classification") {
    task = Task::kClassification;
  } else {
    Malformed("model: task must be \"regression\" or \"classification\"");
  }
  Rational beta0 = ToRational(Field(doc, "beta0", "model"), "model.beta0");
  const json& comps = ArrayField(doc, "components", "model");
  const json& doms = ArrayField(doc, "domains", "model");

  const std::size_t k = comps.size();
  std::vector<std::optional<Component>> slots(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::string where = "components[" + std::to_string(j) + "]";
    std::size_t feature = j;
    if (comps[j].is_object() && comps[j].contains("feature")) {
      Integer f = ToInteger(comps[j]["feature"], where + ".feature");
      if (f < 1 || f > static_cast<long>(k)) {
        Fail(ErrorKind::kValidation, where + ": feature index " + ToString(f) + " outside 1.." + std::to_string(k));
      }
      feature = f.get_ui() - 1;
    }
    if (slots[feature]) Fail(ErrorKind::kValidation, where + ": duplicate feature index " + std::to_string(feature + 1));
    slots[feature] = Component{ToRational(Field(comps[j], "beta", where), where + ".beta"),
                               ParseShape(Field(comps[j], "shape", where), where + ".shape")};
  }
  std::vector<Component> components;
  for (auto& c : slots) components.push_back(std::move(*c));
  std::vector<FeatureDomain> domains;
  for (std::size_t j = 0; j < doms.size(); ++j) domains.push_back(ParseDomain(doms[j], "domains[" + std::to_string(j) + "]"));
  return GamModel(task, std::move(beta0), std::move(components), std::move(domains));
}

std::string SerializeModel(const GamModel& model) {
  json comps = json::array();
  for (std::size_t i = 0; i < model.num_features(); ++i) {
    comps.push_back({{"beta", FromRational(model.component(i).beta)},
                     {"feature", i + 1},
                     {"shape", ShapeJson(model.component(i).shape)}});
  }
  json doms = json::array();
  for (const FeatureDomain& d : model.domains()) doms.push_back(DomainJson(d));
  json doc = {{"task", model.task() == Task::kRegression ? "regression" : "classification"},
              {"beta0", FromRational(model.beta0())},
              {"components", comps},
              {"domains", doms}};
  return doc.dump(2) + "\n";
}

Instance LoadInstance(std::string_view text) {
  const json doc = Parse(text, "instance");
  return ToRationals(Field(doc, "values", "instance"), "instance.values");
}

std::string SerializeInstance(const Instance& x) { return json{{"values", FromRationals(x)}}.dump() + "\n"; }

ProductDistribution LoadDistribution(std::string_view text) {
  const json doc = Parse(text, "distribution");
  const json& features = ArrayField(doc, "features", "distribution");
  ProductDistribution dist;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::string where = "distribution.features[" + std::to_string(i) + "]";
    const json& kind = Field(features[i], "kind", where);
    if (kind == "uniform") {
      dist.emplace_back(UniformDist{});
    } else if (kind == "categorical") {
      dist.emplace_back(CategoricalDist{ToRationals(Field(features[i], "probs", where), where + ".probs")});
    } else if (kind == "density") {
      PiecewiseFunction pw;
      pw.breakpoints = ToRationals(Field(features[i], "breakpoints", where), where + ".breakpoints");
      const json& pieces = ArrayField(features[i], "pieces", where);
      for (std::size_t j = 0; j < pieces.size(); ++j) {
        std::vector<Rational> c = ToRationals(pieces[j], where + ".pieces[" + std::to_string(j) + "]");
        if (c.empty() || c.size() > 4) Malformed(where + ": density pieces need 1 to 4 coefficients");
        pw.pieces.push_back(Polynomial::FromDescending(c));
      }
      dist.emplace_back(DensityDist{std::move(pw)});
    } else {
      Malformed(where + ": unknown distribution kind");
    }
  }
  return dist;
}

std::string SerializeDistribution(const ProductDistribution& dist) {
  json features = json::array();
  for (const FeatureDistribution& d : dist) {
    if (std::holds_alternative<UniformDist>(d)) {
      features.push_back({{"kind", "uniform"}});
    } else if (const auto* c = std::get_if<CategoricalDist>(&d)) {
      features.push_back({{"kind", "categorical"}, {"probs", FromRationals(c->probs)}});
    } else {
      const auto& pw = std::get<DensityDist>(d).density;
      json pieces = json::array();
      for (const Polynomial& p : pw.pieces) pieces.push_back(FromRationals(p.Descending(4)));
      features.push_back({{"kind", "density"}, {"breakpoints", FromRationals(pw.breakpoints)}, {"pieces", pieces}});
    }
  }
  return json{{"features", features}}.dump(2) + "\n";
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kParse, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace gamx
