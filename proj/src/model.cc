#include "gamx/model.h"

#include <algorithm>
#include <string>

#include "gamx/errors.h"

namespace gamx {
namespace {

[[noreturn]] void Invalid(const std::string& what) { Fail(ErrorKind::kValidation, what); }

std::string FeatureLabel(std::size_t i) { return "component " + std::to_string(i + 1); }

void ValidateSpline(const SplineShape& s, const FeatureDomain& domain, std::size_t i) {
  if (s.knots.size() < 2) Invalid(FeatureLabel(i) + ": spline needs at least two knots");
  if (s.polys.size() != s.knots.size() - 1) {
    Invalid(FeatureLabel(i) + ": spline has " + std::to_string(s.polys.size()) + " polynomial pieces for " +
            std::to_string(s.knots.size()) + " knots (expected knots - 1)");
  }
  for (std::size_t j = 1; j < s.knots.size(); ++j) {
    if (!(s.knots[j - 1] < s.knots[j])) Invalid(FeatureLabel(i) + ": spline knots must be strictly increasing");
  }
  for (const Polynomial& p : s.polys) {
    if (p.degree() > 3) Invalid(FeatureLabel(i) + ": spline piece degree exceeds 3");
  }
  auto [lo, hi] = Hull(domain);
  if (lo < s.knots.front() || hi > s.knots.back()) {
    Invalid(FeatureLabel(i) + ": spline knot span does not cover the feature domain");
  }
}

void ValidateMlp(const MlpShape& m, std::size_t i) {
  if (m.layers.empty()) Invalid(FeatureLabel(i) + ": MLP has no layers");
  std::size_t width = 1;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const MlpLayer& layer = m.layers[l];
    if (layer.inputs() != width) {
      Invalid(FeatureLabel(i) + ": MLP layer " + std::to_string(l + 1) + " expects " +
              std::to_string(layer.inputs()) + " inputs but receives " + std::to_string(width));
    }
    if (layer.outputs() == 0) Invalid(FeatureLabel(i) + ": MLP layer with zero units");
    for (const auto& row : layer.weights) {
      if (row.size() != layer.outputs()) Invalid(FeatureLabel(i) + ": ragged MLP weight matrix");
    }
    width = layer.outputs();
  }
  if (width != 1) Invalid(FeatureLabel(i) + ": MLP output width must be 1");
}

void ValidateTree(const DecisionTree& tree, std::size_t i) {
  const int n = static_cast<int>(tree.nodes.size());
  if (n == 0) Invalid(FeatureLabel(i) + ": empty decision tree");
  std::vector<int> parents(n, 0);
  for (const TreeNode& node : tree.nodes) {
    if (node.is_leaf) continue;
    for (int child : {node.if_true, node.if_false}) {
      if (child <= 0 || child >= n) Invalid(FeatureLabel(i) + ": tree child index out of range");
      ++parents[child];
    }
  }
  for (int v = 1; v < n; ++v) {
    if (parents[v] != 1) Invalid(FeatureLabel(i) + ": tree node reached by " + std::to_string(parents[v]) + " parents");
  }

  // Walk every root-to-leaf path carrying the interval [lower, upper).
  struct Frame {
    int node;
    std::optional<Rational> lower;
    std::optional<Rational> upper;
    int depth;
  };
  std::vector<Frame> stack{{0, std::nullopt, std::nullopt, 0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.depth > n) Invalid(FeatureLabel(i) + ": cycle in decision tree");
    if (f.lower && f.upper && !(*f.lower < *f.upper)) {
      Invalid(FeatureLabel(i) + ": decision tree path with an empty interval");
    }
    const TreeNode& node = tree.nodes[f.node];
    if (node.is_leaf) continue;
    auto raise_lower = [&](Frame g) {
      if (!g.lower || *g.lower < node.threshold) g.lower = node.threshold;
      return g;
    };
    auto cut_upper = [&](Frame g) {
      if (!g.upper || node.threshold < *g.upper) g.upper = node.threshold;
      return g;
    };
    Frame base{0, f.lower, f.upper, f.depth + 1};
    Frame ge = raise_lower(base);
    Frame lt = cut_upper(base);
    if (node.test == TreeNode::Test::kGreaterEqual) {
      ge.node = node.if_true;
      lt.node = node.if_false;
    } else {
      lt.node = node.if_true;
      ge.node = node.if_false;
    }
    stack.push_back(std::move(ge));
    stack.push_back(std::move(lt));
  }
}

void ValidateDomain(const FeatureDomain& d, std::size_t i) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Enumerable>) {
          if (v.values.empty()) Invalid("domain " + std::to_string(i + 1) + ": enumerable domain is empty");
          for (std::size_t j = 1; j < v.values.size(); ++j) {
            if (!(v.values[j - 1] < v.values[j])) {
              Invalid("domain " + std::to_string(i + 1) + ": enumerable values must be sorted and distinct");
            }
          }
        } else {
          if (v.lo > v.hi) Invalid("domain " + std::to_string(i + 1) + ": lo > hi");
        }
      },
      d);
}

}  // namespace

Rational DecisionTree::Evaluate(const Rational& x) const {
  int v = 0;
  for (std::size_t steps = 0; steps <= nodes.size(); ++steps) {
    const TreeNode& node = nodes[v];
    if (node.is_leaf) return node.value;
    bool holds = node.test == TreeNode::Test::kGreaterEqual ? x >= node.threshold : x < node.threshold;
    v = holds ? node.if_true : node.if_false;
  }
  Fail(ErrorKind::kValidation, "cycle in decision tree");
}

bool Contains(const FeatureDomain& domain, const Rational& v) {
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Enumerable>) {
          return std::binary_search(d.values.begin(), d.values.end(), v);
        } else if constexpr (std::is_same_v<T, IntegerRange>) {
          return IsInteger(v) && v.get_num() >= d.lo && v.get_num() <= d.hi;
        } else {
          return v >= d.lo && v <= d.hi;
        }
      },
      domain);
}

std::pair<Rational, Rational> Hull(const FeatureDomain& domain) {
  return std::visit(
      [](const auto& d) -> std::pair<Rational, Rational> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Enumerable>) {
          return {d.values.front(), d.values.back()};
        } else {
          return {Rational(d.lo), Rational(d.hi)};
        }
      },
      domain);
}

bool IsEnumerable(const FeatureDomain& domain) { return std::holds_alternative<Enumerable>(domain); }

std::optional<Integer> DomainSize(const FeatureDomain& domain) {
  if (const auto* e = std::get_if<Enumerable>(&domain)) return Integer(static_cast<unsigned long>(e->values.size()));
  if (const auto* r = std::get_if<IntegerRange>(&domain)) return Integer(r->hi - r->lo + 1);
  return std::nullopt;
}

FeatureSubset::FeatureSubset(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    Fail(ErrorKind::kValidation, "feature subset has duplicate indices");
  }
}

FeatureSubset FeatureSubset::All(std::size_t k) {
  std::vector<std::size_t> all(k);
  for (std::size_t i = 0; i < k; ++i) all[i] = i;
  return FeatureSubset(std::move(all));
}

FeatureSubset FeatureSubset::FromMask(unsigned long long mask, std::size_t k) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < k; ++i) {
    if (mask >> i & 1ULL) idx.push_back(i);
  }
  return FeatureSubset(std::move(idx));
}

bool FeatureSubset::contains(std::size_t i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

FeatureSubset FeatureSubset::Complement(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) {
    if (!contains(i)) out.push_back(i);
  }
  return FeatureSubset(std::move(out));
}

void FeatureSubset::Insert(std::size_t i) {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), i);
  if (it == indices_.end() || *it != i) indices_.insert(it, i);
}

GamModel::GamModel(Task task, Rational beta0, std::vector<Component> components, std::vector<FeatureDomain> domains)
    : task_(task), beta0_(std::move(beta0)), components_(std::move(components)), domains_(std::move(domains)) {
  Validate();
}

void GamModel::Validate() const {
  if (components_.empty()) Invalid("model needs at least one component");
  if (components_.size() != domains_.size()) {
    Invalid("model has " + std::to_string(components_.size()) + " components but " + std::to_string(domains_.size()) +
            " domains");
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    ValidateDomain(domains_[i], i);
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SplineShape>) {
            ValidateSpline(s, domains_[i], i);
          } else if constexpr (std::is_same_v<T, MlpShape>) {
            ValidateMlp(s, i);
          } else {
            if (s.trees.empty()) Invalid(FeatureLabel(i) + ": tree ensemble has no trees");
            if (s.trees.size() != s.tree_weights.size()) {
              Invalid(FeatureLabel(i) + ": tree ensemble weight count does not match tree count");
            }
            for (const DecisionTree& t : s.trees) ValidateTree(t, i);
          }
        },
        components_[i].shape);
  }
}

bool GamModel::all_enumerable() const {
  return std::all_of(domains_.begin(), domains_.end(), [](const FeatureDomain& d) { return IsEnumerable(d); });
}

Rational EvaluateSpline(const SplineShape& spline, const Rational& v) {
  if (v < spline.knots.front() || v > spline.knots.back()) {
    Fail(ErrorKind::kDomain, "value " + ToString(v) + " outside the spline knot span");
  }
  // Piece j covers [knots[j], knots[j+1]); the final piece is closed.
  auto it = std::upper_bound(spline.knots.begin(), spline.knots.end(), v);
  std::size_t piece = static_cast<std::size_t>(it - spline.knots.begin());
  piece = piece == 0 ? 0 : piece - 1;
  if (piece >= spline.polys.size()) piece = spline.polys.size() - 1;
  return spline.polys[piece](v);
}

Rational EvaluateMlp(const MlpShape& mlp, const Rational& v) {
  std::vector<Rational> act{v};
  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    const MlpLayer& layer = mlp.layers[l];
    std::vector<Rational> next = layer.bias;
    for (std::size_t in = 0; in < layer.inputs(); ++in) {
      if (act[in] == 0) continue;
      for (std::size_t out = 0; out < layer.outputs(); ++out) next[out] += act[in] * layer.weights[in][out];
    }
    if (l + 1 < mlp.layers.size()) {
      for (Rational& z : next) {
        if (z < 0) z = 0;
      }
    }
    act = std::move(next);
  }
  return act[0];
}

Rational EvaluateEnsemble(const TreeEnsembleShape& ensemble, const Rational& v) {
  Rational total = ensemble.tree_bias;
  for (std::size_t t = 0; t < ensemble.trees.size(); ++t) {
    total += ensemble.tree_weights[t] * ensemble.trees[t].Evaluate(v);
  }
  return total;
}

Rational EvaluateShape(const Shape& shape, const Rational& v) {
  return std::visit(
      [&](const auto& s) -> Rational {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SplineShape>) {
          return EvaluateSpline(s, v);
        } else if constexpr (std::is_same_v<T, MlpShape>) {
          return EvaluateMlp(s, v);
        } else {
          return EvaluateEnsemble(s, v);
        }
      },
      shape);
}

Rational EvaluateComponent(const GamModel& model, std::size_t i, const Rational& v) {
  if (i >= model.num_features()) Fail(ErrorKind::kDomain, "feature index out of range");
  if (!Contains(model.domain(i), v)) {
    Fail(ErrorKind::kDomain, "value " + ToString(v) + " outside the domain of feature " + std::to_string(i + 1));
  }
  const Component& c = model.component(i);
  if (c.beta == 0) return 0;
  return c.beta * EvaluateShape(c.shape, v);
}

void CheckInstance(const GamModel& model, const Instance& x) {
  if (x.size() != model.num_features()) {
    Fail(ErrorKind::kDomain, "instance has " + std::to_string(x.size()) + " values for a model with " +
                                 std::to_string(model.num_features()) + " features");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!Contains(model.domain(i), x[i])) {
      Fail(ErrorKind::kDomain, "value " + ToString(x[i]) + " outside the domain of feature " + std::to_string(i + 1));
    }
  }
}

Rational PreStepSum(const GamModel& model, const Instance& x) {
  CheckInstance(model, x);
  Rational total = model.beta0();
  for (std::size_t i = 0; i < x.size(); ++i) total += EvaluateComponent(model, i, x[i]);
  return total;
}

Rational Evaluate(const GamModel& model, const Instance& x) {
  Rational z = PreStepSum(model, x);
  if (model.task() == Task::kRegression) return z;
  return Step(z);
}

int Classify(const GamModel& model, const Instance& x) { return Step(PreStepSum(model, x)); }

GamModel DiscretizeDomain(const GamModel& model, const std::vector<std::vector<Rational>>& grid) {
  if (grid.size() != model.num_features()) {
    Fail(ErrorKind::kDomain, "grid has " + std::to_string(grid.size()) + " feature lists for " +
                                 std::to_string(model.num_features()) + " features");
  }
  std::vector<FeatureDomain> domains;
  domains.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<Rational> values = grid[i];
    for (const Rational& v : values) {
      if (!Contains(model.domain(i), v)) {
        Fail(ErrorKind::kDomain,
             "grid value " + ToString(v) + " outside the domain of feature " + std::to_string(i + 1));
      }
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) Fail(ErrorKind::kDomain, "empty grid for feature " + std::to_string(i + 1));
    domains.push_back(Enumerable{std::move(values)});
  }
  return GamModel(model.task(), model.beta0(), model.components(), std::move(domains));
}

}  // namespace gamx
