#ifndef GAMX_MODEL_H_
#define GAMX_MODEL_H_

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "gamx/polynomial.h"
#include "gamx/rational.h"

namespace gamx {

enum class Task { kRegression, kClassification };

// Piecewise polynomial of degree <= 3. polys[j] applies on [knots[j], knots[j+1]),
// the last piece on the closed interval.
struct SplineShape {
  std::vector<Rational> knots;
  std::vector<Polynomial> polys;
};

// weights has one row per input unit and one column per output unit.
struct MlpLayer {
  std::vector<std::vector<Rational>> weights;
  std::vector<Rational> bias;

  std::size_t inputs() const { return weights.size(); }
  std::size_t outputs() const { return bias.size(); }
};

// ReLU on every hidden layer, identity on the output layer. Scalar in, scalar out.
struct MlpShape {
  std::vector<MlpLayer> layers;
};

struct TreeNode {
  enum class Test { kGreaterEqual, kLess };

  bool is_leaf = true;
  Rational value;  // leaves
  Test test = Test::kGreaterEqual;
  Rational threshold;
  int if_true = -1;   // child taken when the test holds
  int if_false = -1;
};

// Node 0 is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  Rational Evaluate(const Rational& x) const;
};

// f(x) = bias + sum_j weights[j] * trees[j](x)
struct TreeEnsembleShape {
  std::vector<DecisionTree> trees;
  std::vector<Rational> tree_weights;
  Rational tree_bias;
};

using Shape = std::variant<SplineShape, MlpShape, TreeEnsembleShape>;

struct Component {
  Rational beta;
  Shape shape;
};

// Sorted ascending, deduplicated, non-empty.
struct Enumerable {
  std::vector<Rational> values;
};
struct IntegerRange {
  Integer lo;
  Integer hi;
};
struct RealInterval {
  Rational lo;
  Rational hi;
};

using FeatureDomain = std::variant<Enumerable, IntegerRange, RealInterval>;

bool Contains(const FeatureDomain& domain, const Rational& v);
// Convex hull [lo, hi] of the domain.
std::pair<Rational, Rational> Hull(const FeatureDomain& domain);
bool IsEnumerable(const FeatureDomain& domain);
// Number of points of a discrete domain, nullopt for real intervals.
std::optional<Integer> DomainSize(const FeatureDomain& domain);

using Instance = std::vector<Rational>;

// Sorted set of 0-based feature indices.
class FeatureSubset {
 public:
  FeatureSubset() = default;
  explicit FeatureSubset(std::vector<std::size_t> indices);
  static FeatureSubset All(std::size_t k);
  static FeatureSubset FromMask(unsigned long long mask, std::size_t k);

  bool contains(std::size_t i) const;
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const std::vector<std::size_t>& indices() const { return indices_; }
  FeatureSubset Complement(std::size_t k) const;
  void Insert(std::size_t i);

  friend bool operator==(const FeatureSubset& a, const FeatureSubset& b) { return a.indices_ == b.indices_; }

 private:
  std::vector<std::size_t> indices_;
};

// Immutable once constructed; construction validates every structural
// invariant and throws ValidationError on the first violation.
class GamModel {
 public:
  GamModel(Task task, Rational beta0, std::vector<Component> components, std::vector<FeatureDomain> domains);

  Task task() const { return task_; }
  const Rational& beta0() const { return beta0_; }
  std::size_t num_features() const { return components_.size(); }
  const Component& component(std::size_t i) const { return components_.at(i); }
  const std::vector<Component>& components() const { return components_; }
  const FeatureDomain& domain(std::size_t i) const { return domains_.at(i); }
  const std::vector<FeatureDomain>& domains() const { return domains_; }
  bool all_enumerable() const;

 private:
  void Validate() const;

  Task task_;
  Rational beta0_;
  std::vector<Component> components_;
  std::vector<FeatureDomain> domains_;
};

// f_i(v) without the weight. DomainError outside the shape's support.
Rational EvaluateShape(const Shape& shape, const Rational& v);
Rational EvaluateMlp(const MlpShape& mlp, const Rational& v);
Rational EvaluateSpline(const SplineShape& spline, const Rational& v);
Rational EvaluateEnsemble(const TreeEnsembleShape& ensemble, const Rational& v);

// beta_i * f_i(v), checked against the feature domain.
Rational EvaluateComponent(const GamModel& model, std::size_t i, const Rational& v);

// beta0 + sum_i beta_i f_i(x_i).
Rational PreStepSum(const GamModel& model, const Instance& x);

inline int Step(const Rational& z) { return z >= 0 ? 1 : 0; }

// Regression value, or the 0/1 label as a rational for classification.
Rational Evaluate(const GamModel& model, const Instance& x);
int Classify(const GamModel& model, const Instance& x);

void CheckInstance(const GamModel& model, const Instance& x);

// Replaces every domain with the given finite grid; components untouched.
GamModel DiscretizeDomain(const GamModel& model, const std::vector<std::vector<Rational>>& grid);

}  // namespace gamx

#endif  // GAMX_MODEL_H_
