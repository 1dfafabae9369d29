#ifndef GAMX_TESTS_UNIT_TEST_UTIL_H_
#define GAMX_TESTS_UNIT_TEST_UTIL_H_

#include <string>
#include <vector>

#include "gamx/model.h"
#include "gamx/rational.h"

namespace gamx::testing {

inline Rational Q(const std::string& s) { return ParseRational(s); }

inline SplineShape Poly(const Rational& lo, const Rational& hi, std::vector<Rational> ascending) {
  return SplineShape{{lo, hi}, {Polynomial(std::move(ascending))}};
}

inline SplineShape IdentitySpline(const Rational& lo, const Rational& hi) { return Poly(lo, hi, {0, 1}); }

// ReLU(v) as a 1-1-1 network.
inline MlpShape Relu() {
  MlpShape m;
  m.layers.push_back(MlpLayer{{{1}}, {0}});
  m.layers.push_back(MlpLayer{{{1}}, {0}});
  return m;
}

// Stump: 1 when v >= r, else 0.
inline DecisionTree Stump(const Rational& r) {
  DecisionTree t;
  TreeNode root;
  root.is_leaf = false;
  root.test = TreeNode::Test::kGreaterEqual;
  root.threshold = r;
  root.if_true = 1;
  root.if_false = 2;
  TreeNode one;
  one.value = 1;
  TreeNode zero;
  zero.value = 0;
  t.nodes = {root, one, zero};
  return t;
}

inline TreeEnsembleShape TwoStumps() { return TreeEnsembleShape{{Stump(3), Stump(7)}, {1, 1}, 0}; }

inline Enumerable Values(std::vector<Rational> v) { return Enumerable{std::move(v)}; }

// beta0 + sum_i betas[i] * x_i over {0,1}^k.
inline GamModel UnitModel(const Rational& beta0, const std::vector<Rational>& betas,
                          Task task = Task::kClassification) {
  std::vector<Component> components;
  std::vector<FeatureDomain> domains;
  for (const Rational& b : betas) {
    components.push_back(Component{b, IdentitySpline(0, 1)});
    domains.push_back(Values({0, 1}));
  }
  return GamModel(task, beta0, std::move(components), std::move(domains));
}

inline FeatureSubset Subset(std::vector<std::size_t> zero_based) { return FeatureSubset(std::move(zero_based)); }

}  // namespace gamx::testing

#endif  // GAMX_TESTS_UNIT_TEST_UTIL_H_
