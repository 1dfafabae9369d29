#ifndef GAMX_SHAP_H_
#define GAMX_SHAP_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "gamx/component_analysis.h"
#include "gamx/counting.h"
#include "gamx/distribution.h"
#include "gamx/model.h"

namespace gamx {

// Shapley values under v(S) = E[f(x_S, z_rest)] with independent features.
struct ShapResult {
  std::vector<Rational> values;
  Rational baseline;  // v(empty) = E[f]
  Rational full;      // v(all) = f(x)
  bool exact = true;
  // Certified per-feature bounds; equal to values when exact.
  std::vector<Rational> lower;
  std::vector<Rational> upper;
};

// phi_i = beta_i * (f_i(x_i) - E[f_i]).
ShapResult ShapRegression(const GamModel& model, const Instance& x, const ProductDistribution& dist,
                          std::size_t budget = kDefaultPieceBudget);

BoundedValue ShapClassification(const QuantizedModel& q, const Instance& x, const ProductDistribution& dist,
                                std::size_t i);

// Dispatches on the task. Classification quantizes at `digits` when given,
// otherwise at the exact scale of the model. Throws if the efficiency
// identity fails on an exact result.
ShapResult ShapAll(const GamModel& model, const Instance& x, const ProductDistribution& dist,
                   std::optional<unsigned> digits = std::nullopt, std::size_t budget = kDefaultPieceBudget);

}  // namespace gamx

#endif  // GAMX_SHAP_H_
