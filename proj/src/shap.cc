#include "gamx/shap.h"

#include <memory>
#include <stdexcept>

#include "gamx/errors.h"

namespace gamx {

ShapResult ShapRegression(const GamModel& model, const Instance& x, const ProductDistribution& dist,
                          std::size_t budget) {
  if (model.task() != Task::kRegression) {
    Fail(ErrorKind::kUnsupportedConfiguration, "the closed form applies to regression models");
  }
  CheckInstance(model, x);
  ValidateDistribution(model, dist);
  ShapResult r;
  r.baseline = model.beta0();
  r.full = model.beta0();
  for (std::size_t i = 0; i < model.num_features(); ++i) {
    const Rational mean = Expectation(model.component(i), model.domain(i), dist[i], budget);
    const Rational value = EvaluateComponent(model, i, x[i]);
    r.values.push_back(value - mean);
    r.baseline += mean;
    r.full += value;
  }
  r.lower = r.values;
  r.upper = r.values;
  return r;
}

BoundedValue ShapClassification(const QuantizedModel& q, const Instance& x, const ProductDistribution& dist,
                                std::size_t i) {
  return ShapClassificationDp(q, x, dist, i);
}

ShapResult ShapAll(const GamModel& model, const Instance& x, const ProductDistribution& dist,
                   std::optional<unsigned> digits, std::size_t budget) {
  if (model.task() == Task::kRegression) return ShapRegression(model, x, dist, budget);

  auto shared = std::make_shared<const GamModel>(model);
  const QuantizedModel q = digits ? Quantize(shared, *digits) : QuantizeWithScale(shared, ExactScale(model));
  ShapResult r;
  r.full = Classify(model, x);
  const BoundedValue base = ExpectedLabel(q, dist);
  r.baseline = base.value;
  r.exact = q.lossless;
  Rational total = 0;
  for (std::size_t i = 0; i < model.num_features(); ++i) {
    const BoundedValue phi = ShapClassification(q, x, dist, i);
    r.values.push_back(phi.value);
    r.lower.push_back(phi.lower);
    r.upper.push_back(phi.upper);
    total += phi.value;
  }
  if (r.exact && total != r.full - r.baseline) {
    throw std::logic_error("Shapley efficiency violated: sum " + ToString(total) + " vs " +
                           ToString(Rational(r.full - r.baseline)));
  }
  return r;
}

}  // namespace gamx
