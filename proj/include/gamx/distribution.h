#ifndef GAMX_DISTRIBUTION_H_
#define GAMX_DISTRIBUTION_H_

#include <variant>
#include <vector>

#include "gamx/model.h"
#include "gamx/piecewise.h"
#include "gamx/rational.h"

namespace gamx {

// Uniform over the feature's domain (points for discrete domains, Lebesgue
// measure for real intervals).
struct UniformDist {};

// Probabilities aligned with an Enumerable domain's sorted values.
struct CategoricalDist {
  std::vector<Rational> probs;
};

// Piecewise-polynomial density over a real interval.
struct DensityDist {
  PiecewiseFunction density;
};

using FeatureDistribution = std::variant<UniformDist, CategoricalDist, DensityDist>;

// Fully factorized: one independent marginal per feature.
using ProductDistribution = std::vector<FeatureDistribution>;

ProductDistribution UniformProduct(std::size_t k);

// Checks that each marginal matches its domain variant, is non-negative and
// normalized. Throws UnsupportedDistribution otherwise.
void ValidateDistribution(const GamModel& model, const ProductDistribution& dist);

// Probability of each value of an Enumerable domain under the marginal.
std::vector<Rational> EnumerableProbabilities(const Enumerable& domain, const FeatureDistribution& dist);

}  // namespace gamx

#endif  // GAMX_DISTRIBUTION_H_
