#ifndef GAMX_COUNTING_H_
#define GAMX_COUNTING_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gamx/distribution.h"
#include "gamx/model.h"

namespace gamx {

inline constexpr unsigned kDefaultDigits = 6;
// Bound on sum_i max|w_i| + |T|, so every partial sum fits in int64.
inline constexpr std::int64_t kWeightCapacity = std::int64_t{1} << 62;
// Largest dense DP array (entries) before Overflow is raised.
inline constexpr std::size_t kMaxTableEntries = std::size_t{1} << 26;

// Component tables scaled by 10^digits and rounded half-to-even. The label
// of z is 1 iff sum_i tables[i][z_i] >= threshold whenever `lossless`.
struct QuantizedModel {
  std::shared_ptr<const GamModel> model;
  unsigned digits = 0;
  Integer scale;
  std::vector<std::vector<std::int64_t>> tables;  // aligned with Enumerable values
  std::int64_t threshold = 0;                     // -round(scale * beta0)
  // Bound on |scale * true pre-step sum - quantized pre-step sum| over all inputs.
  Rational max_abs_error;
  bool lossless = true;

  std::size_t num_features() const { return tables.size(); }
  // Index of v in feature i's enumerable domain.
  std::size_t ValueIndex(std::size_t i, const Rational& v) const;
};

QuantizedModel Quantize(std::shared_ptr<const GamModel> model, unsigned digits = kDefaultDigits);
QuantizedModel Quantize(const GamModel& model, unsigned digits = kDefaultDigits);
// Same with an arbitrary positive scale; digits is left at 0.
QuantizedModel QuantizeWithScale(std::shared_ptr<const GamModel> model, const Integer& scale);

// Least common denominator of beta0 and every component value: the smallest
// scale that quantizes without loss.
Integer ExactScale(const GamModel& model);

// Smallest digits <= max_digits that quantizes without loss.
std::optional<unsigned> AutoDigits(const GamModel& model, unsigned max_digits = 18);

// An exact rational, or certified bounds when the quantization was lossy.
struct BoundedValue {
  Rational value;  // from the quantized tables
  Rational lower;
  Rational upper;
  bool exact = true;
};

// Fraction of completions over the free features that keep f(x).
BoundedValue CountCompletions(const QuantizedModel& q, const Instance& x, const FeatureSubset& fixed);

// Pr[f(z) = 1] for z drawn from the product distribution.
BoundedValue ExpectedLabel(const QuantizedModel& q, const ProductDistribution& dist);

// Achievable values of round(scale * beta0) + sum over the included features:
// base + step * U for every U with reachable[U].
struct ReachableSums {
  std::int64_t base = 0;
  std::int64_t step = 0;
  std::vector<bool> reachable;

  std::vector<std::int64_t> Sums() const;
};

ReachableSums ComputeReachableSums(const QuantizedModel& q, const FeatureSubset& exclude);

// Value indices (for the features not excluded; excluded entries are left at
// 0) whose quantized sum, intercept included, lies in [lo, hi].
std::optional<std::vector<std::size_t>> FindReachable(const QuantizedModel& q, const FeatureSubset& exclude,
                                                      std::int64_t lo, std::int64_t hi);

// Integer Shapley value pieces for the classification path; see shap.h.
BoundedValue ShapClassificationDp(const QuantizedModel& q, const Instance& x, const ProductDistribution& dist,
                                  std::size_t i);

}  // namespace gamx

#endif  // GAMX_COUNTING_H_
