#ifndef GAMX_REDUNDANCY_H_
#define GAMX_REDUNDANCY_H_

#include <cstddef>
#include <optional>
#include <string>

#include "gamx/component_analysis.h"
#include "gamx/counting.h"
#include "gamx/model.h"

namespace gamx {

// base agrees with both flipped inputs off feature i; base[i] == v1.
// Classify(base[i := v1]) != Classify(base[i := v2]).
struct RedundancyWitness {
  Instance base;
  Rational v1;
  Rational v2;
};

struct RedundancyResult {
  bool redundant = false;
  std::optional<RedundancyWitness> witness;
  std::string method;  // "continuous", "discrete", "cells"
};

// Smooth GAM over real intervals with continuous splines.
RedundancyResult IsRedundantContinuous(const GamModel& model, std::size_t i,
                                       std::size_t budget = kDefaultPieceBudget);

// Exact reachable-sum test on a lossless quantization. PrecisionError if lossy.
RedundancyResult IsRedundantDiscrete(const QuantizedModel& q, std::size_t i);

// Routes to the discrete test for enumerable models, the continuous test for
// Smooth GAMs, and otherwise reduces every feature to finitely many
// representatives (tree cells, small integer ranges) when that is exact.
RedundancyResult IsRedundant(const GamModel& model, std::size_t i, std::size_t budget = kDefaultPieceBudget);

}  // namespace gamx

#endif  // GAMX_REDUNDANCY_H_
