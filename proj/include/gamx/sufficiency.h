#ifndef GAMX_SUFFICIENCY_H_
#define GAMX_SUFFICIENCY_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "gamx/component_analysis.h"
#include "gamx/model.h"

namespace gamx {

struct FeatureScore {
  std::size_t index = 0;
  Rational fixed_value;  // beta_i * f_i(x_i)
  Extreme penalty;       // min over the domain when f(x) = 1, max when f(x) = 0
  ExactReal score;       // (fixed - penalty), oriented so that it is never negative
};

struct SufficiencyResult {
  bool sufficient = false;
  // Worst-case pre-step sum with the free features at their penalties.
  ExactReal worst_sum;
  // Completion whose label differs from f(x); present when not sufficient,
  // except in degenerate cases where the flip needs an irrational point.
  std::optional<Instance> witness;
};

struct ContrastiveResult {
  bool contrastive = false;
  ExactReal worst_sum;
  std::optional<Instance> witness;
};

struct ReasonCertificate {
  enum class Kind { kSufficient, kContrastive };
  FeatureSubset subset;
  Kind kind = Kind::kSufficient;
  std::optional<Instance> witness;
};

// Classification only; throws UnsupportedConfiguration for regression models.
std::vector<FeatureScore> FeatureScores(const GamModel& model, const Instance& x,
                                        std::size_t budget = kDefaultPieceBudget);

SufficiencyResult CheckSufficient(const GamModel& model, const Instance& x, const FeatureSubset& s,
                                  std::size_t budget = kDefaultPieceBudget);

// S is contrastive iff its complement is not sufficient. The witness reassigns
// only features in S.
ContrastiveResult CheckContrastive(const GamModel& model, const Instance& x, const FeatureSubset& s,
                                   std::size_t budget = kDefaultPieceBudget);

ReasonCertificate MinimalSufficient(const GamModel& model, const Instance& x,
                                    std::size_t budget = kDefaultPieceBudget);

// Throws NoContrastiveReason when no reassignment of any features changes f(x).
ReasonCertificate MinimalContrastive(const GamModel& model, const Instance& x,
                                     std::size_t budget = kDefaultPieceBudget);

bool MsrDecision(const GamModel& model, const Instance& x, std::size_t d, std::size_t budget = kDefaultPieceBudget);
bool McrDecision(const GamModel& model, const Instance& x, std::size_t d, std::size_t budget = kDefaultPieceBudget);

}  // namespace gamx

#endif  // GAMX_SUFFICIENCY_H_
