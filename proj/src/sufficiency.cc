#include "gamx/sufficiency.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "gamx/errors.h"

namespace gamx {
namespace {

void RequireClassification(const GamModel& model) {
  if (model.task() != Task::kClassification) {
    Fail(ErrorKind::kUnsupportedConfiguration,
         "sufficient and contrastive reasons are defined for classification models; use shap for regression");
  }
}

int LabelOf(const GamModel& model, const Instance& x) {
  CheckInstance(model, x);
  return Step(PreStepSum(model, x));
}

// Whether the worst case keeps the label. For label 0 the worst sum is a
// supremum; when it is exactly 0 and some free feature never reaches its
// maximum, no completion attains it.
bool KeepsLabel(int label, const ExactReal& worst, std::size_t free_unattained) {
  const int s = worst.sign();
  if (label == 1) return s >= 0;
  return s < 0 || (s == 0 && free_unattained > 0);
}

// Completion of x that moves the free features to (approximations of) their
// penalty points, checked to flip the label.
std::optional<Instance> FlipWitness(const GamModel& model, const Instance& x, int label,
                                    const std::vector<FeatureScore>& scores, const std::vector<bool>& free) {
  bool exact = true;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (free[j] && !(scores[j].penalty.attained && scores[j].penalty.point.is_rational())) exact = false;
  }
  for (unsigned bits = 16; bits <= 1024; bits *= 2) {
    Instance z = x;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (free[j]) z[j] = ApproximateWitness(scores[j].penalty, bits);
    }
    if (Step(PreStepSum(model, z)) != label) return z;
    if (exact) break;
  }
  return std::nullopt;
}

struct Evaluation {
  ExactReal worst;
  std::size_t free_unattained = 0;
};

Evaluation WorstCase(const GamModel& model, const std::vector<FeatureScore>& scores, const std::vector<bool>& free) {
  Evaluation e{ExactReal(model.beta0())};
  Rational fixed_total = 0;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (free[j]) {
      e.worst += scores[j].penalty.value;
      if (!scores[j].penalty.attained) ++e.free_unattained;
    } else {
      fixed_total += scores[j].fixed_value;
    }
  }
  e.worst += ExactReal(fixed_total);
  return e;
}

// Descending score, ascending index. For label 0 an attained penalty sorts
// ahead of an unattained one with the same score, which keeps unattained
// suprema among the free features whenever that matters.
std::vector<std::size_t> ScoreOrder(const std::vector<FeatureScore>& scores, int label) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int c = (scores[a].score - scores[b].score).sign();
    if (c != 0) return c > 0;
    if (label == 0 && scores[a].penalty.attained != scores[b].penalty.attained) return scores[a].penalty.attained;
    return false;
  });
  return order;
}

}  // namespace

std::vector<FeatureScore> FeatureScores(const GamModel& model, const Instance& x, std::size_t budget) {
  RequireClassification(model);
  const int label = LabelOf(model, x);
  std::vector<FeatureScore> out;
  out.reserve(model.num_features());
  for (std::size_t i = 0; i < model.num_features(); ++i) {
    FeatureScore fs;
    fs.index = i;
    fs.fixed_value = EvaluateComponent(model, i, x[i]);
    Extremes ext = ComponentExtremes(model.component(i), model.domain(i), budget);
    fs.penalty = label == 1 ? std::move(ext.min) : std::move(ext.max);
    fs.score = ExactReal(fs.fixed_value) - fs.penalty.value;
    if (label == 0) fs.score = -fs.score;
    out.push_back(std::move(fs));
  }
  return out;
}

SufficiencyResult CheckSufficient(const GamModel& model, const Instance& x, const FeatureSubset& s,
                                  std::size_t budget) {
  std::vector<FeatureScore> scores = FeatureScores(model, x, budget);
  const int label = LabelOf(model, x);
  std::vector<bool> free(model.num_features(), true);
  for (std::size_t i : s.indices()) {
    if (i >= free.size()) Fail(ErrorKind::kValidation, "feature index " + std::to_string(i + 1) + " out of range");
    free[i] = false;
  }
  Evaluation e = WorstCase(model, scores, free);
  SufficiencyResult r;
  r.sufficient = KeepsLabel(label, e.worst, e.free_unattained);
  r.worst_sum = e.worst;
  if (!r.sufficient) r.witness = FlipWitness(model, x, label, scores, free);
  return r;
}

ContrastiveResult CheckContrastive(const GamModel& model, const Instance& x, const FeatureSubset& s,
                                   std::size_t budget) {
  for (std::size_t i : s.indices()) {
    if (i >= model.num_features()) {
      Fail(ErrorKind::kValidation, "feature index " + std::to_string(i + 1) + " out of range");
    }
  }
  SufficiencyResult r = CheckSufficient(model, x, s.Complement(model.num_features()), budget);
  return {!r.sufficient, r.worst_sum, std::move(r.witness)};
}

ReasonCertificate MinimalSufficient(const GamModel& model, const Instance& x, std::size_t budget) {
  std::vector<FeatureScore> scores = FeatureScores(model, x, budget);
  const int label = LabelOf(model, x);
  const std::size_t k = model.num_features();
  std::vector<bool> free(k, true);
  Evaluation e = WorstCase(model, scores, free);
  std::vector<std::size_t> order = ScoreOrder(scores, label);

  FeatureSubset chosen;
  std::size_t next = 0;
  while (!KeepsLabel(label, e.worst, e.free_unattained)) {
    // The full set is always sufficient, so this terminates within k steps.
    const std::size_t i = order[next++];
    free[i] = false;
    e.worst += ExactReal(scores[i].fixed_value) - scores[i].penalty.value;
    if (!scores[i].penalty.attained) --e.free_unattained;
    chosen.Insert(i);
  }
  return {chosen, ReasonCertificate::Kind::kSufficient, std::nullopt};
}

ReasonCertificate MinimalContrastive(const GamModel& model, const Instance& x, std::size_t budget) {
  std::vector<FeatureScore> scores = FeatureScores(model, x, budget);
  const int label = LabelOf(model, x);
  const std::size_t k = model.num_features();
  std::vector<bool> free(k, true);
  if (KeepsLabel(label, WorstCase(model, scores, free).worst, WorstCase(model, scores, free).free_unattained)) {
    Fail(ErrorKind::kNoContrastiveReason, "the prediction is constant over the whole domain");
  }
  std::fill(free.begin(), free.end(), false);
  Evaluation e = WorstCase(model, scores, free);
  std::vector<std::size_t> order = ScoreOrder(scores, label);

  FeatureSubset chosen;
  std::size_t next = 0;
  while (KeepsLabel(label, e.worst, e.free_unattained)) {
    const std::size_t i = order[next++];
    free[i] = true;
    e.worst += scores[i].penalty.value - ExactReal(scores[i].fixed_value);
    if (!scores[i].penalty.attained) ++e.free_unattained;
    chosen.Insert(i);
  }
  return {chosen, ReasonCertificate::Kind::kContrastive, FlipWitness(model, x, label, scores, free)};
}

bool MsrDecision(const GamModel& model, const Instance& x, std::size_t d, std::size_t budget) {
  return MinimalSufficient(model, x, budget).subset.size() <= d;
}

bool McrDecision(const GamModel& model, const Instance& x, std::size_t d, std::size_t budget) {
  try {
    return MinimalContrastive(model, x, budget).subset.size() <= d;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNoContrastiveReason) return false;
    throw;
  }
}

}  // namespace gamx
