#ifndef GAMX_COMPONENT_ANALYSIS_H_
#define GAMX_COMPONENT_ANALYSIS_H_

#include <cstddef>
#include <utility>
#include <vector>

#include "gamx/distribution.h"
#include "gamx/exact_real.h"
#include "gamx/model.h"
#include "gamx/piecewise.h"

namespace gamx {

inline constexpr std::size_t kDefaultPieceBudget = 100000;

// One side of an extremum. When `attained` is false the value is a one-sided
// limit at piece_hi that no domain point reaches (a jump discontinuity); the
// value is then an infimum/supremum rather than a minimum/maximum.
struct Extreme {
  ExactReal value;
  ExactReal point;
  bool attained = true;
  Rational piece_lo;
  Rational piece_hi;
};

struct Extremes {
  Extreme min;
  Extreme max;
};

// beta_i * f_i on the hull of a non-enumerable domain as a piecewise polynomial.
// Throws BudgetExceeded for MLPs whose piece count passes `budget`.
PiecewiseFunction Canonicalize(const Component& component, const FeatureDomain& domain,
                               std::size_t budget = kDefaultPieceBudget);

// Exact extremes of pw over the domain. Interior critical points come from
// the derivative's closed-form roots; integer domains snap each critical point
// to its floor and ceiling. Ties go to the smallest witness.
Extremes ComputeExtremes(const PiecewiseFunction& pw, const FeatureDomain& domain);

// (v, beta_i * f_i(v)) for each domain value in order.
std::vector<std::pair<Rational, Rational>> ComponentValues(const Component& component, const Enumerable& domain);

// Extremes of beta_i * f_i over any domain variant.
Extremes ComponentExtremes(const Component& component, const FeatureDomain& domain,
                           std::size_t budget = kDefaultPieceBudget);

// E[beta_i * f_i(z)] under the marginal.
Rational Expectation(const Component& component, const FeatureDomain& domain, const FeatureDistribution& dist,
                     std::size_t budget = kDefaultPieceBudget);

// A rational domain point whose value approaches the extreme as bits grows.
// Returns the witness itself when it is rational and attained.
Rational ApproximateWitness(const Extreme& extreme, unsigned bits);

// Whether the spline is continuous at every knot inside the domain hull.
bool IsContinuousOn(const SplineShape& spline, const FeatureDomain& domain);

}  // namespace gamx

#endif  // GAMX_COMPONENT_ANALYSIS_H_
