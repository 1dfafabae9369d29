#ifndef GAMX_ORACLE_H_
#define GAMX_ORACLE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "gamx/distribution.h"
#include "gamx/model.h"

namespace gamx {

// Exhaustive reference answers over enumerable domains. Every call throws
// StateSpaceTooLarge when the product of domain sizes passes the ceiling.

inline constexpr std::uint64_t kDefaultOracleCeiling = 1000000;

// GAMX_ORACLE_CEILING when set, otherwise kDefaultOracleCeiling.
std::uint64_t OracleCeiling();

struct OracleMinimum {
  std::size_t cardinality = 0;
  FeatureSubset subset;  // smallest in (size, lexicographic) order
};

bool OracleSufficient(const GamModel& model, const Instance& x, const FeatureSubset& s,
                      std::uint64_t ceiling = OracleCeiling());

bool OracleContrastive(const GamModel& model, const Instance& x, const FeatureSubset& s,
                       std::uint64_t ceiling = OracleCeiling());

OracleMinimum OracleMinSufficient(const GamModel& model, const Instance& x, std::uint64_t ceiling = OracleCeiling());

// nullopt when no subset is contrastive.
std::optional<OracleMinimum> OracleMinContrastive(const GamModel& model, const Instance& x,
                                                  std::uint64_t ceiling = OracleCeiling());

Rational OracleCc(const GamModel& model, const Instance& x, const FeatureSubset& s,
                  std::uint64_t ceiling = OracleCeiling());

// E[f(z)]: the expected label for classification, the mean value for regression.
Rational OracleExpectation(const GamModel& model, const ProductDistribution& dist,
                           std::uint64_t ceiling = OracleCeiling());

// All Shapley values from the subset-sum definition.
std::vector<Rational> OracleShap(const GamModel& model, const Instance& x, const ProductDistribution& dist,
                                 std::uint64_t ceiling = OracleCeiling());

bool OracleRedundant(const GamModel& model, std::size_t i, std::uint64_t ceiling = OracleCeiling());

}  // namespace gamx

#endif  // GAMX_ORACLE_H_
