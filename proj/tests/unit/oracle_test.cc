#include "gamx/oracle.h"

#include <gtest/gtest.h>

#include <cstdlib>

#include "gamx/errors.h"
#include "test_util.h"

namespace gamx {
namespace {

using testing::Subset;
using testing::UnitModel;

TEST(Oracle, UnitModelAnswers) {
  const GamModel m = UnitModel(-1, {1, 1});
  EXPECT_TRUE(OracleSufficient(m, {1, 1}, Subset({0})));
  EXPECT_FALSE(OracleSufficient(m, {1, 1}, Subset({})));
  EXPECT_EQ(OracleMinSufficient(m, {1, 1}).subset, Subset({0}));
  EXPECT_EQ(OracleMinContrastive(m, {1, 1})->subset, Subset({0, 1}));
  EXPECT_FALSE(OracleMinContrastive(UnitModel(1, {1}), {0}).has_value());
  EXPECT_EQ(OracleCc(m, {1, 1}, Subset({})), Rational(3, 4));
  EXPECT_EQ(OracleExpectation(m, UniformProduct(2)), Rational(3, 4));
  EXPECT_EQ(OracleShap(m, {1, 1}, UniformProduct(2)), (std::vector<Rational>{Rational(1, 8), Rational(1, 8)}));
  EXPECT_FALSE(OracleRedundant(m, 0));
  EXPECT_TRUE(OracleRedundant(UnitModel(-10, {1, 1}), 0));
}

TEST(Oracle, SelfConsistency) {
  const GamModel m = UnitModel(-2, {1, 1, Rational(1, 2), 1});
  const Instance x{1, 0, 1, 1};
  for (unsigned long long mask = 0; mask < 16; ++mask) {
    const FeatureSubset s = FeatureSubset::FromMask(mask, 4);
    const bool sufficient = OracleSufficient(m, x, s);
    EXPECT_EQ(sufficient, OracleCc(m, x, s) == 1);
    EXPECT_EQ(sufficient, !OracleContrastive(m, x, s.Complement(4)));
  }
}

TEST(Oracle, ShapAxioms) {
  const GamModel m = UnitModel(-1, {1, 1, 0});
  const Instance x{1, 1, 1};
  const std::vector<Rational> phi = OracleShap(m, x, UniformProduct(3));
  EXPECT_EQ(phi[0], phi[1]);
  EXPECT_EQ(phi[2], 0);
  EXPECT_EQ(phi[0] + phi[1] + phi[2], Evaluate(m, x) - OracleExpectation(m, UniformProduct(3)));
}

TEST(Oracle, CeilingIsAHardError) {
  const GamModel m = UnitModel(0, std::vector<Rational>(12, 1));
  try {
    OracleCc(m, Instance(12, 0), Subset({}), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStateSpaceTooLarge);
  }
  const GamModel real(Task::kClassification, 0, {Component{1, testing::IdentitySpline(0, 1)}}, {RealInterval{0, 1}});
  EXPECT_THROW(OracleCc(real, {0}, Subset({})), Error);
}

TEST(Oracle, CeilingFromEnvironment) {
  ::setenv("GAMX_ORACLE_CEILING", "1234", 1);
  EXPECT_EQ(OracleCeiling(), 1234u);
  ::unsetenv("GAMX_ORACLE_CEILING");
  EXPECT_EQ(OracleCeiling(), kDefaultOracleCeiling);
}

}  // namespace
}  // namespace gamx
