#include "gamx/redundancy.h"

#include <gtest/gtest.h>

#include "gamx/errors.h"
#include "gamx/oracle.h"
#include "test_util.h"

namespace gamx {
namespace {

using testing::IdentitySpline;
using testing::Poly;
using testing::TwoStumps;
using testing::UnitModel;

void ExpectWitnessFlips(const GamModel& m, std::size_t i, const RedundancyResult& r) {
  ASSERT_FALSE(r.redundant);
  ASSERT_TRUE(r.witness.has_value());
  Instance a = r.witness->base;
  Instance b = r.witness->base;
  a[i] = r.witness->v1;
  b[i] = r.witness->v2;
  EXPECT_NE(Classify(m, a), Classify(m, b));
}

TEST(Continuous, ZeroWeightAndZeroComponent) {
  const GamModel m(Task::kClassification, 0,
                   {Component{0, IdentitySpline(-1, 1)}, Component{7, Poly(-1, 1, {0})},
                    Component{1, IdentitySpline(-1, 1)}},
                   {RealInterval{-1, 1}, RealInterval{-1, 1}, RealInterval{-1, 1}});
  EXPECT_TRUE(IsRedundantContinuous(m, 0).redundant);
  EXPECT_TRUE(IsRedundantContinuous(m, 1).redundant);
  const RedundancyResult r = IsRedundantContinuous(m, 2);
  EXPECT_EQ(r.method, "continuous");
  ExpectWitnessFlips(m, 2, r);
}

TEST(Continuous, TrivialModelMakesEveryFeatureRedundant) {
  const GamModel m(Task::kClassification, 10, {Component{1, IdentitySpline(-1, 1)}}, {RealInterval{-1, 1}});
  EXPECT_TRUE(IsRedundantContinuous(m, 0).redundant);
}

TEST(Continuous, RejectsDiscontinuousAndNonSplineComponents) {
  const GamModel trees(Task::kClassification, -1, {Component{1, TwoStumps()}}, {RealInterval{0, 10}});
  try {
    IsRedundantContinuous(trees, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedConfiguration);
  }
}

TEST(Discrete, SpecExamples) {
  const GamModel m = UnitModel(-1, {1, 1});
  const RedundancyResult r = IsRedundant(m, 0);
  EXPECT_EQ(r.method, "discrete");
  ExpectWitnessFlips(m, 0, r);
  EXPECT_TRUE(IsRedundant(UnitModel(-1, {0, 1}), 0).redundant);
  const GamModel never = UnitModel(-10, {1, 1});
  EXPECT_TRUE(IsRedundant(never, 0).redundant);
  EXPECT_TRUE(IsRedundant(never, 1).redundant);
}

TEST(Discrete, LossyQuantizationIsAPrecisionError) {
  const GamModel m = UnitModel(-1, {Rational(1, 3), 1});
  try {
    IsRedundantDiscrete(Quantize(m, 2), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecision);
  }
  // The dispatcher picks an exact scale instead.
  EXPECT_EQ(IsRedundant(m, 0).redundant, OracleRedundant(m, 0));
}

TEST(Dispatcher, EnsembleOnContinuousDomainUsesCells) {
  // Two stumps on [0,10], beta0 = -3/2: label 1 iff v >= 7.
  const GamModel m(Task::kClassification, Rational(-3, 2),
                   {Component{1, TwoStumps()}, Component{0, IdentitySpline(0, 1)}},
                   {RealInterval{0, 10}, RealInterval{0, 1}});
  const RedundancyResult r = IsRedundant(m, 0);
  EXPECT_EQ(r.method, "cells");
  ExpectWitnessFlips(m, 0, r);
  EXPECT_TRUE(IsRedundant(m, 1).redundant);
}

TEST(Dispatcher, IntegerRangeSpline) {
  // x1 in 0..20, x2 in 0..20, label 1 iff x1 - x2 >= 15.
  const GamModel m(Task::kClassification, -15,
                   {Component{1, IdentitySpline(0, 20)}, Component{-1, IdentitySpline(0, 20)}},
                   {IntegerRange{0, 20}, IntegerRange{0, 20}});
  ExpectWitnessFlips(m, 1, IsRedundant(m, 1));
}

}  // namespace
}  // namespace gamx
