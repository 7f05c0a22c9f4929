// Copyright 2026 The mia-audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mia_audit/metrics.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "mia_audit/undefined.h"

namespace mia_audit {
namespace {

// Concordant pairs plus half credit for ties, over all member/non-member
// pairs.
double PairwiseAuc(const std::vector<double>& s,
                   const std::vector<uint8_t>& y) {
  double credit = 0.0;
  double pairs = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      pairs += 1.0;
      credit += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return credit / pairs;
}

// (fpr, tpr) of the rule score > t for t at every distinct score and -inf.
std::set<std::pair<double, double>> EnumeratedVertices(
    const std::vector<double>& s, const std::vector<uint8_t>& y) {
  std::vector<double> cuts(s.begin(), s.end());
  cuts.push_back(-INFINITY);
  const double pos = std::count(y.begin(), y.end(), 1);
  const double neg = y.size() - pos;
  std::set<std::pair<double, double>> out;
  for (double t : cuts) {
    double tp = 0, fp = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] > t) (y[i] ? tp : fp) += 1;
    }
    out.insert({fp / neg, tp / pos});
  }
  return out;
}

TEST(RocCurveTest, PerfectSeparationPassesThroughCorner) {
  const std::vector<double> s = {0.1, 0.2, 0.8, 0.9};
  const std::vector<uint8_t> y = {0, 0, 1, 1};
  RocCurve curve = *ComputeRocCurve(s, y);
  bool corner = false;
  for (const RocPoint& p : curve.points) {
    corner |= p.fpr == 0.0 && p.tpr == 1.0;
  }
  EXPECT_TRUE(corner);
  EXPECT_EQ(Auc(curve), 1.0);
}

TEST(RocCurveTest, AllTiedIsTwoPoints) {
  const std::vector<double> s(7, 1.25);
  const std::vector<uint8_t> y = {0, 1, 0, 1, 1, 0, 0};
  RocCurve curve = *ComputeRocCurve(s, y);
  ASSERT_EQ(curve.points.size(), 2u);
  EXPECT_EQ(curve.points[0].fpr, 0.0);
  EXPECT_EQ(curve.points[0].tpr, 0.0);
  EXPECT_EQ(curve.points[1].fpr, 1.0);
  EXPECT_EQ(curve.points[1].tpr, 1.0);
  EXPECT_EQ(Auc(curve), 0.5);
}

TEST(RocCurveTest, SixSampleToyMatchesEnumeration) {
  const std::vector<double> s = {0.3, 0.7, 0.7, 0.1, 0.9, 0.5};
  const std::vector<uint8_t> y = {1, 0, 1, 0, 1, 0};
  RocCurve curve = *ComputeRocCurve(s, y);
  std::set<std::pair<double, double>> got;
  for (const RocPoint& p : curve.points) got.insert({p.fpr, p.tpr});
  EXPECT_EQ(got, EnumeratedVertices(s, y));
  // Hand values: vertices (0,0) (0,1/3) (1/3,2/3) (2/3,2/3) (2/3,1) (1,1).
  EXPECT_EQ(curve.points.size(), 6u);
  EXPECT_DOUBLE_EQ(Auc(curve), PairwiseAuc(s, y));
  EXPECT_DOUBLE_EQ(TprAtFpr(curve, 0.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(TprAtFpr(curve, 0.5), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(TprAtFpr(curve, 2.0 / 3.0), 1.0);
  EXPECT_DOUBLE_EQ(TprAtFpr(curve, 1.0 / 6.0, TprInterpolation::kLinear), 0.5);
}

TEST(RocCurveTest, ThresholdsReproduceVertices) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> v(0, 20);
  std::vector<double> s(60);
  std::vector<uint8_t> y(60);
  for (int i = 0; i < 60; ++i) {
    s[i] = v(rng);
    y[i] = i % 3 == 0;
  }
  RocCurve curve = *ComputeRocCurve(s, y);
  const double pos = 20, neg = 40;
  for (const RocPoint& p : curve.points) {
    double tp = 0, fp = 0;
    for (int i = 0; i < 60; ++i) {
      if (s[i] > p.threshold) (y[i] ? tp : fp) += 1;
    }
    EXPECT_EQ(tp / pos, p.tpr);
    EXPECT_EQ(fp / neg, p.fpr);
  }
  for (size_t i = 1; i < curve.points.size(); ++i) {
    EXPECT_GE(curve.points[i].fpr, curve.points[i - 1].fpr);
    EXPECT_GE(curve.points[i].tpr, curve.points[i - 1].tpr);
  }
}

TEST(RocCurveTest, Errors) {
  const std::vector<double> s = {1.0, 2.0};
  EXPECT_FALSE(ComputeRocCurve(s, std::vector<uint8_t>{1, 1}).ok());
  EXPECT_FALSE(ComputeRocCurve(s, std::vector<uint8_t>{0, 0}).ok());
  EXPECT_FALSE(ComputeRocCurve(s, std::vector<uint8_t>{0}).ok());
  const std::vector<double> bad = {1.0, INFINITY};
  EXPECT_FALSE(ComputeRocCurve(bad, std::vector<uint8_t>{0, 1}).ok());
}

TEST(AucTest, MatchesPairwiseOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial * 4;
    std::uniform_int_distribution<int> coarse(0, 1 + trial % 9);
    std::normal_distribution<double> fine;
    std::vector<double> s(n);
    std::vector<uint8_t> y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = i % 2;
      s[i] = trial % 2 ? coarse(rng) + 0.3 * y[i] : fine(rng) + y[i];
    }
    EXPECT_NEAR(Auc(*ComputeRocCurve(s, y)), PairwiseAuc(s, y), 1e-12) << trial;
  }
}

TEST(AucTest, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::vector<double> s(500), t1(500), t2(500);
  std::vector<uint8_t> y(500);
  for (int i = 0; i < 500; ++i) {
    y[i] = i % 2;
    s[i] = std::round(4 * (normal(rng) + 0.5 * y[i])) / 4;
    t1[i] = std::exp(s[i]);
    t2[i] = 3.0 * s[i] - 7.0;
  }
  const double auc = Auc(*ComputeRocCurve(s, y));
  EXPECT_EQ(Auc(*ComputeRocCurve(t1, y)), auc);
  EXPECT_EQ(Auc(*ComputeRocCurve(t2, y)), auc);
}

TEST(AucTest, NullIsHalf) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal;
  std::vector<double> s(10000);
  std::vector<uint8_t> y(10000);
  for (int i = 0; i < 10000; ++i) {
    y[i] = i % 2;
    s[i] = normal(rng);
  }
  EXPECT_NEAR(Auc(*ComputeRocCurve(s, y)), 0.5, 0.02);
}

TEST(TprAtFprTest, NullTracksAlpha) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal;
  const int n = 400000;
  std::vector<double> s(n);
  std::vector<uint8_t> y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = i % 2;
    s[i] = normal(rng);
  }
  // Binomial std of TPR at alpha = 1e-3 with 2e5 members: 7e-5.
  EXPECT_NEAR(TprAtFpr(*ComputeRocCurve(s, y), 1e-3), 1e-3, 3.5e-4);
}

TEST(TprAtFprTest, NonDecreasingInAlpha) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> normal;
  std::vector<double> s(300);
  std::vector<uint8_t> y(300);
  for (int i = 0; i < 300; ++i) {
    y[i] = i % 2;
    s[i] = normal(rng) + y[i];
  }
  RocCurve curve = *ComputeRocCurve(s, y);
  for (TprInterpolation mode :
       {TprInterpolation::kStep, TprInterpolation::kLinear}) {
    double previous = 0.0;
    for (double alpha = 0.0; alpha <= 1.0; alpha += 0.001) {
      const double tpr = TprAtFpr(curve, alpha, mode);
      EXPECT_GE(tpr, previous);
      previous = tpr;
    }
    EXPECT_EQ(TprAtFpr(curve, 1.0, mode), 1.0);
  }
}

TEST(TprAtFprTest, PerfectSeparationAnyAlpha) {
  const std::vector<double> s = {0.1, 0.2, 0.8, 0.9};
  const std::vector<uint8_t> y = {0, 0, 1, 1};
  RocCurve curve = *ComputeRocCurve(s, y);
  for (double alpha : {0.0, 1e-9, 1e-5, 0.3}) {
    EXPECT_EQ(TprAtFpr(curve, alpha), 1.0);
  }
}

TEST(PpvTest, ZeroFprGivesOne) {
  for (double prior : {0.01, 0.1, 0.5, 0.99}) {
    EXPECT_EQ(Ppv(0.0399, 0.0, prior), 1.0);
  }
}

TEST(PpvTest, EqualRatesGivePrior) {
  for (double rate : {1e-5, 0.001, 0.3, 1.0}) {
    for (double prior : {0.01, 0.1, 0.5}) {
      EXPECT_NEAR(Ppv(rate, rate, prior), prior, 1e-12);
    }
  }
  EXPECT_EQ(Ppv(0.2, 0.2, 0.5), 0.5);
}

TEST(PpvTest, FormulaValue) {
  // 0.01 * 0.0399 / (0.01 * 0.0399 + 0.99 * 0.00002), exact rational
  // 399 / 418.8.
  EXPECT_NEAR(Ppv(0.03990, 0.00002, 0.01), 0.952722063, 1e-9);
}

TEST(PpvTest, UndefinedWhenNothingFlagged) {
  EXPECT_TRUE(IsUndefined(Ppv(0.0, 0.0, 0.1)));
  EXPECT_EQ(Ppv(0.0, 0.1, 0.1), 0.0);
}

TEST(PpvTest, Monotone) {
  for (double tpr = 0.05; tpr <= 1.0; tpr += 0.05) {
    double previous = 0.0;
    for (double prior = 0.01; prior < 1.0; prior += 0.01) {
      const double v = Ppv(tpr, 0.01, prior);
      EXPECT_GE(v, previous);
      previous = v;
    }
    EXPECT_GE(Ppv(tpr + 0.01, 0.01, 0.1), Ppv(tpr, 0.01, 0.1));
    EXPECT_LE(Ppv(tpr, 0.02, 0.1), Ppv(tpr, 0.01, 0.1));
  }
}

TEST(AggregateTest, HandValues) {
  const double v[] = {1.0, 2.0, 3.0};
  AggregateStat s = *Aggregate(v);
  EXPECT_EQ(s.mean, 2.0);
  EXPECT_EQ(s.std, 1.0);
  EXPECT_EQ(s.n, 3);
  const double c[] = {4.5};
  s = *Aggregate(c);
  EXPECT_EQ(s.mean, 4.5);
  EXPECT_EQ(s.std, 0.0);
}

TEST(AggregateTest, UndefinedExcludedAndCounted) {
  const double v[] = {1.0, kUndefined, 3.0};
  AggregateStat s = *Aggregate(v);
  EXPECT_EQ(s.n, 2);
  EXPECT_EQ(s.n_undefined, 1);
  EXPECT_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(2.0));
  const double all[] = {kUndefined, kUndefined};
  s = *Aggregate(all);
  EXPECT_EQ(s.n, 0);
  EXPECT_TRUE(IsUndefined(s.mean));
  EXPECT_FALSE(Aggregate({}).ok());
}

struct LossPair {
  double train;
  double test;
  double ratio;  // Published, rounded.
};

TEST(LossRatioTest, PublishedTable) {
  const LossPair pairs[] = {
      {0.0032, 0.2272, 71.0},  {0.1351, 0.2535, 1.88}, {0.1210, 0.1647, 1.36},
      {0.1198, 1.2172, 10.16}, {0.8007, 1.2037, 1.50}, {0.3373, 0.6214, 1.84},
      {0.0448, 0.0614, 1.37},  {0.3145, 0.3175, 1.01}, {0.1096, 0.1861, 1.70},
      {0.2266, 0.2763, 1.22},
  };
  for (const LossPair& p : pairs) {
    EXPECT_NEAR(*LossRatio(p.train, p.test), p.ratio, 0.05) << p.train;
  }
}

TEST(LossRatioTest, IdentityAndErrors) {
  EXPECT_EQ(*LossRatio(0.37, 0.37), 1.0);
  EXPECT_FALSE(LossRatio(0.0, 1.0).ok());
  EXPECT_FALSE(LossRatio(-1.0, 1.0).ok());
  EXPECT_FALSE(LossRatio(1.0, NAN).ok());
}

}  // namespace
}  // namespace mia_audit
