#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "netrecon/errors.h"
#include "netrecon/metrics.h"
#include "netrecon/random.h"

namespace netrecon {
namespace {

// Reference formula, kept independent of the library code.
double ReferenceMcc(double tp, double tn, double fp, double fn) {
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(den);
}

TEST(Metrics, Contingency) {
  EXPECT_EQ(ContingencyOf({0, 1}, {0, 1}, 4), (Contingency{2, 2, 0, 0}));
  EXPECT_EQ(ContingencyOf({0}, {1}, 2), (Contingency{0, 0, 1, 1}));
  EXPECT_EQ(ContingencyOf({}, {}, 3), (Contingency{0, 3, 0, 0}));
  EXPECT_THROW(ContingencyOf({3}, {}, 3), ParameterError);
}

TEST(Metrics, MccValues) {
  EXPECT_DOUBLE_EQ(Mcc({1, 1, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(Mcc({3, 5, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(Mcc({0, 0, 3, 5}), -1.0);
  EXPECT_DOUBLE_EQ(Mcc({0, 4, 0, 0}), 0.0);
}

TEST(Metrics, MccMatchesReferenceAndIsSymmetric) {
  Rng rng = MakeRng(3);
  std::uniform_int_distribution<long> cell(0, 50);
  for (int k = 0; k < 1000; ++k) {
    const Contingency c{cell(rng), cell(rng), cell(rng), cell(rng)};
    const double m = Mcc(c);
    EXPECT_NEAR(m, ReferenceMcc(c.tp, c.tn, c.fp, c.fn), 1e-12);
    EXPECT_NEAR(m, Mcc({c.tp, c.tn, c.fn, c.fp}), 1e-12);
    EXPECT_GE(m, -1.0);
    EXPECT_LE(m, 1.0);
  }
}

TEST(Metrics, CumulativeMcc) {
  SupportRecords truth;
  truth[{0, 1}] = {0, 1};
  truth[{1, 1}] = {1};
  truth[{0, 2}] = {0, 1};
  truth[{1, 2}] = {0, 1};
  EXPECT_DOUBLE_EQ(CumulativeMcc(truth, truth, 2, 2), 1.0);

  SupportRecords pred = truth;
  pred[{0, 1}] = {0};
  // T = 1 only sees the first step: tp=2, tn=1, fp=0, fn=1.
  EXPECT_NEAR(CumulativeMcc(truth, pred, 2, 1), ReferenceMcc(2, 1, 0, 1), 1e-12);
  // A second, exactly recovered step adds tp=4.
  EXPECT_NEAR(CumulativeMcc(truth, pred, 2, 2), ReferenceMcc(6, 1, 0, 1), 1e-12);

  SupportRecords missing = truth;
  missing.erase({1, 2});
  EXPECT_THROW(CumulativeMcc(truth, missing, 2, 2), ParameterError);
  EXPECT_THROW(CumulativeMcc(truth, truth, 3, 1), ParameterError);
}

TEST(Metrics, PerfectStepNeverLowersAgreement) {
  Rng rng = MakeRng(8);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    SupportRecords truth, pred;
    const int n = 6;
    for (int q = 0; q < n; ++q) {
      for (int t = 1; t <= 3; ++t) {
        VertexSet a, b;
        for (int i = 0; i < n; ++i) {
          if (coin(rng)) a.push_back(i);
          if (coin(rng)) b.push_back(i);
        }
        truth[{q, t}] = a;
        pred[{q, t}] = t == 3 ? a : b;
      }
    }
    Contingency up_to_2, up_to_3;
    for (const auto& [key, set] : truth) {
      const Contingency c = ContingencyOf(set, pred.at(key), n);
      if (key.second <= 2) up_to_2 += c;
      up_to_3 += c;
    }
    EXPECT_GE(up_to_3.tp + up_to_3.tn, up_to_2.tp + up_to_2.tn);
    EXPECT_EQ(up_to_3.fp + up_to_3.fn, up_to_2.fp + up_to_2.fn);
  }
}

}  // namespace
}  // namespace netrecon
