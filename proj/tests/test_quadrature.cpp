#include "isocx/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace isocx;

TEST(GaussRule, MidpointForOnePoint) {
  const auto r = gauss_rule(1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_DOUBLE_EQ(r.nodes()[0], 0.5);
  EXPECT_DOUBLE_EQ(r.weights()[0], 1.0);
}

TEST(GaussRule, TwoPointNodes) {
  const auto r = gauss_rule(2);
  const double d = 1.0 / (2.0 * std::sqrt(3.0));
  EXPECT_NEAR(r.nodes()[0], 0.5 - d, 1e-15);
  EXPECT_NEAR(r.nodes()[1], 0.5 + d, 1e-15);
  EXPECT_NEAR(r.weights()[0], 0.5, 1e-15);
}

TEST(GaussRule, ExactnessDegree) {
  for (int n = 1; n <= 32; ++n) {
    const auto r = gauss_rule(n);
    const int deg = 2 * n - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      s += r.weights()[i] * std::pow(r.nodes()[i], deg);
    }
    EXPECT_NEAR(s, 1.0 / (deg + 1), 1e-14) << "n = " << n;
    EXPECT_NEAR(std::accumulate(r.weights().begin(), r.weights().end(), 0.0), 1.0, 1e-14);
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_GT(r.weights()[i], 0.0);
      if (i > 0) {
        EXPECT_LT(r.nodes()[i - 1], r.nodes()[i]);
      }
    }
  }
}

TEST(GaussRule, NotExactBeyondDegree) {
  const auto r = gauss_rule(3);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    s += r.weights()[i] * std::pow(r.nodes()[i], 6);
  }
  EXPECT_GT(std::abs(s - 1.0 / 7.0), 1e-8);
}

TEST(GaussRule, MappedInterval) {
  const auto r = gauss_rule(4);
  const auto x = r.nodes_on(2.0, 5.0);
  const auto w = r.weights_on(2.0, 5.0);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i] * x[i] * x[i] * x[i];
  }
  EXPECT_NEAR(s, (std::pow(5.0, 4) - std::pow(2.0, 4)) / 4.0, 1e-12);
}

TEST(GaussRule, RejectsOutOfRange) {
  EXPECT_THROW(gauss_rule(0), std::invalid_argument);
  EXPECT_THROW(gauss_rule(33), std::invalid_argument);
}
