#include "isocx/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isocx {

QuadratureRule::QuadratureRule(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.size() != weights_.size()) {
    throw std::invalid_argument("QuadratureRule: node/weight count mismatch");
  }
}

std::vector<double> QuadratureRule::nodes_on(double a, double b) const {
  std::vector<double> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    out[i] = a + (b - a) * nodes_[i];
  }
  return out;
}

std::vector<double> QuadratureRule::weights_on(double a, double b) const {
  std::vector<double> out(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    out[i] = (b - a) * weights_[i];
  }
  return out;
}

namespace {

constexpr int kMaxPoints = 32;

QuadratureRule build_rule(int n) {
  std::vector<double> nodes(n), weights(n);
  // Roots of P_n on [-1,1] are symmetric; compute the upper half.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        break;
      }
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // map [-1,1] -> [0,1]; the weight halves
    nodes[n - 1 - i] = 0.5 * (1.0 + z);
    nodes[i] = 0.5 * (1.0 - z);
    weights[n - 1 - i] = 0.5 * w;
    weights[i] = 0.5 * w;
  }

  // exactness check for x^(2n-1)
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += weights[i] * std::pow(nodes[i], 2 * n - 1);
  }
  const double exact = 1.0 / (2.0 * n);
  if (std::abs(sum - exact) > 1e-14) {
    throw std::runtime_error("gauss_rule: exactness check failed for n=" + std::to_string(n));
  }
  return QuadratureRule(std::move(nodes), std::move(weights));
}

} // namespace

QuadratureRule gauss_rule(int n) {
  if (n < 1 || n > kMaxPoints) {
    throw std::invalid_argument("gauss_rule: n must be in [1, 32], got " + std::to_string(n));
  }
  static const std::array<QuadratureRule, kMaxPoints> table = [] {
    std::array<QuadratureRule, kMaxPoints> t;
    for (int k = 1; k <= kMaxPoints; ++k) {
      t[k - 1] = build_rule(k);
    }
    return t;
  }();
  return table[n - 1];
}

} // namespace isocx
