#pragma once

#include <cstddef>
#include <vector>

namespace isocx {

/// Gauss-Legendre rule on the reference interval [0,1].
///
/// An n-point rule integrates polynomials up to degree 2n-1 exactly. Nodes are
/// sorted ascending; weights are positive and sum to one.
class QuadratureRule {
public:
  QuadratureRule() = default;
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Nodes mapped affinely onto [a,b].
  std::vector<double> nodes_on(double a, double b) const;
  /// Weights scaled by (b - a).
  std::vector<double> weights_on(double a, double b) const;

  /// Largest degree d such that x^d is integrated exactly.
  int exactness_degree() const { return 2 * static_cast<int>(size()) - 1; }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// n-point Gauss-Legendre rule, 1 <= n <= 32.
/// Nodes come from Newton iteration on the Legendre polynomial P_n; the rule
/// is checked against x^(2n-1) before it is returned.
/// Throws std::invalid_argument for n out of range.
QuadratureRule gauss_rule(int n);

} // namespace isocx
