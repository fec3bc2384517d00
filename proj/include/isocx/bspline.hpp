#pragma once

#include "isocx/knots.hpp"
#include "isocx/quadrature.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace isocx {

/// Values of the p+1 basis functions b_first .. b_{first+p} at a point.
struct BasisValues {
  std::size_t first = 0;
  std::vector<double> values;
};

/// Values and first derivatives of the active basis functions at a point.
struct BasisDerivatives {
  std::size_t first = 0;
  std::vector<double> values;
  std::vector<double> derivatives;
};

/// The univariate spline space S_p(Xi).
class SplineSpace1D {
public:
  explicit SplineSpace1D(KnotVector knots) : knots_(std::move(knots)) {}
  SplineSpace1D(int degree, std::vector<double> knots) : knots_(degree, std::move(knots)) {}

  const KnotVector& knots() const { return knots_; }
  int degree() const { return knots_.degree(); }
  std::size_t dimension() const { return knots_.dimension(); }

  /// Cox-de Boor evaluation. Right-continuous at interior knots, x = 1
  /// belongs to the last element. Throws std::out_of_range outside [0,1].
  BasisValues eval_basis(double x) const;
  BasisDerivatives eval_basis_derivatives(double x) const;

  /// Value of the single basis function b_i at x.
  double basis_function(std::size_t i, double x) const;

  /// Space of derivatives, S_{p-1}(Xi').
  SplineSpace1D derivative_space() const { return SplineSpace1D(truncate(knots_)); }

  /// Factors p / (xi_{i+p+1} - xi_{i+1}), i = 0..k-2, of the coefficient
  /// derivative c'_i = s_i (c_{i+1} - c_i). Throws std::invalid_argument if
  /// p = 0 or the space is discontinuous somewhere.
  std::vector<double> derivative_scales() const;

  /// Dense (k-1) x k matrix of the derivative map on coefficients.
  Eigen::MatrixXd derivative_matrix() const;

  bool operator==(const SplineSpace1D& other) const { return knots_ == other.knots_; }

private:
  KnotVector knots_;
};

/// Element of S_p(Xi) in the B-spline basis.
struct Spline1D {
  SplineSpace1D space;
  Eigen::VectorXd coefficients;

  Spline1D(SplineSpace1D s, Eigen::VectorXd c);
  static Spline1D zero(const SplineSpace1D& s) {
    return Spline1D(s, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.dimension())));
  }

  double operator()(double x) const;
};

double eval_spline(const Spline1D& f, double x);

/// Coefficient-level derivative onto S_{p-1}(Xi').
Spline1D derivative(const Spline1D& f);

/// The spline F on `target` with F(0) = 0 and derivative(F) = g.
/// Throws std::invalid_argument if g does not live on truncate(target).
Spline1D antiderivative(const Spline1D& g, const SplineSpace1D& target);

/// Integral of f over [0, x] by composite Gauss quadrature on the cells
/// delimited by `breakpoints` (ascending, from 0 to 1); the cell containing
/// x is cut at x and the rule is applied to [left, x].
double cumulative_integral(const std::function<double(double)>& f, double x, const QuadratureRule& rule,
                           std::span<const double> breakpoints);
double cumulative_integral(const std::function<double(double)>& f, double x, const QuadratureRule& rule);

} // namespace isocx
