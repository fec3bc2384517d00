#pragma once

#include "isocx/bspline.hpp"

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace isocx {

/// A linear operator on functions realised through point samples:
/// coefficients = matrix * (f(points[0]), ..., f(points[n-1])).
struct SampledOperator {
  std::vector<double> points;
  Eigen::MatrixXd matrix;

  Eigen::VectorXd apply(const std::function<double(double)>& f) const;
  Eigen::Index rows() const { return matrix.rows(); }
};

enum class ProjectorKind {
  plain, ///< Pi: every coefficient from a dual functional
  tilde, ///< endpoint-interpolating variant, first/last coefficients are f(0), f(1)
};

struct DualFunctionalOptions {
  /// Gauss points per element for the dual functionals; 0 selects p+2.
  int quadrature_points = 0;
  /// Gauss points per element for the integral in the derivative-compatible
  /// projector.
  int integration_points = 16;
  /// Raises the per-element count on coarse meshes so that an axis carries
  /// at least this many integration nodes (capped at 32 per element).
  int min_total_integration_points = 64;
};

/// Dual functionals lambda_{i,p} of S_p(Xi) and the quasi-interpolants built
/// from them.
///
/// lambda_i(f) is the i-th coefficient of the L2-orthogonal projection of f,
/// restricted to supp(b_i) = [xi_i, xi_{i+p+1}], onto the span of the
/// B-splines that do not vanish there. The projection reproduces splines,
/// reads f only on supp(b_i), and commutes with the reflection t -> 1 - t.
///
/// The derivative-compatible projectors act on L2 data through
///   Pi^d f = d/dx Pi( x -> int_0^x f ),
/// where the running integral is evaluated with an interpolatory rule built
/// from `integration_points` Gauss nodes per element.
///
/// Immutable once assembled.
class DualFunctionalSet {
public:
  explicit DualFunctionalSet(SplineSpace1D space, DualFunctionalOptions options = {});

  const SplineSpace1D& space() const { return space_; }
  const SplineSpace1D& derivative_space() const { return derivative_space_; }
  int quadrature_points() const { return nq_; }
  int integration_points() const { return nint_; }

  /// Sampling form of lambda_i: element Gauss nodes inside supp(b_i).
  double lambda(std::size_t i, const std::function<double(double)>& f) const;
  /// Local support interval read by lambda_i.
  Interval lambda_support(std::size_t i) const { return space_.knots().support(i); }

  /// Projector onto S_p(Xi).
  const SampledOperator& value_operator(ProjectorKind kind) const;
  /// Projector onto S_{p-1}(Xi'), Pi^d = d Pi int. Throws for p = 0.
  const SampledOperator& derivative_operator(ProjectorKind kind) const;

  /// Maps samples at derivative_operator().points to x -> int_0^x f at
  /// value_operator().points.
  const Eigen::MatrixXd& integral_matrix() const { return integral_; }

  Spline1D pi(const std::function<double(double)>& f) const;
  Spline1D pi_tilde(const std::function<double(double)>& f) const;
  Spline1D pi_partial(const std::function<double(double)>& f) const;
  Spline1D pi_tilde_partial(const std::function<double(double)>& f) const;

private:
  SplineSpace1D space_;
  SplineSpace1D derivative_space_;
  int nq_ = 0;
  int nint_ = 0;
  Eigen::MatrixXd lambda_rows_;  // k x (#value points), endpoint columns zero
  SampledOperator plain_;
  SampledOperator tilde_;
  Eigen::MatrixXd integral_;
  SampledOperator plain_partial_;
  SampledOperator tilde_partial_;
  bool has_partial_ = false;
};

} // namespace isocx
