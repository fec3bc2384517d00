#pragma once

#include "isocx/quasi_interp.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace isocx {

using Vec3 = Eigen::Vector3d;

/// A function on the reference domain. Parametric points and values are
/// padded to three entries; scalar functions return their value in [0].
using RefFunction = std::function<Vec3(const Vec3&)>;

/// Vector layout of a two-dimensional role-1 space.
enum class Conformity {
  divergence, ///< S_{p1,p2-1} x S_{p1-1,p2}, the layout of the complex
  curl,       ///< S_{p1-1,p2} x S_{p1,p2-1}, reached by rotate_2d
};

/// Role-tagged tensor-product spline space of the complex.
///
/// `base` holds one untruncated knot vector per parametric axis; every
/// component factor is either that knot vector or its truncation.
/// Coefficients of a component are ordered lexicographically with the last
/// axis running fastest.
class ComplexSpace {
public:
  ComplexSpace(int dim, int role, std::vector<KnotVector> base, Conformity conformity = Conformity::divergence);

  int dim() const { return dim_; }
  int role() const { return role_; }
  Conformity conformity() const { return conformity_; }
  const std::vector<KnotVector>& base_knots() const { return base_; }

  int num_components() const { return static_cast<int>(factors_.size()); }
  bool truncated(int component, int axis) const;
  const std::vector<SplineSpace1D>& factors(int component) const;
  std::vector<std::size_t> shape(int component) const;
  std::size_t component_dimension(int component) const;
  std::size_t dimension() const;

  bool operator==(const ComplexSpace& other) const;

private:
  int dim_;
  int role_;
  Conformity conformity_;
  std::vector<KnotVector> base_;
  std::vector<std::vector<SplineSpace1D>> factors_;
};

/// Number of vector components stored for a role.
int component_count(int dim, int role);

/// Coefficients of a discrete field, one array per vector component.
struct CoefficientField {
  ComplexSpace space;
  std::vector<Eigen::VectorXd> components;

  CoefficientField(ComplexSpace s, std::vector<Eigen::VectorXd> c);
  static CoefficientField zero(const ComplexSpace& s);

  /// Value at a parametric point; unused entries are 0.
  Vec3 operator()(const Vec3& x) const;
  double component(int c, const Vec3& x) const;

  std::size_t size() const;
  /// All components concatenated.
  Eigen::VectorXd flat() const;
  static CoefficientField from_flat(const ComplexSpace& s, const Eigen::VectorXd& values);
};

/// The graded family of spaces, roles 0..dim.
struct SplineComplex {
  int dim = 2;
  std::vector<KnotVector> knots;
  std::vector<ComplexSpace> spaces;

  const ComplexSpace& role(int k) const;
};

/// Throws std::invalid_argument for dim outside {2,3}, a wrong number of
/// knot vectors, or any degree 0.
SplineComplex build_complex(int dim, std::vector<KnotVector> knots);
SplineComplex build_complex(int dim, const std::vector<int>& degrees, const std::vector<std::vector<double>>& knots);

/// Coefficient-level derivative along `axis` of one tensor component of
/// shape `shape`, with the difference factors `scales`
/// (SplineSpace1D::derivative_scales of that axis).
Eigen::VectorXd axis_derivative(const Eigen::VectorXd& coefficients, std::span<const std::size_t> shape, int axis,
                                std::span<const double> scales);

/// 2D: curl f = (d_y f, -d_x f), role 0 -> role 1.
CoefficientField curl_2d(const CoefficientField& f);
/// 2D: d_x f1 + d_y f2, role 1 -> role 2.
CoefficientField div_2d(const CoefficientField& f);
/// 2D: gradient, role 0 -> role 1 in the curl-conforming layout.
CoefficientField grad_2d(const CoefficientField& f);
/// 2D: rotation by 90 degrees, (f1, f2) -> (-f2, f1), divergence layout to
/// curl layout. `rotate_2d_inverse` undoes it.
CoefficientField rotate_2d(const CoefficientField& f);
CoefficientField rotate_2d_inverse(const CoefficientField& f);

CoefficientField grad_3d(const CoefficientField& f);
CoefficientField curl_3d(const CoefficientField& f);
CoefficientField div_3d(const CoefficientField& f);

/// The exterior derivative from role k to role k+1 (curl/div in 2D,
/// grad/curl/div in 3D). Throws for the top role.
CoefficientField exterior_derivative(const CoefficientField& f);

/// Tensor-product application of per-axis sampled operators to a scalar
/// function: coefficients = (M_0 x ... x M_{d-1}) f(grid).
Eigen::VectorXd apply_tensor(std::span<const SampledOperator* const> ops, const std::function<double(const Vec3&)>& f);

/// Tensorised quasi-interpolants of a complex. Untruncated axes use the
/// value projector, truncated axes the derivative-compatible one.
class ComplexInterpolator {
public:
  explicit ComplexInterpolator(SplineComplex complex, DualFunctionalOptions options = {});

  const SplineComplex& complex() const { return complex_; }
  const DualFunctionalSet& axis(int a) const { return duals_.at(static_cast<std::size_t>(a)); }

  CoefficientField interpolate(int role, const RefFunction& f, ProjectorKind kind = ProjectorKind::tilde) const;
  /// Per-axis operators used for one component.
  std::vector<const SampledOperator*> operators(int role, int component, ProjectorKind kind) const;

private:
  SplineComplex complex_;
  std::vector<DualFunctionalSet> duals_;
};

CoefficientField interpolate(const SplineComplex& complex, int role, const RefFunction& f,
                             ProjectorKind kind = ProjectorKind::tilde);

} // namespace isocx
