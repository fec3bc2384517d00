#pragma once

#include "isocx/complex.hpp"
#include "isocx/knots.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace isocx {

/// Raised for singular or otherwise unusable parametrisations.
class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// 3 x d Jacobian without heap allocation.
using Jacobian = Eigen::Matrix<double, 3, Eigen::Dynamic, 0, 3, 3>;

/// F: [0,1]^d -> R^3.
class PatchMap {
public:
  virtual ~PatchMap() = default;
  virtual int dim() const = 0;
  virtual Vec3 value(const Vec3& u) const = 0;
  virtual Jacobian jacobian(const Vec3& u) const = 0;
  virtual std::string description() const = 0;
};

using PatchPtr = std::shared_ptr<const PatchMap>;

/// Closed-form parametrisation.
class AnalyticPatch final : public PatchMap {
public:
  AnalyticPatch(int dim, std::function<Vec3(const Vec3&)> value, std::function<Jacobian(const Vec3&)> jacobian,
                std::string name);
  int dim() const override { return dim_; }
  Vec3 value(const Vec3& u) const override { return value_(u); }
  Jacobian jacobian(const Vec3& u) const override { return jacobian_(u); }
  std::string description() const override { return name_; }

private:
  int dim_;
  std::function<Vec3(const Vec3&)> value_;
  std::function<Jacobian(const Vec3&)> jacobian_;
  std::string name_;
};

/// F(u) = origin + A u with A of size 3 x d.
class AffinePatch final : public PatchMap {
public:
  AffinePatch(Vec3 origin, Jacobian matrix);
  int dim() const override { return static_cast<int>(matrix_.cols()); }
  Vec3 value(const Vec3& u) const override;
  Jacobian jacobian(const Vec3&) const override { return matrix_; }
  std::string description() const override { return "affine"; }
  const Vec3& origin() const { return origin_; }
  const Jacobian& matrix() const { return matrix_; }

private:
  Vec3 origin_;
  Jacobian matrix_;
};

/// Tensor-product NURBS map. Control points and weights are ordered
/// lexicographically with the last axis fastest.
class NurbsPatch final : public PatchMap {
public:
  NurbsPatch(std::vector<KnotVector> knots, std::vector<Vec3> control_points, std::vector<double> weights);
  int dim() const override { return static_cast<int>(knots_.size()); }
  Vec3 value(const Vec3& u) const override;
  Jacobian jacobian(const Vec3& u) const override;
  std::string description() const override { return "nurbs"; }

  const std::vector<KnotVector>& knots() const { return knots_; }
  const std::vector<Vec3>& control_points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

private:
  // value and Jacobian of the rational map
  void evaluate(const Vec3& u, Vec3& x, Jacobian* jac) const;

  std::vector<KnotVector> knots_;
  std::vector<SplineSpace1D> spaces_;
  std::vector<Vec3> points_;
  std::vector<double> weights_;
};

inline constexpr double kMeasureTolerance = 1e-12;

/// kappa = |d_1 F x d_2 F|; throws GeometryError below kMeasureTolerance.
double surface_measure(const PatchMap& F, const Vec3& u);
/// Unit normal d_1 F x d_2 F / kappa.
Vec3 surface_normal(const PatchMap& F, const Vec3& u);
/// det dF of a volumetric map; throws GeometryError unless it exceeds
/// kMeasureTolerance.
double jacobian_determinant(const PatchMap& F, const Vec3& u);
/// kappa for surfaces, det dF for volumes.
double measure(const PatchMap& F, const Vec3& u);

/// Pointwise pull-back of a physical value sitting at F(u).
///   surfaces: k=0 v, k=1 kappa (dF)^+ v, k=2 kappa v
///   volumes:  k=0 v, k=1 dF^T v, k=2 det dF^{-1} v, k=3 det v
/// (dF)^+ = (dF^T dF)^{-1} dF^T is the tangential inverse.
Vec3 pullback_value(int role, const PatchMap& F, const Vec3& u, const Vec3& value);
/// Inverse of pullback_value.
Vec3 pushforward_value(int role, const PatchMap& F, const Vec3& u, const Vec3& reference_value);

/// A physical field on one patch, evaluated at parametric points.
using PatchFunction = std::function<Vec3(const Vec3& u)>;
/// A physical field on R^3.
using AmbientFunction = std::function<Vec3(const Vec3& x)>;

RefFunction pullback_surface(int role, PatchPtr F, PatchFunction f);
PatchFunction pushforward_surface(int role, PatchPtr F, RefFunction f);
RefFunction pullback_volume(int role, PatchPtr F, PatchFunction f);
PatchFunction pushforward_volume(int role, PatchPtr F, RefFunction f);
/// f o F.
PatchFunction restrict_to_patch(PatchPtr F, AmbientFunction f);

/// Checks non-singularity on an n^d tensor grid including the corners.
/// Throws GeometryError on failure.
void validate_patch(const PatchMap& F, int samples_per_axis = 5);

} // namespace isocx
