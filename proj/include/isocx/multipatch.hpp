#pragma once

#include "isocx/complex.hpp"
#include "isocx/geometry.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace isocx {

/// Raised when patch data does not fit together across an interface.
class ConformityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Side { xmin, xmax, ymin, ymax, zmin, zmax };
enum class Orientation { same, reversed };

int side_axis(Side s);
/// -1 on min sides, +1 on max sides.
int side_sign(Side s);
std::string to_string(Side s);
Side side_from_string(const std::string& name);
std::string to_string(Orientation o);
Orientation orientation_from_string(const std::string& name);

/// Parametric point on `side` for free coordinates t (in increasing axis
/// order).
Vec3 side_point(int dim, Side side, double t1, double t2 = 0.0);

/// Full side of patch_a glued to full side of patch_b. The free coordinate
/// t on side_a meets t (same) or 1 - t (reversed) on side_b. Volumetric
/// interfaces support `same` only, with both free coordinates aligned in
/// increasing axis order.
struct InterfaceDescriptor {
  std::size_t patch_a = 0;
  Side side_a = Side::xmax;
  std::size_t patch_b = 0;
  Side side_b = Side::xmin;
  Orientation orientation = Orientation::same;

  bool operator==(const InterfaceDescriptor&) const = default;
};

struct MultipatchGeometry {
  int dim = 2;
  std::string name;
  std::vector<PatchPtr> patches;
  std::vector<InterfaceDescriptor> interfaces;

  std::size_t size() const { return patches.size(); }
  const PatchMap& patch(std::size_t j) const { return *patches.at(j); }
};

/// Finds full-side matches between distinct patches by sampling.
std::vector<InterfaceDescriptor> detect_interfaces(const std::vector<PatchPtr>& patches, double tol = 1e-12);

/// Largest distance between F_a and F_b at `samples` points of the interface.
double interface_distance(const MultipatchGeometry& geom, const InterfaceDescriptor& iface, int samples = 17);

struct InterfaceReport {
  std::size_t index = 0;
  InterfaceDescriptor descriptor;
  bool parametrisation_match = false;
  double parametrisation_distance = 0.0;
  bool knot_match = false;
  bool degree_match = false;
  std::optional<Orientation> inferred_orientation;
  std::string message;

  bool ok() const {
    return parametrisation_match && knot_match && degree_match && inferred_orientation == descriptor.orientation;
  }
};

struct ConformityReport {
  std::vector<InterfaceReport> interfaces;
  std::vector<std::string> errors; // structural problems not tied to one interface

  bool ok() const;
  std::string summary() const;
};

/// Per-interface checks; never throws on non-conforming input.
ConformityReport validate_conformity(const MultipatchGeometry& geom, const std::vector<SplineComplex>& complexes);

/// Scalar or vector physical field given patchwise: the value at F_j(u).
using PatchwiseFunction = std::function<Vec3(std::size_t patch, const Vec3& u)>;

/// Patch-local coefficient position of a global DOF.
struct LocalDof {
  std::size_t global = 0;
  double sign = 1.0;
};

/// Globally conforming space of one role over a multipatch geometry.
class GlobalSpace {
public:
  /// Throws ConformityError if validate_conformity fails.
  GlobalSpace(MultipatchGeometry geom, int role, std::vector<SplineComplex> complexes);

  const MultipatchGeometry& geometry() const { return geom_; }
  int role() const { return role_; }
  int dim() const { return geom_.dim; }
  std::size_t num_patches() const { return complexes_.size(); }
  const SplineComplex& patch_complex(std::size_t j) const { return complexes_.at(j); }
  const ComplexSpace& patch_space(std::size_t j) const { return complexes_.at(j).role(role_); }

  std::size_t dimension() const { return dimension_; }
  std::size_t local_dimension_sum() const;
  /// Local flat index (components concatenated) to global DOF and sign.
  const std::vector<LocalDof>& dof_map(std::size_t patch) const { return maps_.at(patch); }

  /// Global coefficients to per-patch fields.
  std::vector<CoefficientField> scatter(const Eigen::VectorXd& global) const;
  /// Per-patch fields to global coefficients, taking the first contributor
  /// of every DOF. `max_disagreement`, if given, receives the largest
  /// difference between contributors of one DOF.
  Eigen::VectorXd gather(const std::vector<CoefficientField>& local, double* max_disagreement = nullptr) const;

private:
  MultipatchGeometry geom_;
  int role_;
  std::vector<SplineComplex> complexes_;
  std::vector<std::vector<LocalDof>> maps_;
  std::size_t dimension_ = 0;
};

/// Same knot vectors on every patch.
GlobalSpace build_global_space(const MultipatchGeometry& geom, int role, const std::vector<KnotVector>& knots);
/// One list of knot vectors per patch.
GlobalSpace build_global_space(const MultipatchGeometry& geom, int role,
                               const std::vector<std::vector<KnotVector>>& knots);

struct GlobalField {
  std::shared_ptr<const GlobalSpace> space;
  Eigen::VectorXd coefficients;

  CoefficientField local(std::size_t patch) const;
  std::vector<CoefficientField> locals() const { return space->scatter(coefficients); }
};

inline constexpr double kInterfaceTolerance = 1e-11;

/// Patchwise pull-back followed by the tilde interpolant. The two sides of
/// every identified DOF are computed independently; disagreement beyond
/// kInterfaceTolerance (relative to the coefficient size) raises
/// ConformityError.
GlobalField global_interpolant(std::shared_ptr<const GlobalSpace> space, const PatchwiseFunction& f,
                               ProjectorKind kind = ProjectorKind::tilde, double* max_disagreement = nullptr);

/// Physical jump across one interface: value jump for role 0, normal-trace
/// jump for divergence-conforming roles, tangential-trace jump for the
/// volumetric role 1. nullopt for the top role.
std::optional<double> interface_jump(const GlobalField& field, std::size_t interface, int n_samples = 50);
/// Same for independent patch fields.
std::optional<double> interface_jump(const MultipatchGeometry& geom, const std::vector<CoefficientField>& fields,
                                     std::size_t interface, int n_samples = 50);

/// A physical field and its exterior derivative (surface curl / div, or
/// grad / curl / div in volumes), patchwise.
struct DerivativePair {
  PatchwiseFunction field;
  PatchwiseFunction derivative;
};

/// Max over patches of |D(Pi f) - Pi(D f)| in the coefficients, one entry
/// per role transition; pairs[k] carries a field of role first_role + k
/// and its derivative.
std::vector<double> global_commuting_residual(const MultipatchGeometry& geom,
                                              const std::vector<SplineComplex>& complexes,
                                              const std::vector<DerivativePair>& pairs,
                                              ProjectorKind kind = ProjectorKind::tilde, int first_role = 0);

} // namespace isocx
