#pragma once

#include "isocx/multipatch.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace isocx {

struct VerifyOptions {
  int dim = 2;
  int degree = 2;
  /// Meshes checked: initial_elements * 2^l elements per axis, l < levels.
  int levels = 2;
  std::size_t initial_elements = 2;
  /// Catalog name; empty selects flat-square (2D) or unit-cube (3D).
  std::string geometry;
  std::uint64_t seed = 0;
  int random_fields = 100;
  /// Test hook: perturbs the last derivative of every chain so that the
  /// composition no longer vanishes.
  bool corrupt_derivative = false;

  /// Throws std::invalid_argument.
  void validate() const;
};

struct ExactnessResult {
  std::string composition; // "div(curl)", "curl(grad)"
  int level = 0;
  int fields = 0;
  /// Largest coefficient of the composition; must be exactly 0.
  double max_abs = 0.0;
  bool pass = false;
};

struct CommutingResult {
  std::string transition; // e.g. "grad", "curl", "div"
  int level = 0;
  ProjectorKind kind = ProjectorKind::tilde;
  double residual = 0.0;
  bool pass = false;
};

struct VerifyReport {
  VerifyOptions options;
  std::string geometry_name;
  std::vector<ExactnessResult> exactness;
  std::vector<CommutingResult> commuting;
  bool passed = false;
};

/// Coefficient-level exactness of the reference complex with random dyadic
/// coefficients, and commuting residuals of the trigonometric manufactured
/// fields on the chosen geometry, for both projector kinds.
VerifyReport verify_complex(const VerifyOptions& options);

/// Jump of one field across one interface.
struct InterfaceJumpResult {
  std::size_t interface = 0;
  int role = 0;
  std::string field; // "smooth" or "discrete"
  double jump = 0.0;
  bool pass = false;
};

struct InterfaceCheckReport {
  ConformityReport conformity;
  std::vector<InterfaceJumpResult> jumps;
  /// Set when a global interpolant could not be formed.
  std::string error;
  bool passed = false;
};

/// Conformity of the discretised geometry, then for every role below the
/// top: the interface jumps of the global interpolant of a random smooth
/// field (a scalar, its rotated surface gradient, or an ambient vector
/// field) and of a random global discrete field. Jumps must stay within
/// kInterfaceTolerance.
InterfaceCheckReport check_interfaces(const MultipatchGeometry& geom, const std::vector<std::vector<KnotVector>>& knots,
                                      std::uint64_t seed = 0, int samples = 50);

/// Random smooth physical field of a role below the top, with continuous
/// traces of the kind the role conforms to.
PatchwiseFunction random_smooth_field(const MultipatchGeometry& geom, int role, std::uint64_t seed);

/// Names of the exterior derivatives in order, e.g. {"curl", "div"} in 2D.
std::vector<std::string> derivative_names(int dim);

} // namespace isocx
