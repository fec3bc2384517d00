#pragma once

#include "isocx/multipatch.hpp"

#include <Eigen/Core>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace isocx {

enum class Norm { L2, H1semi, H1, Hdiv, Hcurl };

std::string to_string(Norm n);
Norm norm_from_string(const std::string& name);
/// Whether `n` is defined for fields of this role.
bool norm_applies(Norm n, int dim, int role);

/// A physical field given patchwise, with its derivative quantity:
///   role 0      ambient or tangential gradient (3-vector)
///   surface 1   surface divergence (scalar in [0])
///   volume 1    curl (3-vector)
///   volume 2    divergence (scalar in [0])
/// `derivative` may be empty when only L2 quantities are needed.
struct ExactField {
  int role = 0;
  PatchwiseFunction value;
  PatchwiseFunction derivative;
};

/// Push-forward of discrete patch fields, derivative included, as an
/// ExactField.
ExactField discrete_as_exact(const MultipatchGeometry& geom, const std::vector<CoefficientField>& fields);

struct ErrorReport {
  std::map<Norm, double> values;

  double at(Norm n) const;
  bool has(Norm n) const { return values.count(n) > 0; }
};

/// Gauss points per axis and element used by all norms: max degree + 2.
int quadrature_points_for(const SplineComplex& complex);

/// Errors of patch fields against `exact` in the physical norms, integrated
/// with the surface measure or |det dF|. Throws std::invalid_argument if a
/// norm does not apply to the role or the derivative is missing.
ErrorReport error_report(const MultipatchGeometry& geom, const std::vector<CoefficientField>& fields,
                         const ExactField& exact, const std::vector<Norm>& norms);
double error_norm(const MultipatchGeometry& geom, const std::vector<CoefficientField>& fields,
                  const ExactField& exact, Norm norm);
double error_norm(const GlobalField& field, const ExactField& exact, Norm norm);

/// Inner product matrix of the global basis in the given norm (L2, H1,
/// Hdiv or Hcurl), assembled with the physical measure.
Eigen::MatrixXd assemble_gram(const GlobalSpace& space, Norm norm);
/// Right-hand side (f, b_i) in the same inner product.
Eigen::VectorXd assemble_rhs(const GlobalSpace& space, const ExactField& f, Norm norm);

struct ProjectionResult {
  GlobalField field;
  /// max_i |(f - P f, b_i)| after the solve.
  double residual = 0.0;
};

/// Orthogonal projection in the given norm, dense Cholesky solve. Throws
/// std::runtime_error if the Gram matrix is not positive definite.
ProjectionResult orthogonal_project(std::shared_ptr<const GlobalSpace> space, const ExactField& f, Norm norm);
GlobalField l2_project(std::shared_ptr<const GlobalSpace> space, const ExactField& f);

} // namespace isocx
