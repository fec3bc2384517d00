#pragma once

#include "isocx/analysis.hpp"

#include <string>
#include <vector>

namespace isocx {

/// Ids accepted by manufactured_solution: "trig", "shifted", "rough".
std::vector<std::string> manufactured_ids();

/// Smooth (or, for "rough", finitely smooth) physical fields with their
/// derivative quantities for a role of the complex.
///
///   role 0         sin(pi x) sin(pi y) e^z in 2D; sin(pi x) cos(pi y) e^z in 3D
///   surface 1      push-forward of (sin(pi u) cos(pi v) + u v, cos(pi u) sin(pi v) - u^2)
///   surface 2      cos(pi x) cos(pi y) e^z + x
///   volume 1, 2    trigonometric vector fields with closed-form curl / div
///   volume 3       cos(pi x) cos(pi y) cos(pi z) + x
///
/// "shifted" moves every argument by 0.37 so no field vanishes on the
/// boundary; "rough" multiplies by |x - 1/2|^1.5 (scalar roles and the
/// surface role 1 only).
ExactField manufactured_solution(const std::string& id, int role, const MultipatchGeometry& geom);

/// The field paired with its exterior derivative as a physical field of
/// the next role: curl_G f = grad f x n on surfaces, the stored derivative
/// otherwise. Throws for the top role.
DerivativePair derivative_pair(const ExactField& f, const MultipatchGeometry& geom);

} // namespace isocx
