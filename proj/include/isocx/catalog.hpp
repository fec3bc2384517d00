#pragma once

#include "isocx/multipatch.hpp"

#include <string>
#include <vector>

namespace isocx {

/// Names accepted by geometry_catalog, in display order.
std::vector<std::string> catalog_names();

/// Built-in test geometries. Single-patch entries come back as a
/// one-patch MultipatchGeometry. Throws std::invalid_argument for unknown
/// names.
///
///   flat-square            (u, v, 0)
///   cylinder-shell         (cos(pi u/2), sin(pi u/2), v), kappa = pi/2
///   quarter-annulus-nurbs  radii 1..2, degree (2,1), exact circular arcs
///   cube-surface           boundary of [0,1]^3, six affine faces with
///                          outward normals, 12 interfaces
///   two-squares            [0,1]^2 and [1,2]x[0,1]
///   unit-cube              identity on [0,1]^3
///   distorted-cube         smooth perturbation of the identity fixing the
///                          boundary faces
///   two-cubes              [0,1]^3 and [1,2]x[0,1]^2
MultipatchGeometry geometry_catalog(const std::string& name);

/// Short description for listings.
std::string catalog_description(const std::string& name);

} // namespace isocx
