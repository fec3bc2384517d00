#pragma once

#include "isocx/convergence.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace isocx::io {

using nlohmann::json;

// Malformed input throws std::invalid_argument with the offending key in
// the message.

/// {"degree": p, "knots": [...]}
json to_json(const KnotVector& kv);
KnotVector knot_vector_from_json(const json& j);

/// {"dim", "role", "conformity", "knots": [knot vectors], "components": [[...], ...]}
json to_json(const CoefficientField& f);
CoefficientField coefficient_field_from_json(const json& j);

/// {"geometry": name, "role", "patches": [{"knots": [...]}, ...], "coefficients": [...]}.
json to_json(const GlobalField& f);
/// The geometry must be the one the field was built on.
GlobalField global_field_from_json(const json& j, const MultipatchGeometry& geom);

/// {"degrees", "knots": [[...], ...], "control_points": [[x, y, z], ...], "weights"}
PatchPtr nurbs_patch_from_json(const json& j);
json to_json(const NurbsPatch& patch);

/// Geometry description with an optional discretisation.
///
///   {"catalog": "cube-surface"}
/// or
///   {"name": "...",
///    "patches": [{"catalog": "flat-square"} |
///                {"affine": {"origin": [..], "columns": [[..], ..]}} |
///                {"nurbs": {...}}, ...],
///    "interfaces": "auto" | [{"patch_a", "side_a", "patch_b", "side_b", "orientation"}, ...],
///    "discretization": {"degrees": [..], "elements": n,
///                       "overrides": [{"patch": j, "knots": [knot vectors]}]}}
///
/// Without "interfaces" the interfaces are detected. A catalog patch entry
/// must name a single-patch geometry.
struct GeometryFile {
  MultipatchGeometry geometry;
  /// Empty when the file carries no discretisation block.
  std::vector<std::vector<KnotVector>> knots;
};

GeometryFile geometry_from_json(const json& j);
GeometryFile load_geometry(const std::filesystem::path& path);

/// Study configuration. "geometry" is a catalog name or an inline geometry
/// object; "geometry_file" names a geometry file relative to `base_dir`. A
/// discretisation block in the geometry supplies the initial knots.
StudyConfig study_config_from_json(const json& j, const std::filesystem::path& base_dir = {});
StudyConfig load_study_config(const std::filesystem::path& path);

/// One row per level: level, h, dofs, one error column per norm, one rate
/// column per norm (empty on the first level, "exact" at rounding level).
void write_study_csv(std::ostream& out, const StudyResult& result);
json study_summary(const StudyResult& result);

/// Rows of (norm, value).
json to_json(const ErrorReport& report);
void write_error_csv(std::ostream& out, const ErrorReport& report);

json read_json_file(const std::filesystem::path& path);

} // namespace isocx::io
