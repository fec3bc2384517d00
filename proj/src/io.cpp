#include "isocx/io.hpp"

#include "isocx/catalog.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace isocx::io {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw std::invalid_argument(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return require(j, key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  return get<T>(j, key);
}

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() < 1 || j.size() > 3) {
    throw std::invalid_argument("expected a point with 1 to 3 coordinates");
  }
  Vec3 v = Vec3::Zero();
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json vec_to_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vec_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<KnotVector> knot_list_from_json(const json& j) {
  if (!j.is_array()) {
    throw std::invalid_argument("expected a list of knot vectors");
  }
  std::vector<KnotVector> out;
  for (const auto& k : j) {
    out.push_back(knot_vector_from_json(k));
  }
  return out;
}

json knot_list_to_json(const std::vector<KnotVector>& knots) {
  json out = json::array();
  for (const auto& kv : knots) {
    out.push_back(to_json(kv));
  }
  return out;
}

PatchPtr patch_from_json(const json& j) {
  if (j.contains("catalog")) {
    const auto name = get<std::string>(j, "catalog");
    auto g = geometry_catalog(name);
    if (g.size() != 1) {
      throw std::invalid_argument("catalog patch '" + name + "' has " + std::to_string(g.size()) + " patches");
    }
    return g.patches.front();
  }
  if (j.contains("affine")) {
    const auto& a = j.at("affine");
    const Vec3 origin = vec3_from_json(require(a, "origin"));
    const auto& cols = require(a, "columns");
    if (!cols.is_array() || cols.size() < 2 || cols.size() > 3) {
      throw std::invalid_argument("affine patch needs 2 or 3 columns");
    }
    Jacobian m(3, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      m.col(static_cast<Eigen::Index>(c)) = vec3_from_json(cols[c]);
    }
    return std::make_shared<AffinePatch>(origin, m);
  }
  if (j.contains("nurbs")) {
    return nurbs_patch_from_json(j.at("nurbs"));
  }
  throw std::invalid_argument("patch entry needs one of 'catalog', 'affine' or 'nurbs'");
}

InterfaceDescriptor interface_from_json(const json& j) {
  InterfaceDescriptor d;
  d.patch_a = get<std::size_t>(j, "patch_a");
  d.side_a = side_from_string(get<std::string>(j, "side_a"));
  d.patch_b = get<std::size_t>(j, "patch_b");
  d.side_b = side_from_string(get<std::string>(j, "side_b"));
  d.orientation = orientation_from_string(get_or<std::string>(j, "orientation", "same"));
  return d;
}

std::vector<std::vector<KnotVector>> discretization_from_json(const json& j, std::size_t n_patches, int dim) {
  const auto degrees = get<std::vector<int>>(j, "degrees");
  if (static_cast<int>(degrees.size()) != dim) {
    throw std::invalid_argument("discretization: expected " + std::to_string(dim) + " degrees");
  }
  const auto n = get_or<std::size_t>(j, "elements", 2);
  std::vector<KnotVector> base;
  for (int p : degrees) {
    base.push_back(KnotVector::uniform(p, n));
  }
  std::vector<std::vector<KnotVector>> out(n_patches, base);
  if (j.contains("overrides")) {
    for (const auto& o : j.at("overrides")) {
      const auto patch = get<std::size_t>(o, "patch");
      if (patch >= n_patches) {
        throw std::invalid_argument("discretization: override for unknown patch " + std::to_string(patch));
      }
      auto kv = knot_list_from_json(require(o, "knots"));
      if (static_cast<int>(kv.size()) != dim) {
        throw std::invalid_argument("discretization: override needs " + std::to_string(dim) + " knot vectors");
      }
      out[patch] = std::move(kv);
    }
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

json to_json(const KnotVector& kv) { return json{{"degree", kv.degree()}, {"knots", kv.knots()}}; }

KnotVector knot_vector_from_json(const json& j) {
  return KnotVector(get<int>(j, "degree"), get<std::vector<double>>(j, "knots"));
}

json to_json(const CoefficientField& f) {
  json comps = json::array();
  for (const auto& c : f.components) {
    comps.push_back(vec_to_json(c));
  }
  return json{{"dim", f.space.dim()},
              {"role", f.space.role()},
              {"conformity", f.space.conformity() == Conformity::divergence ? "divergence" : "curl"},
              {"knots", knot_list_to_json(f.space.base_knots())},
              {"components", comps}};
}

CoefficientField coefficient_field_from_json(const json& j) {
  const auto conf = get_or<std::string>(j, "conformity", "divergence");
  if (conf != "divergence" && conf != "curl") {
    throw std::invalid_argument("unknown conformity '" + conf + "'");
  }
  ComplexSpace space(get<int>(j, "dim"), get<int>(j, "role"), knot_list_from_json(require(j, "knots")),
                     conf == "curl" ? Conformity::curl : Conformity::divergence);
  const auto& comps = require(j, "components");
  if (!comps.is_array() || static_cast<int>(comps.size()) != space.num_components()) {
    throw std::invalid_argument("components: expected " + std::to_string(space.num_components()) + " arrays");
  }
  std::vector<Eigen::VectorXd> values;
  for (int c = 0; c < space.num_components(); ++c) {
    values.push_back(vec_from_json(comps[static_cast<std::size_t>(c)]));
    if (static_cast<std::size_t>(values.back().size()) != space.component_dimension(c)) {
      throw std::invalid_argument("components: component " + std::to_string(c) + " should have " +
                                  std::to_string(space.component_dimension(c)) + " coefficients");
    }
  }
  return CoefficientField(std::move(space), std::move(values));
}

json to_json(const GlobalField& f) {
  json patches = json::array();
  for (std::size_t j = 0; j < f.space->num_patches(); ++j) {
    patches.push_back(json{{"knots", knot_list_to_json(f.space->patch_complex(j).knots)}});
  }
  return json{{"geometry", f.space->geometry().name},
              {"role", f.space->role()},
              {"patches", patches},
              {"coefficients", vec_to_json(f.coefficients)}};
}

GlobalField global_field_from_json(const json& j, const MultipatchGeometry& geom) {
  const auto& patches = require(j, "patches");
  if (!patches.is_array() || patches.size() != geom.size()) {
    throw std::invalid_argument("patches: expected " + std::to_string(geom.size()) + " entries");
  }
  std::vector<std::vector<KnotVector>> knots;
  for (const auto& p : patches) {
    knots.push_back(knot_list_from_json(require(p, "knots")));
  }
  auto space = std::make_shared<const GlobalSpace>(build_global_space(geom, get<int>(j, "role"), knots));
  GlobalField out{space, vec_from_json(require(j, "coefficients"))};
  if (static_cast<std::size_t>(out.coefficients.size()) != space->dimension()) {
    throw std::invalid_argument("coefficients: expected " + std::to_string(space->dimension()) + " values");
  }
  return out;
}

PatchPtr nurbs_patch_from_json(const json& j) {
  const auto degrees = get<std::vector<int>>(j, "degrees");
  const auto& knots = require(j, "knots");
  if (!knots.is_array() || knots.size() != degrees.size()) {
    throw std::invalid_argument("nurbs: one knot array per degree required");
  }
  std::vector<KnotVector> kv;
  for (std::size_t a = 0; a < degrees.size(); ++a) {
    kv.emplace_back(degrees[a], knots[a].get<std::vector<double>>());
  }
  std::vector<Vec3> points;
  for (const auto& p : require(j, "control_points")) {
    points.push_back(vec3_from_json(p));
  }
  std::vector<double> weights = j.contains("weights") ? get<std::vector<double>>(j, "weights")
                                                      : std::vector<double>(points.size(), 1.0);
  return std::make_shared<NurbsPatch>(std::move(kv), std::move(points), std::move(weights));
}

json to_json(const NurbsPatch& patch) {
  json degrees = json::array();
  json knots = json::array();
  for (const auto& kv : patch.knots()) {
    degrees.push_back(kv.degree());
    knots.push_back(kv.knots());
  }
  json points = json::array();
  for (const auto& p : patch.control_points()) {
    points.push_back({p[0], p[1], p[2]});
  }
  return json{{"degrees", degrees}, {"knots", knots}, {"control_points", points}, {"weights", patch.weights()}};
}

GeometryFile geometry_from_json(const json& j) {
  GeometryFile out;
  if (j.contains("catalog")) {
    out.geometry = geometry_catalog(get<std::string>(j, "catalog"));
  } else {
    const auto& patches = require(j, "patches");
    if (!patches.is_array() || patches.empty()) {
      throw std::invalid_argument("patches: expected a non-empty list");
    }
    MultipatchGeometry g;
    g.name = get_or<std::string>(j, "name", "custom");
    for (const auto& p : patches) {
      g.patches.push_back(patch_from_json(p));
    }
    g.dim = g.patches.front()->dim();
    for (const auto& p : g.patches) {
      if (p->dim() != g.dim) {
        throw std::invalid_argument("patches: mixed parametric dimensions");
      }
      validate_patch(*p);
    }
    if (!j.contains("interfaces") || (j.at("interfaces").is_string() && j.at("interfaces") == "auto")) {
      g.interfaces = detect_interfaces(g.patches);
    } else {
      for (const auto& i : j.at("interfaces")) {
        auto d = interface_from_json(i);
        if (d.patch_a >= g.size() || d.patch_b >= g.size()) {
          throw std::invalid_argument("interfaces: patch index out of range");
        }
        g.interfaces.push_back(d);
      }
    }
    out.geometry = std::move(g);
  }
  if (j.contains("discretization")) {
    out.knots = discretization_from_json(j.at("discretization"), out.geometry.size(), out.geometry.dim);
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open '" + path.string() + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

GeometryFile load_geometry(const std::filesystem::path& path) { return geometry_from_json(read_json_file(path)); }

StudyConfig study_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) {
    throw std::invalid_argument("study config must be a JSON object");
  }
  StudyConfig c;
  std::optional<GeometryFile> file;
  if (j.contains("geometry_file")) {
    file = load_geometry(base_dir / get<std::string>(j, "geometry_file"));
  } else if (j.contains("geometry") && j.at("geometry").is_object()) {
    file = geometry_from_json(j.at("geometry"));
  } else {
    c.geometry = get_or<std::string>(j, "geometry", c.geometry);
  }
  if (file) {
    c.geometry = file->geometry.name;
    c.geometry_data = std::make_shared<const MultipatchGeometry>(file->geometry);
    c.initial_knots = file->knots;
  }
  c.role = get_or<int>(j, "role", c.role);
  c.degrees = get_or<std::vector<int>>(j, "degrees", c.degrees);
  c.initial_elements = get_or<std::size_t>(j, "initial_elements", c.initial_elements);
  if (j.contains("initial_knots")) {
    c.initial_knots.clear();
    for (const auto& patch : j.at("initial_knots")) {
      c.initial_knots.push_back(knot_list_from_json(patch));
    }
  }
  c.levels = get_or<int>(j, "levels", c.levels);
  c.solution = get_or<std::string>(j, "solution", c.solution);
  if (j.contains("norms")) {
    for (const auto& n : get<std::vector<std::string>>(j, "norms")) {
      c.norms.push_back(norm_from_string(n));
    }
  }
  c.projector = projector_from_string(get_or<std::string>(j, "projector", to_string(c.projector)));
  if (j.contains("expected_orders")) {
    for (const auto& [k, v] : j.at("expected_orders").items()) {
      c.expected_orders[norm_from_string(k)] = v.get<double>();
    }
  }
  c.tolerance = get_or<double>(j, "tolerance", c.tolerance);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.commuting_check = get_or<bool>(j, "commuting_check", c.commuting_check);
  c.validate();
  return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  return study_config_from_json(read_json_file(path), path.parent_path());
}

void write_study_csv(std::ostream& out, const StudyResult& result) {
  std::vector<Norm> norms;
  for (const auto& v : result.verdicts) {
    norms.push_back(v.norm);
  }
  out << "level,h,dofs";
  for (Norm n : norms) {
    out << ",err_" << to_string(n);
  }
  for (Norm n : norms) {
    out << ",rate_" << to_string(n);
  }
  out << "\n";
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    out << r.level << "," << format_number(r.h) << "," << r.dofs;
    for (Norm n : norms) {
      out << "," << format_number(r.errors.at(n));
    }
    for (Norm n : norms) {
      out << ",";
      if (i > 0) {
        const double rate = result.rates.at(n)[i - 1];
        out << (std::isfinite(rate) ? format_number(rate) : "exact");
      }
    }
    out << "\n";
  }
}

json study_summary(const StudyResult& result) {
  const auto& c = result.config;
  json verdicts = json::array();
  for (const auto& v : result.verdicts) {
    verdicts.push_back(json{{"norm", to_string(v.norm)},
                            {"expected", v.expected},
                            {"observed", number_or_null(v.observed)},
                            {"exact", v.exact},
                            {"asserted", v.asserted},
                            {"pass", v.pass}});
  }
  json levels = json::array();
  for (const auto& r : result.records) {
    json errors;
    for (const auto& [n, e] : r.errors) {
      errors[to_string(n)] = e;
    }
    json row{{"level", r.level}, {"h", r.h}, {"dofs", r.dofs}, {"errors", errors}};
    if (r.commuting_residual) {
      row["commuting_residual"] = *r.commuting_residual;
    }
    levels.push_back(row);
  }
  return json{{"geometry", result.geometry_name},
              {"role", c.role},
              {"solution", c.solution},
              {"projector", to_string(c.projector)},
              {"levels", c.levels},
              {"tolerance", c.tolerance},
              {"seed", c.seed},
              {"records", levels},
              {"verdicts", verdicts},
              {"max_commuting_residual", result.max_commuting_residual},
              {"passed", result.passed}};
}

json to_json(const ErrorReport& report) {
  json rows = json::array();
  for (const auto& [n, v] : report.values) {
    rows.push_back(json{{"norm", to_string(n)}, {"value", v}});
  }
  return rows;
}

void write_error_csv(std::ostream& out, const ErrorReport& report) {
  out << "norm,value\n";
  for (const auto& [n, v] : report.values) {
    out << to_string(n) << "," << format_number(v) << "\n";
  }
}

} // namespace isocx::io
