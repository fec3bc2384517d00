#include "isocx/multipatch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace isocx {

int side_axis(Side s) { return static_cast<int>(s) / 2; }

int side_sign(Side s) { return static_cast<int>(s) % 2 == 0 ? -1 : 1; }

namespace {

const std::array<const char*, 6> kSideNames = {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};

std::vector<int> free_axes(int dim, Side side) {
  std::vector<int> out;
  for (int a = 0; a < dim; ++a) {
    if (a != side_axis(side)) {
      out.push_back(a);
    }
  }
  return out;
}

} // namespace

std::string to_string(Side s) { return kSideNames[static_cast<std::size_t>(s)]; }

Side side_from_string(const std::string& name) {
  for (std::size_t i = 0; i < kSideNames.size(); ++i) {
    if (name == kSideNames[i]) {
      return static_cast<Side>(i);
    }
  }
  throw std::invalid_argument("unknown side '" + name + "'");
}

std::string to_string(Orientation o) { return o == Orientation::same ? "same" : "reversed"; }

Orientation orientation_from_string(const std::string& name) {
  if (name == "same") {
    return Orientation::same;
  }
  if (name == "reversed") {
    return Orientation::reversed;
  }
  throw std::invalid_argument("unknown orientation '" + name + "'");
}

Vec3 side_point(int dim, Side side, double t1, double t2) {
  if (side_axis(side) >= dim) {
    throw std::invalid_argument("side_point: side " + to_string(side) + " does not exist in dimension " +
                                std::to_string(dim));
  }
  Vec3 u = Vec3::Zero();
  const auto fa = free_axes(dim, side);
  u[side_axis(side)] = side_sign(side) < 0 ? 0.0 : 1.0;
  u[fa[0]] = t1;
  if (dim == 3) {
    u[fa[1]] = t2;
  }
  return u;
}

namespace {

// point on side_b matching (t1, t2) on side_a
Vec3 partner_point(int dim, const InterfaceDescriptor& i, double t1, double t2) {
  if (dim == 2) {
    return side_point(2, i.side_b, i.orientation == Orientation::same ? t1 : 1.0 - t1);
  }
  return side_point(3, i.side_b, t1, t2);
}

double side_distance(const PatchMap& a, Side sa, const PatchMap& b, Side sb,
                     const std::function<std::pair<double, double>(double, double)>& map, int n) {
  const int dim = a.dim();
  double dist = 0.0;
  const int n2 = dim == 3 ? n : 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n2; ++j) {
      const double t1 = i / double(n - 1);
      const double t2 = dim == 3 ? j / double(n - 1) : 0.0;
      const auto [s1, s2] = map(t1, t2);
      dist = std::max(dist, (a.value(side_point(dim, sa, t1, t2)) - b.value(side_point(dim, sb, s1, s2))).norm());
    }
  }
  return dist;
}

using ParamMap = std::function<std::pair<double, double>(double, double)>;

std::vector<ParamMap> symmetries(int dim) {
  std::vector<ParamMap> out;
  out.push_back([](double t1, double t2) { return std::pair{t1, t2}; });
  out.push_back([](double t1, double t2) { return std::pair{1.0 - t1, t2}; });
  if (dim == 3) {
    out.push_back([](double t1, double t2) { return std::pair{t1, 1.0 - t2}; });
    out.push_back([](double t1, double t2) { return std::pair{1.0 - t1, 1.0 - t2}; });
    out.push_back([](double t1, double t2) { return std::pair{t2, t1}; });
    out.push_back([](double t1, double t2) { return std::pair{1.0 - t2, t1}; });
    out.push_back([](double t1, double t2) { return std::pair{t2, 1.0 - t1}; });
    out.push_back([](double t1, double t2) { return std::pair{1.0 - t2, 1.0 - t1}; });
  }
  return out;
}

// index of the first symmetry under which the sides coincide, or -1
int match_sides(const PatchMap& a, Side sa, const PatchMap& b, Side sb, double tol, int n) {
  const auto sym = symmetries(a.dim());
  for (std::size_t k = 0; k < sym.size(); ++k) {
    if (side_distance(a, sa, b, sb, sym[k], n) <= tol) {
      return static_cast<int>(k);
    }
  }
  return -1;
}

} // namespace

std::vector<InterfaceDescriptor> detect_interfaces(const std::vector<PatchPtr>& patches, double tol) {
  std::vector<InterfaceDescriptor> out;
  if (patches.empty()) {
    return out;
  }
  const int dim = patches.front()->dim();
  const int nsides = 2 * dim;
  for (std::size_t a = 0; a < patches.size(); ++a) {
    for (std::size_t b = a + 1; b < patches.size(); ++b) {
      for (int sa = 0; sa < nsides; ++sa) {
        for (int sb = 0; sb < nsides; ++sb) {
          const int k = match_sides(*patches[a], static_cast<Side>(sa), *patches[b], static_cast<Side>(sb), tol, 5);
          if (k < 0) {
            continue;
          }
          if (dim == 3 && k != 0) {
            throw ConformityError("detect_interfaces: face " + to_string(static_cast<Side>(sa)) + " of patch " +
                                  std::to_string(a) + " meets patch " + std::to_string(b) +
                                  " with a face orientation other than 'same'");
          }
          out.push_back(InterfaceDescriptor{a, static_cast<Side>(sa), b, static_cast<Side>(sb),
                                            k == 0 ? Orientation::same : Orientation::reversed});
        }
      }
    }
  }
  return out;
}

double interface_distance(const MultipatchGeometry& geom, const InterfaceDescriptor& i, int samples) {
  const auto& a = geom.patch(i.patch_a);
  const auto& b = geom.patch(i.patch_b);
  const ParamMap map = [&](double t1, double t2) {
    if (geom.dim == 2 && i.orientation == Orientation::reversed) {
      return std::pair{1.0 - t1, t2};
    }
    return std::pair{t1, t2};
  };
  return side_distance(a, i.side_a, b, i.side_b, map, samples);
}

bool ConformityReport::ok() const {
  return errors.empty() && std::all_of(interfaces.begin(), interfaces.end(), [](const auto& r) { return r.ok(); });
}

std::string ConformityReport::summary() const {
  std::ostringstream os;
  for (const auto& e : errors) {
    os << "error: " << e << "\n";
  }
  for (const auto& r : interfaces) {
    const auto& d = r.descriptor;
    os << "interface " << r.index << " (" << d.patch_a << ":" << to_string(d.side_a) << " - " << d.patch_b << ":"
       << to_string(d.side_b) << ", " << to_string(d.orientation) << "): parametrisation "
       << (r.parametrisation_match ? "ok" : "FAIL") << " (" << r.parametrisation_distance << "), knots "
       << (r.knot_match ? "ok" : "FAIL") << ", degrees " << (r.degree_match ? "ok" : "FAIL") << ", orientation "
       << (r.inferred_orientation ? to_string(*r.inferred_orientation) : std::string("none"));
    if (!r.message.empty()) {
      os << " [" << r.message << "]";
    }
    os << "\n";
  }
  return os.str();
}

ConformityReport validate_conformity(const MultipatchGeometry& geom, const std::vector<SplineComplex>& complexes) {
  ConformityReport report;
  if (geom.dim != 2 && geom.dim != 3) {
    report.errors.push_back("geometry dimension must be 2 or 3");
    return report;
  }
  for (std::size_t j = 0; j < geom.size(); ++j) {
    if (!geom.patches[j] || geom.patches[j]->dim() != geom.dim) {
      report.errors.push_back("patch " + std::to_string(j) + " has the wrong parametric dimension");
    }
  }
  if (complexes.size() != geom.size()) {
    report.errors.push_back("expected one spline complex per patch");
  }
  for (std::size_t j = 0; j < complexes.size(); ++j) {
    if (complexes[j].dim != geom.dim) {
      report.errors.push_back("spline complex of patch " + std::to_string(j) + " has the wrong dimension");
    }
  }
  if (!report.errors.empty()) {
    return report;
  }
  std::set<std::pair<std::size_t, Side>> used;
  for (std::size_t k = 0; k < geom.interfaces.size(); ++k) {
    const auto& d = geom.interfaces[k];
    InterfaceReport r;
    r.index = k;
    r.descriptor = d;
    if (d.patch_a >= geom.size() || d.patch_b >= geom.size() || side_axis(d.side_a) >= geom.dim ||
        side_axis(d.side_b) >= geom.dim) {
      r.message = "invalid patch index or side";
      report.interfaces.push_back(r);
      continue;
    }
    for (const auto& key : {std::pair{d.patch_a, d.side_a}, std::pair{d.patch_b, d.side_b}}) {
      if (!used.insert(key).second) {
        report.errors.push_back("side " + to_string(key.second) + " of patch " + std::to_string(key.first) +
                                " appears in more than one interface");
      }
    }
    if (d.patch_a == d.patch_b) {
      r.message = "self-interfaces are not supported";
    }
    if (geom.dim == 3 && d.orientation != Orientation::same) {
      r.message = "volumetric interfaces support orientation 'same' only";
    }
    const auto& pa = geom.patch(d.patch_a);
    const auto& pb = geom.patch(d.patch_b);
    r.parametrisation_distance = interface_distance(geom, d);
    r.parametrisation_match = r.parametrisation_distance <= 1e-12;
    const int k_match = match_sides(pa, d.side_a, pb, d.side_b, 1e-12, 9);
    if (k_match == 0) {
      r.inferred_orientation = Orientation::same;
    } else if (k_match == 1 && geom.dim == 2) {
      r.inferred_orientation = Orientation::reversed;
    }
    const auto fa = free_axes(geom.dim, d.side_a);
    const auto fb = free_axes(geom.dim, d.side_b);
    r.degree_match = true;
    r.knot_match = true;
    for (std::size_t q = 0; q < fa.size(); ++q) {
      const auto& ka = complexes[d.patch_a].knots[static_cast<std::size_t>(fa[q])];
      const auto& kb = complexes[d.patch_b].knots[static_cast<std::size_t>(fb[q])];
      if (ka.degree() != kb.degree()) {
        r.degree_match = false;
        r.knot_match = false;
        continue;
      }
      const auto expected = (geom.dim == 2 && d.orientation == Orientation::reversed) ? ka.reversed() : ka;
      if (!expected.matches(kb, kKnotTolerance)) {
        r.knot_match = false;
      }
    }
    if (!r.message.empty()) {
      r.parametrisation_match = false;
    }
    report.interfaces.push_back(r);
  }
  return report;
}

namespace {

// Flat local indices of the trace of component c on `side`, ordered by the
// free axes (first free axis slowest).
std::vector<std::size_t> side_indices(const ComplexSpace& space, int c, Side side, bool reverse_first) {
  const auto shape = space.shape(c);
  const int d = space.dim();
  std::size_t offset = 0;
  for (int i = 0; i < c; ++i) {
    offset += space.component_dimension(i);
  }
  std::array<std::size_t, 3> stride{1, 1, 1};
  for (int a = d - 2; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a) + 1] * shape[static_cast<std::size_t>(a) + 1];
  }
  const auto n = static_cast<std::size_t>(side_axis(side));
  const std::size_t fixed = side_sign(side) < 0 ? 0 : shape[n] - 1;
  const auto fa = free_axes(d, side);
  std::vector<std::size_t> out;
  const std::size_t n1 = shape[static_cast<std::size_t>(fa[0])];
  const std::size_t n2 = d == 3 ? shape[static_cast<std::size_t>(fa[1])] : 1;
  for (std::size_t i = 0; i < n1; ++i) {
    const std::size_t ii = reverse_first ? n1 - 1 - i : i;
    for (std::size_t j = 0; j < n2; ++j) {
      std::size_t idx = offset + fixed * stride[n] + ii * stride[static_cast<std::size_t>(fa[0])];
      if (d == 3) {
        idx += j * stride[static_cast<std::size_t>(fa[1])];
      }
      out.push_back(idx);
    }
  }
  return out;
}

struct SignedUnionFind {
  std::vector<std::size_t> parent;
  std::vector<double> sign; // value(x) = sign[x] * value(parent[x])

  explicit SignedUnionFind(std::size_t n) : parent(n), sign(n, 1.0) { std::iota(parent.begin(), parent.end(), 0); }

  std::pair<std::size_t, double> find(std::size_t x) {
    double s = 1.0;
    std::size_t r = x;
    while (parent[r] != r) {
      s *= sign[r];
      r = parent[r];
    }
    // path compression
    double acc = s;
    std::size_t y = x;
    while (parent[y] != y) {
      const std::size_t next = parent[y];
      const double sy = sign[y];
      parent[y] = r;
      sign[y] = acc;
      acc *= sy;
      y = next;
    }
    return {r, s};
  }

  // value(x) = s * value(y)
  void unite(std::size_t x, std::size_t y, double s) {
    const auto [rx, sx] = find(x);
    const auto [ry, sy] = find(y);
    if (rx == ry) {
      if (sx != s * sy) {
        throw ConformityError("inconsistent orientation signs while identifying interface DOFs");
      }
      return;
    }
    // value(rx) = sx * value(x) = sx * s * sy * value(ry)
    parent[rx] = ry;
    sign[rx] = sx * s * sy;
  }
};

} // namespace

GlobalSpace::GlobalSpace(MultipatchGeometry geom, int role, std::vector<SplineComplex> complexes)
    : geom_(std::move(geom)), role_(role), complexes_(std::move(complexes)) {
  const auto report = validate_conformity(geom_, complexes_);
  if (!report.ok()) {
    throw ConformityError("non-conforming multipatch data:\n" + report.summary());
  }
  if (role_ < 0 || role_ > geom_.dim) {
    throw std::invalid_argument("GlobalSpace: role out of range");
  }
  std::vector<std::size_t> base(complexes_.size() + 1, 0);
  for (std::size_t j = 0; j < complexes_.size(); ++j) {
    base[j + 1] = base[j] + patch_space(j).dimension();
  }
  SignedUnionFind uf(base.back());
  const int d = geom_.dim;
  for (const auto& iface : geom_.interfaces) {
    const auto& sa = patch_space(iface.patch_a);
    const auto& sb = patch_space(iface.patch_b);
    const bool reverse = d == 2 && iface.orientation == Orientation::reversed;
    // (component on a, component on b, sign)
    std::vector<std::tuple<int, int, double>> pairs;
    const int na = side_axis(iface.side_a);
    const int nb = side_axis(iface.side_b);
    const double flux_sign = -static_cast<double>(side_sign(iface.side_a) * side_sign(iface.side_b));
    if (role_ == 0) {
      pairs.emplace_back(0, 0, 1.0);
    } else if (role_ == d - 1) {
      pairs.emplace_back(na, nb, flux_sign);
    } else if (role_ == 1 && d == 3) {
      const auto fa = free_axes(3, iface.side_a);
      const auto fb = free_axes(3, iface.side_b);
      pairs.emplace_back(fa[0], fb[0], 1.0);
      pairs.emplace_back(fa[1], fb[1], 1.0);
    }
    for (const auto& [ca, cb, s] : pairs) {
      const auto ia = side_indices(sa, ca, iface.side_a, false);
      const auto ib = side_indices(sb, cb, iface.side_b, reverse);
      if (ia.size() != ib.size()) {
        throw ConformityError("interface traces have different sizes");
      }
      for (std::size_t q = 0; q < ia.size(); ++q) {
        uf.unite(base[iface.patch_a] + ia[q], base[iface.patch_b] + ib[q], s);
      }
    }
  }
  std::map<std::size_t, std::size_t> numbering;
  maps_.resize(complexes_.size());
  for (std::size_t j = 0; j < complexes_.size(); ++j) {
    const std::size_t n = base[j + 1] - base[j];
    maps_[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [root, s] = uf.find(base[j] + i);
      const auto it = numbering.emplace(root, numbering.size()).first;
      maps_[j][i] = LocalDof{it->second, s};
    }
  }
  dimension_ = numbering.size();
}

std::size_t GlobalSpace::local_dimension_sum() const {
  std::size_t n = 0;
  for (std::size_t j = 0; j < num_patches(); ++j) {
    n += patch_space(j).dimension();
  }
  return n;
}

std::vector<CoefficientField> GlobalSpace::scatter(const Eigen::VectorXd& global) const {
  if (static_cast<std::size_t>(global.size()) != dimension_) {
    throw std::invalid_argument("GlobalSpace::scatter: wrong global length");
  }
  std::vector<CoefficientField> out;
  for (std::size_t j = 0; j < num_patches(); ++j) {
    const auto& map = maps_[j];
    Eigen::VectorXd local(static_cast<Eigen::Index>(map.size()));
    for (std::size_t i = 0; i < map.size(); ++i) {
      local[static_cast<Eigen::Index>(i)] = map[i].sign * global[static_cast<Eigen::Index>(map[i].global)];
    }
    out.push_back(CoefficientField::from_flat(patch_space(j), local));
  }
  return out;
}

Eigen::VectorXd GlobalSpace::gather(const std::vector<CoefficientField>& local, double* max_disagreement) const {
  if (local.size() != num_patches()) {
    throw std::invalid_argument("GlobalSpace::gather: expected one field per patch");
  }
  Eigen::VectorXd global = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension_));
  std::vector<bool> seen(dimension_, false);
  double worst = 0.0;
  for (std::size_t j = 0; j < num_patches(); ++j) {
    if (!(local[j].space == patch_space(j))) {
      throw std::invalid_argument("GlobalSpace::gather: field of patch " + std::to_string(j) + " lives on another space");
    }
    const Eigen::VectorXd flat = local[j].flat();
    const auto& map = maps_[j];
    for (std::size_t i = 0; i < map.size(); ++i) {
      const double v = map[i].sign * flat[static_cast<Eigen::Index>(i)];
      const auto g = static_cast<Eigen::Index>(map[i].global);
      if (!seen[map[i].global]) {
        seen[map[i].global] = true;
        global[g] = v;
      } else {
        worst = std::max(worst, std::abs(v - global[g]) / std::max(1.0, std::abs(global[g])));
      }
    }
  }
  if (max_disagreement != nullptr) {
    *max_disagreement = worst;
  }
  return global;
}

GlobalSpace build_global_space(const MultipatchGeometry& geom, int role, const std::vector<KnotVector>& knots) {
  return build_global_space(geom, role, std::vector<std::vector<KnotVector>>(geom.size(), knots));
}

GlobalSpace build_global_space(const MultipatchGeometry& geom, int role,
                               const std::vector<std::vector<KnotVector>>& knots) {
  if (knots.size() != geom.size()) {
    throw std::invalid_argument("build_global_space: expected knot vectors for every patch");
  }
  std::vector<SplineComplex> complexes;
  for (const auto& kv : knots) {
    complexes.push_back(build_complex(geom.dim, kv));
  }
  return GlobalSpace(geom, role, std::move(complexes));
}

CoefficientField GlobalField::local(std::size_t patch) const { return space->scatter(coefficients).at(patch); }

GlobalField global_interpolant(std::shared_ptr<const GlobalSpace> space, const PatchwiseFunction& f, ProjectorKind kind,
                               double* max_disagreement) {
  std::vector<CoefficientField> local;
  const int role = space->role();
  for (std::size_t j = 0; j < space->num_patches(); ++j) {
    const auto& F = space->geometry().patch(j);
    const ComplexInterpolator interp(space->patch_complex(j));
    local.push_back(interp.interpolate(role, [&](const Vec3& u) { return pullback_value(role, F, u, f(j, u)); }, kind));
  }
  double worst = 0.0;
  Eigen::VectorXd global = space->gather(local, &worst);
  if (max_disagreement != nullptr) {
    *max_disagreement = worst;
  }
  if (worst > kInterfaceTolerance) {
    std::ostringstream os;
    os << "global_interpolant: patch coefficients disagree by " << worst << " on shared DOFs";
    throw ConformityError(os.str());
  }
  return GlobalField{std::move(space), std::move(global)};
}

namespace {

// physical unit vector along the reference gradient of coordinate n
Vec3 coordinate_gradient_direction(const PatchMap& F, const Vec3& u, int n) {
  const Jacobian j = F.jacobian(u);
  Vec3 g;
  if (F.dim() == 2) {
    const Eigen::Matrix2d G = j.transpose() * j;
    g = j * G.inverse().col(n);
  } else {
    const Eigen::Matrix3d m = j;
    g = m.transpose().inverse().col(n);
  }
  return g.normalized();
}

} // namespace

std::optional<double> interface_jump(const MultipatchGeometry& geom, const std::vector<CoefficientField>& fields,
                                     std::size_t interface, int n_samples) {
  if (interface >= geom.interfaces.size()) {
    throw std::out_of_range("interface_jump: unknown interface " + std::to_string(interface));
  }
  if (fields.size() != geom.size()) {
    throw std::invalid_argument("interface_jump: expected one field per patch");
  }
  const int role = fields.front().space.role();
  const int d = geom.dim;
  if (role == d) {
    return std::nullopt;
  }
  const auto& i = geom.interfaces[interface];
  const auto& Fa = geom.patch(i.patch_a);
  const auto& Fb = geom.patch(i.patch_b);
  double jump = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const double t1 = (s + 0.5) / n_samples;
    const double t2 = std::fmod(0.5 + s * 0.6180339887498949, 1.0);
    const Vec3 ua = side_point(d, i.side_a, t1, t2);
    const Vec3 ub = partner_point(d, i, t1, t2);
    const Vec3 fa = pushforward_value(role, Fa, ua, fields[i.patch_a](ua));
    const Vec3 fb = pushforward_value(role, Fb, ub, fields[i.patch_b](ub));
    double j = 0.0;
    if (role == 0) {
      j = std::abs(fa[0] - fb[0]);
    } else if (role == d - 1) {
      const Vec3 na = side_sign(i.side_a) * coordinate_gradient_direction(Fa, ua, side_axis(i.side_a));
      const Vec3 nb = side_sign(i.side_b) * coordinate_gradient_direction(Fb, ub, side_axis(i.side_b));
      j = std::abs(fa.dot(na) + fb.dot(nb));
    } else {
      const Vec3 n = coordinate_gradient_direction(Fa, ua, side_axis(i.side_a));
      j = n.cross(fa - fb).norm();
    }
    jump = std::max(jump, j);
  }
  return jump;
}

std::optional<double> interface_jump(const GlobalField& field, std::size_t interface, int n_samples) {
  return interface_jump(field.space->geometry(), field.locals(), interface, n_samples);
}

std::vector<double> global_commuting_residual(const MultipatchGeometry& geom,
                                              const std::vector<SplineComplex>& complexes,
                                              const std::vector<DerivativePair>& pairs, ProjectorKind kind,
                                              int first_role) {
  if (complexes.size() != geom.size()) {
    throw std::invalid_argument("global_commuting_residual: expected one complex per patch");
  }
  if (first_role < 0 || first_role + static_cast<int>(pairs.size()) > geom.dim) {
    throw std::invalid_argument("global_commuting_residual: too many role pairs");
  }
  std::vector<double> out(pairs.size(), 0.0);
  for (std::size_t j = 0; j < geom.size(); ++j) {
    const auto& F = geom.patch(j);
    const ComplexInterpolator interp(complexes[j]);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const int role = first_role + static_cast<int>(k);
      const auto& p = pairs[k];
      const auto lhs = exterior_derivative(interp.interpolate(
          role, [&](const Vec3& u) { return pullback_value(role, F, u, p.field(j, u)); }, kind));
      const auto rhs = interp.interpolate(
          role + 1, [&](const Vec3& u) { return pullback_value(role + 1, F, u, p.derivative(j, u)); }, kind);
      out[k] = std::max(out[k], (lhs.flat() - rhs.flat()).cwiseAbs().maxCoeff());
    }
  }
  return out;
}

} // namespace isocx
