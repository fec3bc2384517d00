#include "isocx/catalog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isocx {

namespace {

using std::numbers::pi;

struct Entry {
  const char* name;
  const char* description;
};

constexpr Entry kEntries[] = {
    {"flat-square", "unit square in the plane z = 0"},
    {"cylinder-shell", "quarter cylinder shell of radius 1, kappa = pi/2"},
    {"quarter-annulus-nurbs", "quarter annulus with radii 1 and 2, rational degree (2,1)"},
    {"cube-surface", "boundary of the unit cube, 6 patches, 12 interfaces"},
    {"two-squares", "two unit squares sharing one edge"},
    {"unit-cube", "identity map of [0,1]^3"},
    {"distorted-cube", "smoothly distorted unit cube"},
    {"two-cubes", "two unit cubes sharing one face"},
};

Jacobian matrix32(const Vec3& a, const Vec3& b) {
  Jacobian m(3, 2);
  m.col(0) = a;
  m.col(1) = b;
  return m;
}

Jacobian matrix33(const Vec3& a, const Vec3& b, const Vec3& c) {
  Jacobian m(3, 3);
  m.col(0) = a;
  m.col(1) = b;
  m.col(2) = c;
  return m;
}

PatchPtr affine2(const Vec3& o, const Vec3& a, const Vec3& b) {
  return std::make_shared<AffinePatch>(o, matrix32(a, b));
}

PatchPtr affine3(const Vec3& o, const Vec3& a, const Vec3& b, const Vec3& c) {
  return std::make_shared<AffinePatch>(o, matrix33(a, b, c));
}

MultipatchGeometry single(std::string name, int dim, PatchPtr p) {
  MultipatchGeometry g;
  g.dim = dim;
  g.name = std::move(name);
  g.patches.push_back(std::move(p));
  return g;
}

MultipatchGeometry multi(std::string name, int dim, std::vector<PatchPtr> patches) {
  MultipatchGeometry g;
  g.dim = dim;
  g.name = std::move(name);
  g.interfaces = detect_interfaces(patches);
  g.patches = std::move(patches);
  return g;
}

PatchPtr cylinder_shell() {
  return std::make_shared<AnalyticPatch>(
      2, [](const Vec3& u) { return Vec3(std::cos(pi * u[0] / 2), std::sin(pi * u[0] / 2), u[1]); },
      [](const Vec3& u) {
        return matrix32(Vec3(-pi / 2 * std::sin(pi * u[0] / 2), pi / 2 * std::cos(pi * u[0] / 2), 0.0),
                        Vec3(0.0, 0.0, 1.0));
      },
      "cylinder-shell");
}

PatchPtr quarter_annulus() {
  const double w = std::sqrt(0.5);
  std::vector<Vec3> points;
  std::vector<double> weights;
  const Vec3 base[3] = {Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
  const double wb[3] = {1.0, w, 1.0};
  for (int i = 0; i < 3; ++i) {
    for (double r : {1.0, 2.0}) {
      points.push_back(r * base[i]);
      weights.push_back(wb[i]);
    }
  }
  return std::make_shared<NurbsPatch>(
      std::vector<KnotVector>{KnotVector(2, {0, 0, 0, 1, 1, 1}), KnotVector(1, {0, 0, 1, 1})}, std::move(points),
      std::move(weights));
}

constexpr double kDistortion = 0.1;

PatchPtr distorted_cube() {
  return std::make_shared<AnalyticPatch>(
      3,
      [](const Vec3& u) {
        Vec3 x;
        for (int a = 0; a < 3; ++a) {
          const int b = (a + 1) % 3;
          x[a] = u[a] + kDistortion * std::sin(pi * u[a]) * std::sin(pi * u[b]);
        }
        return x;
      },
      [](const Vec3& u) {
        Jacobian j = Jacobian::Zero(3, 3);
        for (int a = 0; a < 3; ++a) {
          const int b = (a + 1) % 3;
          j(a, a) = 1.0 + kDistortion * pi * std::cos(pi * u[a]) * std::sin(pi * u[b]);
          j(a, b) = kDistortion * pi * std::sin(pi * u[a]) * std::cos(pi * u[b]);
        }
        return j;
      },
      "distorted-cube");
}

std::vector<PatchPtr> cube_faces() {
  const Vec3 ex(1, 0, 0);
  const Vec3 ey(0, 1, 0);
  const Vec3 ez(0, 0, 1);
  const Vec3 o = Vec3::Zero();
  // d_u F x d_v F points out of the cube on every face
  return {
      affine2(o, ey, ex),      // z = 0
      affine2(ez, ex, ey),     // z = 1
      affine2(o, ez, ey),      // x = 0
      affine2(ex, ey, ez),     // x = 1
      affine2(o, ex, ez),      // y = 0
      affine2(ey, ez, ex),     // y = 1
  };
}

} // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& e : kEntries) {
    out.emplace_back(e.name);
  }
  return out;
}

std::string catalog_description(const std::string& name) {
  for (const auto& e : kEntries) {
    if (name == e.name) {
      return e.description;
    }
  }
  throw std::invalid_argument("unknown geometry '" + name + "'");
}

MultipatchGeometry geometry_catalog(const std::string& name) {
  const Vec3 ex(1, 0, 0);
  const Vec3 ey(0, 1, 0);
  const Vec3 ez(0, 0, 1);
  MultipatchGeometry g;
  if (name == "flat-square") {
    g = single(name, 2, affine2(Vec3::Zero(), ex, ey));
  } else if (name == "cylinder-shell") {
    g = single(name, 2, cylinder_shell());
  } else if (name == "quarter-annulus-nurbs") {
    g = single(name, 2, quarter_annulus());
  } else if (name == "cube-surface") {
    g = multi(name, 2, cube_faces());
  } else if (name == "two-squares") {
    g = multi(name, 2, {affine2(Vec3::Zero(), ex, ey), affine2(ex, ex, ey)});
  } else if (name == "unit-cube") {
    g = single(name, 3, affine3(Vec3::Zero(), ex, ey, ez));
  } else if (name == "distorted-cube") {
    g = single(name, 3, distorted_cube());
  } else if (name == "two-cubes") {
    g = multi(name, 3, {affine3(Vec3::Zero(), ex, ey, ez), affine3(ex, ex, ey, ez)});
  } else {
    throw std::invalid_argument("unknown geometry '" + name + "'");
  }
  for (const auto& p : g.patches) {
    validate_patch(*p);
  }
  return g;
}

} // namespace isocx
