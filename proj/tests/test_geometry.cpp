#include "isocx/catalog.hpp"
#include "isocx/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace isocx;
using std::numbers::pi;

namespace {

std::vector<Vec3> random_points(int dim, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<Vec3> out;
  for (int i = 0; i < n; ++i) {
    out.emplace_back(u(rng), u(rng), dim == 3 ? u(rng) : 0.0);
  }
  return out;
}

Vec3 random_vec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

// central-difference Jacobian of a patch
Jacobian fd_jacobian(const PatchMap& F, const Vec3& u) {
  const double eps = 1e-6;
  Jacobian J(3, F.dim());
  for (int a = 0; a < F.dim(); ++a) {
    Vec3 up = u;
    Vec3 um = u;
    up[a] += eps;
    um[a] -= eps;
    J.col(a) = (F.value(up) - F.value(um)) / (2 * eps);
  }
  return J;
}

// partial derivative of component c of a reference function along axis a
double fd(const RefFunction& f, int c, int a, const Vec3& u) {
  const double eps = 1e-5;
  Vec3 up = u;
  Vec3 um = u;
  up[a] += eps;
  um[a] -= eps;
  return (f(up)[c] - f(um)[c]) / (2 * eps);
}

} // namespace

TEST(Measure, Examples) {
  const auto flat = geometry_catalog("flat-square");
  const auto cyl = geometry_catalog("cylinder-shell");
  Jacobian A(3, 2);
  A << 2, 0, 0, 3, 0, 0;
  const AffinePatch aff(Vec3(1, 1, 1), A);
  for (const auto& u : random_points(2, 20, 1)) {
    EXPECT_NEAR(surface_measure(flat.patch(0), u), 1.0, 1e-14);
    EXPECT_NEAR(surface_measure(cyl.patch(0), u), pi / 2, 1e-13);
    EXPECT_NEAR(surface_measure(aff, u), 6.0, 1e-14);
    EXPECT_NEAR(surface_normal(flat.patch(0), u)[2], 1.0, 1e-14);
  }
}

TEST(Measure, AffineDeterminant) {
  Jacobian A(3, 3);
  A << 2, 1, 0, 0, 3, 0, 1, 0, 0.5;
  const AffinePatch F(Vec3::Zero(), A);
  EXPECT_NEAR(jacobian_determinant(F, Vec3(0.3, 0.4, 0.5)), Eigen::Matrix3d(A).determinant(), 1e-14);
  EXPECT_NEAR(measure(F, Vec3(0.1, 0.9, 0.2)), 3.0, 1e-14);
  EXPECT_THROW(surface_measure(F, Vec3::Zero()), std::invalid_argument);
}

TEST(Measure, DegenerateMapsRejected) {
  Jacobian A(3, 2);
  A << 1, 2, 0, 0, 0, 0;
  const AffinePatch collinear(Vec3::Zero(), A);
  EXPECT_THROW(surface_measure(collinear, Vec3(0.5, 0.5, 0)), GeometryError);
  EXPECT_THROW(validate_patch(collinear), GeometryError);
  Jacobian B(3, 3);
  B << 1, 0, 0, 0, -1, 0, 0, 0, 1;
  EXPECT_THROW(validate_patch(AffinePatch(Vec3::Zero(), B)), GeometryError);
}

TEST(Nurbs, QuarterAnnulusIsExact) {
  const auto g = geometry_catalog("quarter-annulus-nurbs");
  const auto& F = g.patch(0);
  for (const auto& u : random_points(2, 50, 2)) {
    const Vec3 x = F.value(u);
    const double r = std::hypot(x[0], x[1]);
    EXPECT_GE(r, 1.0 - 1e-14);
    EXPECT_LE(r, 2.0 + 1e-14);
    EXPECT_NEAR(x[2], 0.0, 1e-15);
    EXPECT_LT((F.jacobian(u) - fd_jacobian(F, u)).cwiseAbs().maxCoeff(), 1e-7);
  }
  // two boundary edges are the circles of radius 1 and 2
  bool radius[2] = {false, false};
  const std::vector<std::function<Vec3(double)>> edges{[](double t) { return Vec3(t, 0, 0); },
                                                       [](double t) { return Vec3(t, 1, 0); },
                                                       [](double t) { return Vec3(0, t, 0); },
                                                       [](double t) { return Vec3(1, t, 0); }};
  for (const auto& edge : edges) {
    for (int r = 1; r <= 2; ++r) {
      double dev = 0.0;
      for (int i = 0; i <= 20; ++i) {
        const Vec3 x = F.value(edge(i / 20.0));
        dev = std::max(dev, std::abs(std::hypot(x[0], x[1]) - r));
      }
      radius[r - 1] = radius[r - 1] || dev < 1e-14;
    }
  }
  EXPECT_TRUE(radius[0]);
  EXPECT_TRUE(radius[1]);
}

TEST(Nurbs, RejectsBadInput) {
  const std::vector<KnotVector> kv{KnotVector::uniform(1, 1), KnotVector::uniform(1, 1)};
  const std::vector<Vec3> pts{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}};
  EXPECT_NO_THROW(NurbsPatch(kv, pts, {1, 1, 1, 1}));
  EXPECT_THROW(NurbsPatch(kv, pts, {1, 0, 1, 1}), std::invalid_argument);
  EXPECT_THROW(NurbsPatch(kv, pts, {1, -2, 1, 1}), std::invalid_argument);
  EXPECT_THROW(NurbsPatch(kv, pts, {1, 1, 1}), std::invalid_argument);
  EXPECT_THROW(NurbsPatch({KnotVector::uniform(1, 1)}, pts, {1, 1, 1, 1}), std::invalid_argument);
}

TEST(Nurbs, BilinearIsAffine) {
  const std::vector<KnotVector> kv{KnotVector::uniform(1, 1), KnotVector::uniform(1, 1)};
  const NurbsPatch F(kv, {{0, 0, 0}, {0, 2, 0}, {1, 0, 0}, {1, 2, 0}}, {1, 1, 1, 1});
  for (const auto& u : random_points(2, 10, 3)) {
    EXPECT_LT((F.value(u) - Vec3(u[0], 2 * u[1], 0)).norm(), 1e-15);
    EXPECT_NEAR(surface_measure(F, u), 2.0, 1e-14);
  }
}

TEST(Transforms, RoundTrips) {
  std::mt19937_64 rng(4);
  for (const auto& name : catalog_names()) {
    const auto g = geometry_catalog(name);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto& F = g.patch(j);
      for (const auto& u : random_points(g.dim, 200 / static_cast<int>(g.size()), 5 + j)) {
        for (int role = 0; role <= g.dim; ++role) {
          Vec3 v = random_vec(rng);
          if (g.dim == 2 && role == 1) {
            // tangential field
            const Jacobian J = F.jacobian(u);
            v = J * Eigen::Vector2d(v[0], v[1]);
          }
          if (role == 0 || role == g.dim) {
            v[1] = v[2] = 0.0;
          }
          const Vec3 back = pushforward_value(role, F, u, pullback_value(role, F, u, v));
          EXPECT_LT((back - v).norm(), 1e-12 * (1 + v.norm())) << name << " role " << role;
        }
      }
    }
  }
}

TEST(Transforms, CylinderRoleOne) {
  const auto g = geometry_catalog("cylinder-shell");
  const auto& F = g.patch(0);
  for (const auto& u : random_points(2, 10, 6)) {
    const Jacobian J = F.jacobian(u);
    const Vec3 r = pullback_value(1, F, u, J.col(0));
    EXPECT_NEAR(r[0], pi / 2, 1e-13);
    EXPECT_NEAR(r[1], 0.0, 1e-13);
    EXPECT_NEAR(pullback_value(2, F, u, Vec3(1, 0, 0))[0], pi / 2, 1e-13);
  }
}

TEST(Transforms, PiolaDivergence) {
  // div_u (det dF^{-1} v o F) = det dF (div v) o F
  const auto g = geometry_catalog("distorted-cube");
  const PatchPtr F = g.patches[0];
  auto v = [](const Vec3& x) { return Vec3(std::sin(x[0] * x[1]), x[2] * x[2] + x[0], std::cos(x[1] - x[2])); };
  auto div_v = [](const Vec3& x) { return x[1] * std::cos(x[0] * x[1]) + std::sin(x[1] - x[2]); };
  const auto w = pullback_volume(2, F, restrict_to_patch(F, v));
  for (const auto& u : random_points(3, 20, 7)) {
    const double lhs = fd(w, 0, 0, u) + fd(w, 1, 1, u) + fd(w, 2, 2, u);
    EXPECT_NEAR(lhs, jacobian_determinant(*F, u) * div_v(F->value(u)), 1e-7);
  }
}

TEST(Transforms, CovariantCurl) {
  // curl_u (dF^T a o F) = det dF dF^{-1} (curl a) o F
  const auto g = geometry_catalog("distorted-cube");
  const PatchPtr F = g.patches[0];
  auto a = [](const Vec3& x) { return Vec3(x[1] * x[2], std::sin(x[0]), x[0] * x[1] * x[1]); };
  auto curl_a = [](const Vec3& x) { return Vec3(2 * x[0] * x[1], x[1] - x[1] * x[1], std::cos(x[0]) - x[2]); };
  const auto w = pullback_volume(1, F, restrict_to_patch(F, a));
  const auto expected = pullback_volume(2, F, restrict_to_patch(F, curl_a));
  for (const auto& u : random_points(3, 20, 8)) {
    const Vec3 lhs(fd(w, 2, 1, u) - fd(w, 1, 2, u), fd(w, 0, 2, u) - fd(w, 2, 0, u), fd(w, 1, 0, u) - fd(w, 0, 1, u));
    EXPECT_LT((lhs - expected(u)).norm(), 1e-7);
  }
}

TEST(Transforms, SurfaceDivergence) {
  // on the cylinder, div_G v = (div_u (kappa dF^+ v)) / kappa for tangential v
  const auto g = geometry_catalog("cylinder-shell");
  const PatchPtr F = g.patches[0];
  // v = a(u,v) e_theta + b(u,v) e_z with e_theta = dF e1 / (pi/2)
  auto field = [F](const Vec3& u) {
    const Jacobian J = F->jacobian(u);
    return Vec3(std::sin(u[0]) * u[1] * J.col(0) / (pi / 2) + std::cos(u[1]) * J.col(1));
  };
  const auto w = pullback_surface(1, F, field);
  for (const auto& u : random_points(2, 10, 9)) {
    const double div_u = fd(w, 0, 0, u) + fd(w, 1, 1, u);
    // arc length along u is pi/2 per unit
    const double expected = std::cos(u[0]) * u[1] / (pi / 2) - std::sin(u[1]);
    EXPECT_NEAR(div_u / (pi / 2), expected, 1e-7);
  }
}

TEST(Catalog, AllEntriesValidate) {
  const auto names = catalog_names();
  EXPECT_EQ(names.size(), 8u);
  for (const auto& n : names) {
    const auto g = geometry_catalog(n);
    EXPECT_EQ(g.name, n);
    EXPECT_FALSE(catalog_description(n).empty());
    for (const auto& p : g.patches) {
      EXPECT_NO_THROW(validate_patch(*p, 7));
      EXPECT_EQ(p->dim(), g.dim);
    }
  }
  EXPECT_EQ(geometry_catalog("cube-surface").size(), 6u);
  EXPECT_EQ(geometry_catalog("cube-surface").interfaces.size(), 12u);
  EXPECT_THROW(geometry_catalog("torus"), std::invalid_argument);
}

TEST(Catalog, CubeSurfaceNormalsPointOutward) {
  const auto g = geometry_catalog("cube-surface");
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Vec3 u(0.3, 0.6, 0);
    const Vec3 x = g.patch(j).value(u);
    EXPECT_GT(surface_normal(g.patch(j), u).dot(x - Vec3(0.5, 0.5, 0.5)), 0.0) << "face " << j;
  }
}
