#include "isocx/catalog.hpp"
#include "isocx/geometry.hpp"
#include "isocx/verify.hpp"

#include <gtest/gtest.h>

using namespace isocx;

namespace {

std::vector<std::vector<KnotVector>> knots_for(const MultipatchGeometry& g, int p, std::size_t n) {
  return std::vector<std::vector<KnotVector>>(
      g.size(), std::vector<KnotVector>(static_cast<std::size_t>(g.dim), KnotVector::uniform(p, n)));
}

} // namespace

TEST(VerifyComplex, Defaults2D) {
  VerifyOptions o;
  const auto r = verify_complex(o);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.geometry_name, "flat-square");
  ASSERT_FALSE(r.exactness.empty());
  for (const auto& e : r.exactness) {
    EXPECT_EQ(e.composition, "div(curl)");
    EXPECT_EQ(e.max_abs, 0.0);
    EXPECT_EQ(e.fields, 100);
  }
  for (const auto& c : r.commuting) {
    EXPECT_LT(c.residual, 1e-10) << c.transition;
  }
}

TEST(VerifyComplex, Defaults3D) {
  VerifyOptions o;
  o.dim = 3;
  o.random_fields = 20;
  const auto r = verify_complex(o);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.geometry_name, "unit-cube");
  bool seen_curl_grad = false;
  for (const auto& e : r.exactness) {
    seen_curl_grad = seen_curl_grad || e.composition == "curl(grad)";
    EXPECT_EQ(e.max_abs, 0.0);
  }
  EXPECT_TRUE(seen_curl_grad);
}

TEST(VerifyComplex, CurvedGeometries) {
  for (const std::string name : {"cylinder-shell", "quarter-annulus-nurbs", "cube-surface"}) {
    VerifyOptions o;
    o.geometry = name;
    o.random_fields = 5;
    o.degree = 3;
    const auto r = verify_complex(o);
    EXPECT_TRUE(r.passed) << name;
  }
}

TEST(VerifyComplex, CorruptedDerivativeFails) {
  for (int dim : {2, 3}) {
    VerifyOptions o;
    o.dim = dim;
    o.random_fields = 5;
    o.levels = 1;
    o.corrupt_derivative = true;
    const auto r = verify_complex(o);
    EXPECT_FALSE(r.passed);
    for (const auto& e : r.exactness) {
      EXPECT_GT(e.max_abs, 0.0);
    }
  }
}

TEST(VerifyComplex, OptionValidation) {
  VerifyOptions o;
  o.dim = 4;
  EXPECT_THROW(verify_complex(o), std::invalid_argument);
  o = {};
  o.degree = 0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.geometry = "unit-cube"; // 3D geometry with dim 2
  EXPECT_THROW(verify_complex(o), std::invalid_argument);
  EXPECT_EQ(derivative_names(2), (std::vector<std::string>{"curl", "div"}));
  EXPECT_EQ(derivative_names(3), (std::vector<std::string>{"grad", "curl", "div"}));
}

TEST(InterfaceCheck, CubeSurface) {
  const auto g = geometry_catalog("cube-surface");
  const auto r = check_interfaces(g, knots_for(g, 2, 2), 1, 50);
  EXPECT_TRUE(r.passed) << r.error;
  EXPECT_TRUE(r.error.empty());
  // 12 interfaces, roles 0 and 1, smooth and discrete fields
  EXPECT_EQ(r.jumps.size(), 12u * 2u * 2u);
  for (const auto& j : r.jumps) {
    EXPECT_LT(j.jump, kInterfaceTolerance);
  }
}

TEST(InterfaceCheck, TwoCubes) {
  const auto g = geometry_catalog("two-cubes");
  const auto r = check_interfaces(g, knots_for(g, 2, 2), 2, 20);
  EXPECT_TRUE(r.passed) << r.error;
  EXPECT_EQ(r.jumps.size(), 3u * 2u);
}

TEST(InterfaceCheck, MismatchedKnotsReported) {
  const auto g = geometry_catalog("two-squares");
  auto k = knots_for(g, 2, 2);
  k[1][1] = KnotVector::uniform(2, 3);
  const auto r = check_interfaces(g, k);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.conformity.ok());
  EXPECT_TRUE(r.jumps.empty());
}

TEST(RandomSmoothField, TangentialOnSurfaces) {
  const auto g = geometry_catalog("cube-surface");
  const auto f = random_smooth_field(g, 1, 4);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Vec3 u(0.3, 0.7, 0);
    EXPECT_NEAR(f(j, u).dot(surface_normal(g.patch(j), u)), 0.0, 1e-13);
  }
  EXPECT_THROW(random_smooth_field(g, 2, 0), std::invalid_argument);
}
