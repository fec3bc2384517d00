#include "isocx/catalog.hpp"
#include "isocx/manufactured.hpp"
#include "isocx/multipatch.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace isocx;

namespace {

std::vector<KnotVector> uniform_knots(int dim, int p, std::size_t n) {
  return std::vector<KnotVector>(static_cast<std::size_t>(dim), KnotVector::uniform(p, n));
}

std::vector<SplineComplex> complexes_for(const MultipatchGeometry& g, const std::vector<KnotVector>& kv) {
  return std::vector<SplineComplex>(g.size(), build_complex(g.dim, kv));
}

Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) {
    x = u(rng);
  }
  return v;
}

} // namespace

TEST(Sides, Helpers) {
  EXPECT_EQ(side_axis(Side::ymax), 1);
  EXPECT_EQ(side_sign(Side::zmin), -1);
  EXPECT_EQ(side_from_string(to_string(Side::xmax)), Side::xmax);
  EXPECT_EQ(orientation_from_string("reversed"), Orientation::reversed);
  EXPECT_THROW(side_from_string("left"), std::invalid_argument);
  EXPECT_EQ(side_point(2, Side::xmax, 0.3), Vec3(1, 0.3, 0));
  EXPECT_EQ(side_point(3, Side::ymin, 0.2, 0.7), Vec3(0.2, 0, 0.7));
}

TEST(Interfaces, Detection) {
  const auto two = geometry_catalog("two-squares");
  ASSERT_EQ(two.interfaces.size(), 1u);
  const auto& i = two.interfaces[0];
  EXPECT_EQ(i.side_a, Side::xmax);
  EXPECT_EQ(i.side_b, Side::xmin);
  EXPECT_EQ(i.orientation, Orientation::same);
  EXPECT_LT(interface_distance(two, i), 1e-14);

  const auto cube = geometry_catalog("cube-surface");
  EXPECT_EQ(cube.interfaces.size(), 12u);
  for (const auto& f : cube.interfaces) {
    EXPECT_LT(interface_distance(cube, f), 1e-14);
  }
  EXPECT_EQ(geometry_catalog("two-cubes").interfaces.size(), 1u);
  EXPECT_TRUE(geometry_catalog("flat-square").interfaces.empty());
}

TEST(GlobalSpace, Dimensions) {
  const auto two = geometry_catalog("two-squares");
  const auto kv = uniform_knots(2, 2, 1);
  EXPECT_EQ(build_global_space(two, 0, kv).dimension(), 15u);
  // one shared edge carries 2 normal-trace DOFs
  EXPECT_EQ(build_global_space(two, 1, kv).dimension(), 12u + 12u - 2u);
  const auto top = build_global_space(two, 2, kv);
  EXPECT_EQ(top.dimension(), top.local_dimension_sum());

  // vertices - edges + faces of the cube boundary
  const auto cube = geometry_catalog("cube-surface");
  const auto p1 = uniform_knots(2, 1, 1);
  EXPECT_EQ(build_global_space(cube, 0, p1).dimension(), 8u);
  EXPECT_EQ(build_global_space(cube, 1, p1).dimension(), 12u);
  EXPECT_EQ(build_global_space(cube, 2, p1).dimension(), 6u);
  for (int p = 1; p <= 3; ++p) {
    const auto kv2 = uniform_knots(2, p, 2);
    const long chi = static_cast<long>(build_global_space(cube, 0, kv2).dimension()) -
                     static_cast<long>(build_global_space(cube, 1, kv2).dimension()) +
                     static_cast<long>(build_global_space(cube, 2, kv2).dimension());
    EXPECT_EQ(chi, 2) << "p=" << p;
  }
  const auto cubes = geometry_catalog("two-cubes");
  const auto k3 = uniform_knots(3, 1, 1);
  EXPECT_EQ(build_global_space(cubes, 0, k3).dimension(), 12u);
}

TEST(GlobalSpace, ScatterGatherRoundTrip) {
  const auto cube = geometry_catalog("cube-surface");
  for (int role = 0; role <= 2; ++role) {
    const auto space = build_global_space(cube, role, uniform_knots(2, 2, 2));
    const Eigen::VectorXd g = random_vector(space.dimension(), 1);
    double disagreement = -1.0;
    EXPECT_EQ(space.gather(space.scatter(g), &disagreement), g);
    EXPECT_EQ(disagreement, 0.0);
    EXPECT_THROW(space.scatter(Eigen::VectorXd::Zero(2)), std::invalid_argument);
  }
}

TEST(Conformity, MatchingAndMismatchedKnots) {
  const auto two = geometry_catalog("two-squares");
  const auto kv = uniform_knots(2, 2, 2);
  const auto ok = validate_conformity(two, complexes_for(two, kv));
  EXPECT_TRUE(ok.ok()) << ok.summary();

  auto complexes = complexes_for(two, kv);
  complexes[1] = build_complex(2, {KnotVector::uniform(2, 2), KnotVector::uniform(2, 4)});
  const auto bad = validate_conformity(two, complexes);
  EXPECT_FALSE(bad.ok());
  ASSERT_EQ(bad.interfaces.size(), 1u);
  EXPECT_FALSE(bad.interfaces[0].knot_match);
  EXPECT_TRUE(bad.interfaces[0].parametrisation_match);
  EXPECT_THROW(GlobalSpace(two, 0, complexes), ConformityError);

  // refining only across the interface keeps the traces compatible
  complexes[1] = build_complex(2, {KnotVector::uniform(2, 4), KnotVector::uniform(2, 2)});
  EXPECT_TRUE(validate_conformity(two, complexes).ok());

  complexes[1] = build_complex(2, {KnotVector::uniform(3, 2), KnotVector::uniform(3, 2)});
  EXPECT_FALSE(validate_conformity(two, complexes).interfaces[0].degree_match);
}

TEST(Conformity, WrongOrientationReported) {
  auto two = geometry_catalog("two-squares");
  two.interfaces[0].orientation = Orientation::reversed;
  const auto r = validate_conformity(two, complexes_for(two, uniform_knots(2, 2, 2)));
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.interfaces[0].inferred_orientation, Orientation::same);
  EXPECT_FALSE(r.summary().empty());
}

TEST(Jumps, PolynomialAcrossCubeSurface) {
  const auto cube = geometry_catalog("cube-surface");
  const auto space = std::make_shared<const GlobalSpace>(build_global_space(cube, 0, uniform_knots(2, 2, 2)));
  const auto f = global_interpolant(space, [&](std::size_t j, const Vec3& u) {
    const Vec3 x = cube.patch(j).value(u);
    return Vec3(1 + x[0] * x[1] * x[2] - 2 * x[1], 0, 0);
  });
  for (std::size_t i = 0; i < cube.interfaces.size(); ++i) {
    const auto jump = interface_jump(f, i);
    ASSERT_TRUE(jump.has_value());
    EXPECT_LT(*jump, 1e-11);
  }
}

TEST(Jumps, DiscreteGlobalFieldsConform) {
  for (const std::string name : {"cube-surface", "two-squares", "two-cubes"}) {
    const auto g = geometry_catalog(name);
    const auto kv = uniform_knots(g.dim, 2, 2);
    for (int role = 0; role < g.dim; ++role) {
      const auto space = std::make_shared<const GlobalSpace>(build_global_space(g, role, kv));
      const GlobalField f{space, random_vector(space->dimension(), 3 + static_cast<std::uint64_t>(role))};
      for (std::size_t i = 0; i < g.interfaces.size(); ++i) {
        EXPECT_LT(*interface_jump(f, i), 1e-11) << name << " role " << role;
      }
    }
    const auto top = std::make_shared<const GlobalSpace>(build_global_space(g, g.dim, kv));
    EXPECT_FALSE(interface_jump(GlobalField{top, random_vector(top->dimension(), 9)}, 0).has_value());
  }
}

TEST(Jumps, PerturbedLocalCoefficientIsDetected) {
  const auto two = geometry_catalog("two-squares");
  const auto space = std::make_shared<const GlobalSpace>(build_global_space(two, 0, uniform_knots(2, 1, 2)));
  const GlobalField f{space, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space->dimension()))};
  auto fields = f.locals();
  // a local DOF of patch 0 that is shared with patch 1
  const auto& map0 = space->dof_map(0);
  const auto& map1 = space->dof_map(1);
  std::size_t shared = map0.size();
  for (std::size_t k = 0; k < map0.size() && shared == map0.size(); ++k) {
    for (const auto& d : map1) {
      if (d.global == map0[k].global) {
        shared = k;
        break;
      }
    }
  }
  ASSERT_LT(shared, map0.size());
  Eigen::VectorXd c = fields[0].flat();
  c[static_cast<Eigen::Index>(shared)] = 1.0;
  fields[0] = CoefficientField::from_flat(fields[0].space, c);
  // degree 1: the jump is a hat function with peak 1, seen at the sample points
  const double jump = *interface_jump(two, fields, 0, 101);
  EXPECT_GT(jump, 0.98);
  EXPECT_LE(jump, 1.0 + 1e-14);
}

TEST(GlobalInterpolant, SharedDofsAgree) {
  const auto cube = geometry_catalog("cube-surface");
  for (int role = 0; role < 2; ++role) {
    const auto space = std::make_shared<const GlobalSpace>(build_global_space(cube, role, uniform_knots(2, 2, 2)));
    const auto exact = manufactured_solution("trig", role, cube);
    if (role == 1) {
      // per-patch reference fluxes do not glue, only the globally smooth ones do
      const auto pair = derivative_pair(manufactured_solution("trig", 0, cube), cube);
      double dis = -1.0;
      global_interpolant(space, pair.derivative, ProjectorKind::tilde, &dis);
      EXPECT_LT(dis, 1e-11);
    } else {
      double dis = -1.0;
      global_interpolant(space, exact.value, ProjectorKind::tilde, &dis);
      EXPECT_LT(dis, 1e-11);
    }
  }
}

TEST(GlobalCommuting, CubeSurface) {
  const auto cube = geometry_catalog("cube-surface");
  const auto kv = uniform_knots(2, 2, 2);
  const auto complexes = complexes_for(cube, kv);
  const auto f = manufactured_solution("trig", 0, cube);
  const auto r = global_commuting_residual(cube, complexes, {derivative_pair(f, cube)});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_LT(r[0], 1e-10);
}
