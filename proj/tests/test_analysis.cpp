#include "isocx/analysis.hpp"
#include "isocx/catalog.hpp"
#include "isocx/manufactured.hpp"

#include "oracles.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace isocx;
using std::numbers::pi;

namespace {

std::vector<KnotVector> uniform_knots(int dim, int p, std::size_t n) {
  return std::vector<KnotVector>(static_cast<std::size_t>(dim), KnotVector::uniform(p, n));
}

std::shared_ptr<const GlobalSpace> space_on(const std::string& name, int role, int p, std::size_t n) {
  const auto g = geometry_catalog(name);
  return std::make_shared<const GlobalSpace>(build_global_space(g, role, uniform_knots(g.dim, p, n)));
}

GlobalField zero_field(const std::shared_ptr<const GlobalSpace>& s) {
  return {s, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s->dimension()))};
}

GlobalField random_field(const std::shared_ptr<const GlobalSpace>& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(s->dimension()));
  for (auto& x : v) {
    x = u(rng);
  }
  return {s, v};
}

ExactField constant_scalar(double c) {
  return {0, [c](std::size_t, const Vec3&) { return Vec3(c, 0, 0); },
          [](std::size_t, const Vec3&) { return Vec3::Zero().eval(); }};
}

} // namespace

TEST(Norms, Names) {
  for (Norm n : {Norm::L2, Norm::H1semi, Norm::H1, Norm::Hdiv, Norm::Hcurl}) {
    EXPECT_EQ(norm_from_string(to_string(n)), n);
  }
  EXPECT_THROW(norm_from_string("H2"), std::invalid_argument);
  EXPECT_TRUE(norm_applies(Norm::H1, 2, 0));
  EXPECT_TRUE(norm_applies(Norm::Hdiv, 2, 1));
  EXPECT_FALSE(norm_applies(Norm::Hcurl, 2, 1));
  EXPECT_TRUE(norm_applies(Norm::Hcurl, 3, 1));
  EXPECT_TRUE(norm_applies(Norm::Hdiv, 3, 2));
  EXPECT_FALSE(norm_applies(Norm::H1, 3, 3));
}

TEST(Errors, ZeroAgainstConstant) {
  const auto flat = space_on("flat-square", 0, 2, 2);
  EXPECT_NEAR(error_norm(zero_field(flat), constant_scalar(1.0), Norm::L2), 1.0, 1e-13);
  EXPECT_NEAR(error_norm(zero_field(flat), constant_scalar(1.0), Norm::H1semi), 0.0, 1e-14);
  const auto cyl = space_on("cylinder-shell", 0, 2, 2);
  EXPECT_NEAR(error_norm(zero_field(cyl), constant_scalar(1.0), Norm::L2), std::sqrt(pi / 2), 1e-13);
  const auto cube = space_on("cube-surface", 0, 1, 1);
  EXPECT_NEAR(error_norm(zero_field(cube), constant_scalar(2.0), Norm::L2), 2.0 * std::sqrt(6.0), 1e-12);
  const auto vol = space_on("distorted-cube", 3, 2, 2);
  ExactField top{3, [](std::size_t, const Vec3&) { return Vec3(1, 0, 0); }, {}};
  // the distortion fixes the boundary, so the volume stays 1
  EXPECT_NEAR(error_norm(zero_field(vol), top, Norm::L2), 1.0, 1e-10);
}

TEST(Errors, AgainstSimpsonOracle) {
  // f = x on the cylinder: |f|^2 kappa integrated in the parameters
  const auto cyl = space_on("cylinder-shell", 0, 2, 3);
  const auto& F = cyl->geometry().patch(0);
  ExactField f{0, [&](std::size_t, const Vec3& u) { return Vec3(F.value(u)[0], 0, 0); }, {}};
  const double ref = oracle::simpson2([&](double u, double v) {
    const double x = F.value(Vec3(u, v, 0))[0];
    return x * x * (pi / 2);
  });
  EXPECT_NEAR(error_norm(zero_field(cyl), f, Norm::L2), std::sqrt(ref), 1e-10);
}

TEST(Errors, DiscreteFieldAgainstItself) {
  for (const auto& [name, dim] : std::vector<std::pair<std::string, int>>{{"quarter-annulus-nurbs", 2},
                                                                          {"cube-surface", 2},
                                                                          {"distorted-cube", 3}}) {
    for (int role = 0; role <= dim; ++role) {
      const auto s = space_on(name, role, 2, 2);
      const auto f = random_field(s, 1 + static_cast<std::uint64_t>(role));
      const auto exact = discrete_as_exact(s->geometry(), f.locals());
      const auto rep = error_report(s->geometry(), f.locals(), exact, {Norm::L2});
      EXPECT_LT(rep.at(Norm::L2), 1e-12) << name << " role " << role;
      EXPECT_FALSE(rep.has(Norm::H1));
      EXPECT_THROW(rep.at(Norm::H1), std::out_of_range);
    }
  }
}

TEST(Errors, H1IsSumOfParts) {
  const auto s = space_on("quarter-annulus-nurbs", 0, 2, 3);
  const auto f = global_interpolant(s, manufactured_solution("trig", 0, s->geometry()).value);
  const auto exact = manufactured_solution("shifted", 0, s->geometry());
  const auto rep = error_report(s->geometry(), f.locals(), exact, {Norm::L2, Norm::H1semi, Norm::H1});
  EXPECT_NEAR(std::pow(rep.at(Norm::H1), 2), std::pow(rep.at(Norm::L2), 2) + std::pow(rep.at(Norm::H1semi), 2),
              1e-12);
  EXPECT_THROW(error_report(s->geometry(), f.locals(), exact, {Norm::Hdiv}), std::invalid_argument);
  ExactField no_derivative{0, exact.value, {}};
  EXPECT_THROW(error_report(s->geometry(), f.locals(), no_derivative, {Norm::H1}), std::invalid_argument);
}

TEST(Gram, SymmetricPositiveDefinite) {
  for (const auto& [name, role, norm] : std::vector<std::tuple<std::string, int, Norm>>{
           {"flat-square", 0, Norm::L2},
           {"cylinder-shell", 0, Norm::H1},
           {"cube-surface", 1, Norm::Hdiv},
           {"unit-cube", 1, Norm::Hcurl},
           {"distorted-cube", 2, Norm::Hdiv}}) {
    const auto s = space_on(name, role, 2, 2);
    const Eigen::MatrixXd G = assemble_gram(*s, norm);
    EXPECT_LT((G - G.transpose()).cwiseAbs().maxCoeff(), 1e-12 * G.cwiseAbs().maxCoeff());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0) << name;
  }
}

TEST(Gram, MassMatrixOracle) {
  // p=1 on one element: the 1D mass matrix is [2 1; 1 2] / 6
  const auto s = space_on("flat-square", 0, 1, 1);
  const Eigen::MatrixXd G = assemble_gram(*s, Norm::L2);
  Eigen::Matrix2d m;
  m << 2, 1, 1, 2;
  m /= 6.0;
  Eigen::Matrix4d expected;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      expected.block<2, 2>(2 * i, 2 * j) = m(i, j) * m;
    }
  }
  EXPECT_LT((G - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Projection, ReproducesDiscreteFields) {
  for (int role = 0; role <= 2; ++role) {
    const auto s = space_on("quarter-annulus-nurbs", role, 2, 2);
    const auto f = random_field(s, 10 + static_cast<std::uint64_t>(role));
    const auto p = l2_project(s, discrete_as_exact(s->geometry(), f.locals()));
    EXPECT_LT((p.coefficients - f.coefficients).cwiseAbs().maxCoeff(), 1e-10) << "role " << role;
  }
  const auto s = space_on("cylinder-shell", 0, 2, 2);
  const auto c = l2_project(s, constant_scalar(3.0));
  EXPECT_LT((c.coefficients.array() - 3.0).abs().maxCoeff(), 1e-11);
}

TEST(Projection, BestApproximation) {
  const auto s = space_on("cylinder-shell", 0, 2, 4);
  const auto exact = manufactured_solution("trig", 0, s->geometry());
  const auto proj = l2_project(s, exact);
  const auto interp = global_interpolant(s, exact.value);
  EXPECT_LE(error_norm(proj, exact, Norm::L2), error_norm(interp, exact, Norm::L2));
  // any perturbation increases the error
  auto other = proj;
  other.coefficients[3] += 1e-3;
  EXPECT_GT(error_norm(other, exact, Norm::L2), error_norm(proj, exact, Norm::L2));

  const auto h1 = orthogonal_project(s, exact, Norm::H1);
  EXPECT_LT(h1.residual, 1e-10);
  EXPECT_LE(error_norm(h1.field, exact, Norm::H1), error_norm(interp, exact, Norm::H1));
}

TEST(Quadrature, PointsForComplex) {
  EXPECT_EQ(quadrature_points_for(build_complex(2, uniform_knots(2, 3, 2))), 5);
}
