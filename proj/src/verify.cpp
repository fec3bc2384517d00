#include "isocx/verify.hpp"

#include "isocx/catalog.hpp"
#include "isocx/convergence.hpp"
#include "isocx/manufactured.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace isocx {

void VerifyOptions::validate() const {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("verify: dimension must be 2 or 3");
  }
  if (degree < 1 || degree > 8) {
    throw std::invalid_argument("verify: degree must lie in [1, 8]");
  }
  if (levels < 1) {
    throw std::invalid_argument("verify: need at least one level");
  }
  if (initial_elements < 1) {
    throw std::invalid_argument("verify: need at least one element");
  }
  if (random_fields < 1) {
    throw std::invalid_argument("verify: need at least one random field");
  }
}

PatchwiseFunction random_smooth_field(const MultipatchGeometry& geom, int role, std::uint64_t seed) {
  if (role < 0 || role >= geom.dim) {
    throw std::invalid_argument("random_smooth_field: role out of range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wave(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 6.0);
  // three plane waves sin(k.x + c)
  std::array<Vec3, 3> k;
  std::array<double, 3> c{};
  for (int i = 0; i < 3; ++i) {
    k[static_cast<std::size_t>(i)] = Vec3(wave(rng), wave(rng), wave(rng)) * 3.0;
    c[static_cast<std::size_t>(i)] = phase(rng);
  }
  auto patches = geom.patches;
  if (role == 0) {
    return [patches, k, c](std::size_t j, const Vec3& u) {
      return Vec3(std::sin(k[0].dot(patches.at(j)->value(u)) + c[0]), 0.0, 0.0);
    };
  }
  if (geom.dim == 2) {
    return [patches, k, c](std::size_t j, const Vec3& u) -> Vec3 {
      const Vec3 grad = std::cos(k[0].dot(patches.at(j)->value(u)) + c[0]) * k[0];
      return grad.cross(surface_normal(*patches.at(j), u));
    };
  }
  return [patches, k, c](std::size_t j, const Vec3& u) {
    const Vec3 x = patches.at(j)->value(u);
    return Vec3(std::sin(k[0].dot(x) + c[0]), std::sin(k[1].dot(x) + c[1]), std::sin(k[2].dot(x) + c[2]));
  };
}

InterfaceCheckReport check_interfaces(const MultipatchGeometry& geom, const std::vector<std::vector<KnotVector>>& knots,
                                      std::uint64_t seed, int samples) {
  if (knots.size() != geom.size()) {
    throw std::invalid_argument("check_interfaces: need one list of knot vectors per patch");
  }
  InterfaceCheckReport report;
  std::vector<SplineComplex> complexes;
  for (const auto& kv : knots) {
    complexes.push_back(build_complex(geom.dim, kv));
  }
  report.conformity = validate_conformity(geom, complexes);
  if (!report.conformity.ok()) {
    return report;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  bool pass = true;
  for (int role = 0; role < geom.dim; ++role) {
    auto space = std::make_shared<const GlobalSpace>(geom, role, complexes);
    std::vector<std::pair<std::string, GlobalField>> fields;
    try {
      fields.emplace_back("smooth", global_interpolant(space, random_smooth_field(geom, role, rng())));
    } catch (const ConformityError& e) {
      report.error = e.what();
      return report;
    }
    Eigen::VectorXd c(static_cast<Eigen::Index>(space->dimension()));
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      c[i] = dist(rng);
    }
    fields.emplace_back("discrete", GlobalField{space, c});
    for (const auto& [name, field] : fields) {
      for (std::size_t i = 0; i < geom.interfaces.size(); ++i) {
        const auto jump = interface_jump(field, i, samples);
        if (!jump) {
          continue;
        }
        InterfaceJumpResult r{i, role, name, *jump, *jump <= kInterfaceTolerance};
        pass = pass && r.pass;
        report.jumps.push_back(r);
      }
    }
  }
  report.passed = pass;
  return report;
}

std::vector<std::string> derivative_names(int dim) {
  if (dim == 2) {
    return {"curl", "div"};
  }
  return {"grad", "curl", "div"};
}

namespace {

// Dyadic coefficients: every product with a dyadic difference factor and
// every sum of such products stays exact in double precision.
CoefficientField random_dyadic(const ComplexSpace& space, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-(1 << 20), 1 << 20);
  Eigen::VectorXd c(static_cast<Eigen::Index>(space.dimension()));
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c[i] = std::ldexp(static_cast<double>(dist(rng)), -10);
  }
  return CoefficientField::from_flat(space, c);
}

Eigen::VectorXd partial(const CoefficientField& f, int component, int axis, bool corrupt) {
  const auto shape = f.space.shape(component);
  auto scales = f.space.factors(component)[static_cast<std::size_t>(axis)].derivative_scales();
  if (corrupt && axis == 0 && !scales.empty()) {
    scales.front() *= 1.0 + 1e-3;
  }
  return axis_derivative(f.components[static_cast<std::size_t>(component)], shape, axis, scales);
}

// Last operator of a chain with the axis-0 difference factor perturbed.
CoefficientField corrupted_last(const CoefficientField& f) {
  const auto& base = f.space.base_knots();
  if (f.space.dim() == 2) {
    return CoefficientField(ComplexSpace(2, 2, base), {partial(f, 0, 0, true) + partial(f, 1, 1, true)});
  }
  if (f.space.role() == 1) {
    return CoefficientField(ComplexSpace(3, 2, base),
                            {partial(f, 2, 1, true) - partial(f, 1, 2, true),
                             partial(f, 0, 2, true) - partial(f, 2, 0, true),
                             partial(f, 1, 0, true) - partial(f, 0, 1, true)});
  }
  return CoefficientField(ComplexSpace(3, 3, base),
                          {partial(f, 0, 0, true) + partial(f, 1, 1, true) + partial(f, 2, 2, true)});
}

double max_abs(const CoefficientField& f) {
  double m = 0.0;
  for (const auto& c : f.components) {
    if (c.size() > 0) {
      m = std::max(m, c.cwiseAbs().maxCoeff());
    }
  }
  return m;
}

} // namespace

VerifyReport verify_complex(const VerifyOptions& options) {
  options.validate();
  VerifyReport report;
  report.options = options;
  const std::string name = options.geometry.empty() ? (options.dim == 2 ? "flat-square" : "unit-cube") : options.geometry;
  const MultipatchGeometry geom = geometry_catalog(name);
  if (geom.dim != options.dim) {
    throw std::invalid_argument("verify: geometry '" + name + "' has dimension " + std::to_string(geom.dim) +
                                ", not " + std::to_string(options.dim));
  }
  report.geometry_name = geom.name;
  std::mt19937_64 rng(options.seed);
  const auto names = derivative_names(options.dim);
  bool pass = true;

  for (int level = 0; level < options.levels; ++level) {
    const std::size_t n = options.initial_elements << level;
    std::vector<KnotVector> knots(static_cast<std::size_t>(options.dim), KnotVector::uniform(options.degree, n));
    const SplineComplex complex = build_complex(options.dim, knots);

    // d(d f) for every role that has two derivatives above it
    for (int role = 0; role + 2 <= options.dim; ++role) {
      ExactnessResult ex;
      ex.composition = names[static_cast<std::size_t>(role) + 1] + "(" + names[static_cast<std::size_t>(role)] + ")";
      ex.level = level;
      ex.fields = options.random_fields;
      for (int k = 0; k < options.random_fields; ++k) {
        const CoefficientField f = random_dyadic(complex.role(role), rng);
        const CoefficientField df = exterior_derivative(f);
        const CoefficientField ddf = options.corrupt_derivative ? corrupted_last(df) : exterior_derivative(df);
        ex.max_abs = std::max(ex.max_abs, max_abs(ddf));
      }
      ex.pass = ex.max_abs == 0.0;
      pass = pass && ex.pass;
      report.exactness.push_back(ex);
    }

    std::vector<DerivativePair> pairs;
    for (int role = 0; role < options.dim; ++role) {
      pairs.push_back(derivative_pair(manufactured_solution("trig", role, geom), geom));
    }
    const std::vector<SplineComplex> complexes(geom.size(), complex);
    for (ProjectorKind kind : {ProjectorKind::tilde, ProjectorKind::plain}) {
      const auto res = global_commuting_residual(geom, complexes, pairs, kind);
      for (std::size_t t = 0; t < res.size(); ++t) {
        CommutingResult c;
        c.transition = names[t];
        c.level = level;
        c.kind = kind;
        c.residual = res[t];
        c.pass = res[t] < kCommutingTolerance;
        pass = pass && c.pass;
        report.commuting.push_back(c);
      }
    }
  }
  report.passed = pass;
  return report;
}

} // namespace isocx
